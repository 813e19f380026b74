#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefact/error.hpp"
#include "prefact/util.hpp"
#include "prefact/verdict.hpp"

namespace prefact {

// An immutable published view of the store. Readers hold a shared_ptr and are
// unaffected by later publishes.
struct ProfileSnapshot {
    std::map<std::string, MediaProfile> profiles;
    std::int64_t snapshot_id = 0;
    std::int64_t created_at = 0;
};

inline json to_json(const ProfileSnapshot& s) {
    json profiles;
    for (const auto& [domain, p] : s.profiles) profiles[domain] = to_json(p);
    return json{{"created_at", s.created_at},
                {"format", "prefact-snapshot"},
                {"profiles", std::move(profiles)},
                {"snapshot_id", s.snapshot_id},
                {"version", 1}};
}

inline ProfileSnapshot snapshot_from_json(const json& j) {
    if (!j.is_object() || j.value("format", "") != "prefact-snapshot") {
        throw ValidationError("not a prefact snapshot document");
    }
    if (j.value("version", 0) != 1) throw ValidationError("unsupported snapshot version");
    ProfileSnapshot s;
    s.snapshot_id = j.at("snapshot_id").get<std::int64_t>();
    s.created_at = j.at("created_at").get<std::int64_t>();
    for (const auto& item : j.at("profiles").items()) {
        MediaProfile p = profile_from_json(item.value());
        if (p.domain != item.key()) {
            throw ValidationError("snapshot key '" + item.key() + "' does not match profile domain");
        }
        s.profiles.emplace(item.key(), std::move(p));
    }
    return s;
}

// File-backed, single-writer/many-reader store.
//
// Layout under the root directory:
//   snapshots/NNNNNN.json   one canonical document per published snapshot
//   CURRENT                 name of the live snapshot file
//   verdicts.jsonl          append-only claim verdict log (one per line)
//
// Every publish writes the new snapshot to a temp file, renames it into
// place, then swings CURRENT (also via rename). A crash at any point leaves
// the previous state loadable.
class ProfileStore {
public:
    explicit ProfileStore(std::filesystem::path root) : root_(std::move(root)) {
        std::filesystem::create_directories(root_ / "snapshots");
        current_ = std::make_shared<const ProfileSnapshot>(load_current());
    }

    const std::filesystem::path& root() const { return root_; }

    std::shared_ptr<const ProfileSnapshot> snapshot() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return current_;
    }

    // Replaces the domain's profile, bumping profile_version only when the
    // content (timestamps excluded) actually changed. Returns the new
    // snapshot id.
    std::int64_t put_profile(MediaProfile profile, std::int64_t now) {
        std::lock_guard<std::mutex> lock(mutex_);
        ProfileSnapshot next;
        next.profiles = current_->profiles;
        next.snapshot_id = current_->snapshot_id + 1;
        next.created_at = now;

        auto it = next.profiles.find(profile.domain);
        if (it == next.profiles.end()) {
            profile.profile_version = 1;
        } else if (profile_content_hash(profile) == profile_content_hash(it->second)) {
            profile.profile_version = it->second.profile_version;
        } else {
            profile.profile_version = it->second.profile_version + 1;
        }
        next.profiles[profile.domain] = std::move(profile);

        publish(next);
        current_ = std::make_shared<const ProfileSnapshot>(std::move(next));
        return current_->snapshot_id;
    }

    // Bulk publish: one snapshot for a whole profiling run.
    std::int64_t put_profiles(std::vector<MediaProfile> profiles, std::int64_t now) {
        std::lock_guard<std::mutex> lock(mutex_);
        ProfileSnapshot next;
        next.profiles = current_->profiles;
        next.snapshot_id = current_->snapshot_id + 1;
        next.created_at = now;
        for (auto& profile : profiles) {
            auto it = next.profiles.find(profile.domain);
            if (it == next.profiles.end()) {
                profile.profile_version = 1;
            } else if (profile_content_hash(profile) == profile_content_hash(it->second)) {
                profile.profile_version = it->second.profile_version;
            } else {
                profile.profile_version = it->second.profile_version + 1;
            }
            next.profiles[profile.domain] = std::move(profile);
        }
        publish(next);
        current_ = std::make_shared<const ProfileSnapshot>(std::move(next));
        return current_->snapshot_id;
    }

    void append_verdict(const ClaimVerdict& v) {
        std::lock_guard<std::mutex> lock(mutex_);
        std::filesystem::path path = root_ / "verdicts.jsonl";
        std::string contents;
        if (std::filesystem::exists(path)) contents = read_file(path);
        contents += to_json(v).dump();
        contents += '\n';
        write_file_atomic(path, contents);
    }

    std::vector<json> verdicts() const {
        std::lock_guard<std::mutex> lock(mutex_);
        std::filesystem::path path = root_ / "verdicts.jsonl";
        std::vector<json> out;
        if (!std::filesystem::exists(path)) return out;
        std::ifstream in(path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            try {
                out.push_back(json::parse(line));
            } catch (const json::exception& e) {
                throw ParseError(std::string("bad verdict record: ") + e.what(), line_no);
            }
        }
        return out;
    }

private:
    static std::string snapshot_file_name(std::int64_t id) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%06lld.json", static_cast<long long>(id));
        return buf;
    }

    ProfileSnapshot load_current() const {
        std::filesystem::path current_file = root_ / "CURRENT";
        if (!std::filesystem::exists(current_file)) return ProfileSnapshot{};
        std::string name = read_file(current_file);
        while (!name.empty() && (name.back() == '\n' || name.back() == '\r')) name.pop_back();
        if (name.empty()) return ProfileSnapshot{};
        std::filesystem::path snap_path = root_ / "snapshots" / name;
        std::string raw;
        try {
            raw = read_file(snap_path);
        } catch (const std::exception& e) {
            throw StoreError("cannot read snapshot file '" + name + "': " + e.what());
        }
        try {
            return snapshot_from_json(json::parse(raw));
        } catch (const std::exception& e) {
            throw StoreError("corrupt snapshot file '" + name + "': " + e.what());
        }
    }

    void publish(const ProfileSnapshot& snap) {
        std::string name = snapshot_file_name(snap.snapshot_id);
        std::string body = to_json(snap).dump(2);
        body += '\n';
        write_file_atomic(root_ / "snapshots" / name, body);
        write_file_atomic(root_ / "CURRENT", name + "\n");
    }

    std::filesystem::path root_;
    mutable std::mutex mutex_;
    std::shared_ptr<const ProfileSnapshot> current_;
};

}  // namespace prefact
