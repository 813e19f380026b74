#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefact/error.hpp"
#include "prefact/unicode.hpp"

namespace prefact {

using json = nlohmann::json;

enum class FactualityLabel { low, mixed, high };

inline std::string to_string(FactualityLabel l) {
    switch (l) {
        case FactualityLabel::low: return "low";
        case FactualityLabel::mixed: return "mixed";
        case FactualityLabel::high: return "high";
    }
    return "low";
}

inline FactualityLabel factuality_label_from_string(const std::string& s) {
    if (s == "low") return FactualityLabel::low;
    if (s == "mixed") return FactualityLabel::mixed;
    if (s == "high") return FactualityLabel::high;
    throw ValidationError("unknown factuality label '" + s + "' (expected low|mixed|high)");
}

struct ArticleRecord {
    std::string id;
    std::string source_domain;
    std::string url;
    std::string title;
    std::string body;
    std::int64_t published_at = 0;  // UTC seconds
    std::string language_tag;      // two lowercase ASCII letters

    bool operator==(const ArticleRecord&) const = default;
};

struct WikipediaInfo {
    std::string page_text;
    bool has_infobox = false;
    std::vector<std::string> categories;

    bool operator==(const WikipediaInfo&) const = default;
};

struct TwitterInfo {
    std::int64_t created_at = 0;  // UTC seconds
    bool verified = false;
    std::int64_t followers = 0;
    std::string description;
    std::optional<std::string> linked_url;

    bool operator==(const TwitterInfo&) const = default;
};

struct OutletRecord {
    std::string domain;
    std::optional<WikipediaInfo> wikipedia;
    std::optional<TwitterInfo> twitter;
    std::optional<std::int64_t> traffic_rank;           // 1 = most popular
    std::map<std::string, double> external_scores;      // channels 4-6 only
    std::optional<FactualityLabel> label;
    std::optional<std::string> ideology;                // ingested annotations
    std::vector<std::string> frames;
    std::optional<std::string> hyper_partisanship;

    bool operator==(const OutletRecord&) const = default;
};

struct Corpus {
    std::vector<ArticleRecord> articles;
    std::map<std::string, OutletRecord> outlets;
};

// ---------------------------------------------------------------------------
// Domain normalization

// Lowercases and strips scheme, userinfo, port, path, query, fragment, and
// any leading "www." labels. Internationalized labels are kept in whatever
// encoding they arrived in (no punycode conversion).
inline std::string normalize_domain(const std::string& url_or_domain) {
    std::string s = url_or_domain;
    // trim ASCII whitespace
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    if (s.empty()) throw ValidationError("cannot extract host from empty input");

    auto scheme = s.find("://");
    if (scheme != std::string::npos) {
        s = s.substr(scheme + 3);
    } else if (s.rfind("//", 0) == 0) {
        s = s.substr(2);
    }
    s = s.substr(0, s.find_first_of("/?#"));
    auto at = s.rfind('@');
    if (at != std::string::npos) s = s.substr(at + 1);
    auto colon = s.find(':');
    if (colon != std::string::npos) s = s.substr(0, colon);

    for (char& c : s) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 0x20);
    }
    while (!s.empty() && s.back() == '.') s.pop_back();
    while (s.rfind("www.", 0) == 0 && s.size() > 4) s = s.substr(4);

    bool has_alnum = false;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c >= 0x80) {
            has_alnum = true;
            break;
        }
    }
    if (s.empty() || !has_alnum) {
        throw ValidationError("cannot extract host from '" + url_or_domain + "'");
    }
    return s;
}

// ---------------------------------------------------------------------------
// Canonical JSON forms. Objects serialize with alphabetically sorted keys
// (nlohmann's default map) and optional fields omitted when absent, so the
// byte form is stable.

inline json to_json(const ArticleRecord& a) {
    return json{{"body", a.body},
                {"id", a.id},
                {"language_tag", a.language_tag},
                {"published_at", a.published_at},
                {"source_domain", a.source_domain},
                {"title", a.title},
                {"url", a.url}};
}

inline json to_json(const OutletRecord& o) {
    json j{{"domain", o.domain}};
    if (o.wikipedia) {
        j["wikipedia"] = json{{"categories", o.wikipedia->categories},
                              {"has_infobox", o.wikipedia->has_infobox},
                              {"page_text", o.wikipedia->page_text}};
    }
    if (o.twitter) {
        json t{{"created_at", o.twitter->created_at},
               {"description", o.twitter->description},
               {"followers", o.twitter->followers},
               {"verified", o.twitter->verified}};
        if (o.twitter->linked_url) t["linked_url"] = *o.twitter->linked_url;
        j["twitter"] = std::move(t);
    }
    if (o.traffic_rank) j["traffic_rank"] = *o.traffic_rank;
    if (!o.external_scores.empty()) j["external_scores"] = o.external_scores;
    if (o.label) j["label"] = to_string(*o.label);
    if (o.ideology) j["ideology"] = *o.ideology;
    if (!o.frames.empty()) j["frames"] = o.frames;
    if (o.hyper_partisanship) j["hyper_partisanship"] = *o.hyper_partisanship;
    return j;
}

namespace detail {

inline const std::unordered_set<std::string> kArticleFields = {
    "body", "id", "language_tag", "published_at", "source_domain", "title", "url"};
inline const std::unordered_set<std::string> kOutletFields = {
    "domain",         "wikipedia", "twitter",  "traffic_rank",       "external_scores",
    "label",          "ideology",  "frames",   "hyper_partisanship"};
inline const std::unordered_set<std::string> kExternalChannels = {"audience_links",
                                                                  "audience_bias", "speech"};

inline void require_fields(const json& j, const std::unordered_set<std::string>& allowed,
                           const std::vector<std::string>& required, const std::string& what) {
    if (!j.is_object()) throw ValidationError(what + " record is not an object");
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) {
            throw ValidationError(what + " record has unknown field '" + item.key() + "'");
        }
    }
    for (const auto& f : required) {
        if (!j.contains(f)) {
            throw ValidationError(what + " record is missing required field '" + f + "'");
        }
    }
}

inline std::string get_string(const json& j, const std::string& field) {
    if (!j.at(field).is_string()) throw ValidationError("field '" + field + "' must be a string");
    return j.at(field).get<std::string>();
}

inline std::int64_t get_int(const json& j, const std::string& field) {
    if (!j.at(field).is_number_integer()) {
        throw ValidationError("field '" + field + "' must be an integer");
    }
    return j.at(field).get<std::int64_t>();
}

inline bool get_bool(const json& j, const std::string& field) {
    if (!j.at(field).is_boolean()) throw ValidationError("field '" + field + "' must be a boolean");
    return j.at(field).get<bool>();
}

}  // namespace detail

inline ArticleRecord article_from_json(const json& j) {
    detail::require_fields(j, detail::kArticleFields,
                           {"body", "id", "language_tag", "published_at", "source_domain", "title",
                            "url"},
                           "article");
    ArticleRecord a;
    a.id = detail::get_string(j, "id");
    a.source_domain = detail::get_string(j, "source_domain");
    a.url = detail::get_string(j, "url");
    a.title = detail::get_string(j, "title");
    a.body = detail::get_string(j, "body");
    a.published_at = detail::get_int(j, "published_at");
    a.language_tag = detail::get_string(j, "language_tag");

    if (a.id.empty()) throw ValidationError("article id must be non-empty");
    if (a.body.empty()) throw ValidationError("article '" + a.id + "' has empty body");
    if (a.language_tag.size() != 2 || !std::isalpha(static_cast<unsigned char>(a.language_tag[0])) ||
        !std::isalpha(static_cast<unsigned char>(a.language_tag[1]))) {
        throw ValidationError("article '" + a.id + "' has bad language_tag '" + a.language_tag +
                              "' (want two letters)");
    }
    for (char& c : a.language_tag) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    std::string canon = normalize_domain(a.url);
    if (a.source_domain != canon) {
        throw ValidationError("article '" + a.id + "': source_domain '" + a.source_domain +
                              "' does not match normalized url host '" + canon + "'");
    }
    return a;
}

inline OutletRecord outlet_from_json(const json& j) {
    detail::require_fields(j, detail::kOutletFields, {"domain"}, "outlet");
    OutletRecord o;
    o.domain = detail::get_string(j, "domain");
    if (o.domain != normalize_domain(o.domain)) {
        throw ValidationError("outlet domain '" + o.domain + "' is not canonical (expected '" +
                              normalize_domain(o.domain) + "')");
    }
    if (j.contains("wikipedia")) {
        const json& w = j.at("wikipedia");
        detail::require_fields(w, {"page_text", "has_infobox", "categories"},
                               {"page_text", "has_infobox", "categories"}, "outlet.wikipedia");
        WikipediaInfo wi;
        wi.page_text = detail::get_string(w, "page_text");
        wi.has_infobox = detail::get_bool(w, "has_infobox");
        if (!w.at("categories").is_array()) {
            throw ValidationError("field 'categories' must be an array of strings");
        }
        for (const auto& c : w.at("categories")) wi.categories.push_back(c.get<std::string>());
        o.wikipedia = std::move(wi);
    }
    if (j.contains("twitter")) {
        const json& t = j.at("twitter");
        detail::require_fields(t, {"created_at", "verified", "followers", "description",
                                   "linked_url"},
                               {"created_at", "verified", "followers", "description"},
                               "outlet.twitter");
        TwitterInfo ti;
        ti.created_at = detail::get_int(t, "created_at");
        ti.verified = detail::get_bool(t, "verified");
        ti.followers = detail::get_int(t, "followers");
        ti.description = detail::get_string(t, "description");
        if (t.contains("linked_url")) ti.linked_url = detail::get_string(t, "linked_url");
        if (ti.followers < 0) {
            throw ValidationError("outlet '" + o.domain + "': followers must be >= 0");
        }
        o.twitter = std::move(ti);
    }
    if (j.contains("traffic_rank")) {
        o.traffic_rank = detail::get_int(j, "traffic_rank");
        if (*o.traffic_rank < 1) {
            throw ValidationError("outlet '" + o.domain + "': traffic_rank must be >= 1");
        }
    }
    if (j.contains("external_scores")) {
        const json& e = j.at("external_scores");
        if (!e.is_object()) throw ValidationError("field 'external_scores' must be an object");
        for (const auto& item : e.items()) {
            if (!detail::kExternalChannels.count(item.key())) {
                throw ValidationError("outlet '" + o.domain + "': unknown external channel '" +
                                      item.key() + "'");
            }
            double v = item.value().get<double>();
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ValidationError("outlet '" + o.domain + "': external score for '" +
                                      item.key() + "' outside [0,1]");
            }
            o.external_scores[item.key()] = v;
        }
    }
    if (j.contains("label")) o.label = factuality_label_from_string(detail::get_string(j, "label"));
    if (j.contains("ideology")) o.ideology = detail::get_string(j, "ideology");
    if (j.contains("frames")) {
        if (!j.at("frames").is_array()) throw ValidationError("field 'frames' must be an array");
        for (const auto& f : j.at("frames")) o.frames.push_back(f.get<std::string>());
    }
    if (j.contains("hyper_partisanship")) {
        o.hyper_partisanship = detail::get_string(j, "hyper_partisanship");
    }
    return o;
}

// ---------------------------------------------------------------------------
// Stream parsing: UTF-8, one JSON object per line.

inline std::vector<ArticleRecord> parse_article_stream(std::istream& in) {
    std::vector<ArticleRecord> out;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("malformed article record: ") + e.what(), line_no);
        }
        ArticleRecord a;
        try {
            a = article_from_json(j);
        } catch (const Error& e) {
            throw ParseError(e.what(), line_no);
        }
        if (!seen_ids.insert(a.id).second) {
            throw ParseError("duplicate article id '" + a.id + "'", line_no);
        }
        out.push_back(std::move(a));
    }
    return out;
}

inline std::vector<OutletRecord> parse_outlet_stream(std::istream& in) {
    std::vector<OutletRecord> out;
    std::unordered_set<std::string> seen;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("malformed outlet record: ") + e.what(), line_no);
        }
        OutletRecord o;
        try {
            o = outlet_from_json(j);
        } catch (const Error& e) {
            throw ParseError(e.what(), line_no);
        }
        if (!seen.insert(o.domain).second) {
            throw ParseError("duplicate outlet domain '" + o.domain + "'", line_no);
        }
        out.push_back(std::move(o));
    }
    return out;
}

// Builds a Corpus, auto-registering an empty OutletRecord for every article
// domain that has no metadata entry so text-only profiling works alone.
inline Corpus make_corpus(std::vector<ArticleRecord> articles, std::vector<OutletRecord> outlets) {
    Corpus c;
    c.articles = std::move(articles);
    for (auto& o : outlets) {
        std::string domain = o.domain;
        if (!c.outlets.emplace(domain, std::move(o)).second) {
            throw ValidationError("duplicate outlet domain '" + domain + "'");
        }
    }
    for (const auto& a : c.articles) {
        if (!c.outlets.count(a.source_domain)) {
            OutletRecord blank;
            blank.domain = a.source_domain;
            c.outlets.emplace(a.source_domain, std::move(blank));
        }
    }
    return c;
}

// Partition by domain; within a group newest first, ties by ascending id.
inline std::map<std::string, std::vector<ArticleRecord>> group_by_outlet(const Corpus& corpus) {
    std::map<std::string, std::vector<ArticleRecord>> groups;
    for (const auto& a : corpus.articles) groups[a.source_domain].push_back(a);
    for (auto& [domain, group] : groups) {
        std::sort(group.begin(), group.end(), [](const ArticleRecord& x, const ArticleRecord& y) {
            if (x.published_at != y.published_at) return x.published_at > y.published_at;
            return x.id < y.id;
        });
    }
    return groups;
}

}  // namespace prefact
