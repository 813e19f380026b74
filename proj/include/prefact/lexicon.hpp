#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "prefact/error.hpp"
#include "prefact/unicode.hpp"

namespace prefact {

// A flat token list with optional per-token weights. Backs every cue channel
// (subjectivity, sentiment, offensiveness, propaganda cues, stopwords,
// negators); adding a channel means adding a file, not an algorithm.
class Lexicon {
public:
    Lexicon(std::string name, std::unordered_set<std::string> entries,
            std::unordered_map<std::string, double> weights = {})
        : name_(std::move(name)), entries_(std::move(entries)), weights_(std::move(weights)) {
        if (entries_.empty()) throw ValidationError("lexicon '" + name_ + "' has no entries");
        for (const auto& e : entries_) validate_entry(e);
    }

    const std::string& name() const { return name_; }
    std::size_t size() const { return entries_.size(); }
    bool contains(const std::string& token) const { return entries_.count(token) > 0; }

    // Weight of a member token (default 1.0); 0.0 for non-members.
    double weight_of(const std::string& token) const {
        if (!contains(token)) return 0.0;
        auto it = weights_.find(token);
        return it == weights_.end() ? 1.0 : it->second;
    }

    // File format: UTF-8, one entry per line, "token<TAB>weight" with the
    // weight optional; lines starting with '#' and blank lines are skipped.
    static Lexicon load(const std::filesystem::path& path, const std::string& name = "") {
        std::ifstream in(path);
        if (!in) throw Error("cannot open lexicon file: " + path.string());
        std::unordered_set<std::string> entries;
        std::unordered_map<std::string, double> weights;
        std::string line;
        long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            std::string token = line;
            auto tab = line.find('\t');
            if (tab != std::string::npos) {
                token = line.substr(0, tab);
                std::string w = line.substr(tab + 1);
                try {
                    weights[token] = std::stod(w);
                } catch (const std::exception&) {
                    throw ParseError("bad weight '" + w + "' in " + path.string(), line_no);
                }
            }
            if (token.empty()) throw ParseError("empty token in " + path.string(), line_no);
            entries.insert(token);
        }
        return Lexicon(name.empty() ? path.stem().string() : name, std::move(entries),
                       std::move(weights));
    }

private:
    void validate_entry(const std::string& e) const {
        std::size_t i = 0;
        while (i < e.size()) {
            char32_t cp = detail::decode_utf8(e, i);
            if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r') {
                throw ValidationError("lexicon '" + name_ + "' entry contains whitespace: '" + e +
                                      "'");
            }
            if (detail::to_lower_cp(cp) != cp) {
                throw ValidationError("lexicon '" + name_ + "' entry is not lowercase: '" + e +
                                      "'");
            }
        }
    }

    std::string name_;
    std::unordered_set<std::string> entries_;
    std::unordered_map<std::string, double> weights_;
};

}  // namespace prefact
