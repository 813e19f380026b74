#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "prefact/ingest.hpp"
#include "prefact/textfeat.hpp"

namespace prefact {

// The eight evidence channels an outlet can be judged from. Channels 4-6
// (audience_links, audience_bias, speech) are ingest-only: their scores come
// precomputed in OutletRecord.external_scores.
enum class Channel {
    text,
    wikipedia,
    twitter,
    audience_links,
    audience_bias,
    speech,
    traffic,
    url,
};

inline constexpr std::array<Channel, 8> kAllChannels = {
    Channel::text,          Channel::wikipedia, Channel::twitter, Channel::audience_links,
    Channel::audience_bias, Channel::speech,    Channel::traffic, Channel::url};

inline std::string to_string(Channel c) {
    switch (c) {
        case Channel::text: return "text";
        case Channel::wikipedia: return "wikipedia";
        case Channel::twitter: return "twitter";
        case Channel::audience_links: return "audience_links";
        case Channel::audience_bias: return "audience_bias";
        case Channel::speech: return "speech";
        case Channel::traffic: return "traffic";
        case Channel::url: return "url";
    }
    return "text";
}

inline Channel channel_from_string(const std::string& s) {
    for (Channel c : kAllChannels) {
        if (to_string(c) == s) return c;
    }
    throw ValidationError("unknown channel '" + s + "'");
}

// One channel's evidence for one outlet. group_score is oriented so that
// higher means more reliability evidence. When available is false the vector
// is empty and group_score must be ignored.
struct FeatureGroupReport {
    Channel channel = Channel::text;
    bool available = false;
    std::vector<std::pair<std::string, double>> features;
    double group_score = 0.0;  // [0,1]
};

// ---------------------------------------------------------------------------
// Wikipedia channel: presence of a page is weak positive evidence; cue
// phrases like "conspiracy theories" in the page text cut the score down.

inline FeatureGroupReport wikipedia_features(const OutletRecord& outlet,
                                             const std::vector<std::string>& cue_phrases) {
    FeatureGroupReport r;
    r.channel = Channel::wikipedia;
    if (!outlet.wikipedia) return r;
    r.available = true;
    const WikipediaInfo& w = *outlet.wikipedia;
    std::string page_lower = lowercase(w.page_text);
    double hits = 0.0;
    for (const auto& cue : cue_phrases) {
        if (!cue.empty() && page_lower.find(lowercase(cue)) != std::string::npos) hits += 1.0;
    }
    r.features = {{"has_page", 1.0},
                  {"has_infobox", w.has_infobox ? 1.0 : 0.0},
                  {"negative_cue_hits", hits},
                  {"category_count", static_cast<double>(w.categories.size())}};
    r.group_score = 1.0 / (1.0 + hits);
    return r;
}

// ---------------------------------------------------------------------------
// Twitter channel: old, verified, popular accounts that link back to the
// outlet's own site score high.

inline FeatureGroupReport twitter_features(const OutletRecord& outlet, std::int64_t now) {
    FeatureGroupReport r;
    r.channel = Channel::twitter;
    if (!outlet.twitter) return r;
    r.available = true;
    const TwitterInfo& t = *outlet.twitter;

    constexpr double kSecondsPerYear = 365.25 * 86400.0;
    double age_years = std::max(0.0, static_cast<double>(now - t.created_at) / kSecondsPerYear);
    double follower_log10 = std::log10(static_cast<double>(std::max<std::int64_t>(1, t.followers)));
    double has_link = 0.0;
    if (t.linked_url) {
        try {
            if (normalize_domain(*t.linked_url) == outlet.domain) has_link = 1.0;
        } catch (const ValidationError&) {
            // unparseable link counts as no link
        }
    }
    double verified = t.verified ? 1.0 : 0.0;
    r.features = {{"verified", verified},
                  {"account_age_years", age_years},
                  {"follower_log10", follower_log10},
                  {"has_site_link", has_link}};
    r.group_score =
        (verified + std::min(age_years / 10.0, 1.0) + std::min(follower_log10 / 6.0, 1.0) +
         has_link) /
        4.0;
    return r;
}

// ---------------------------------------------------------------------------
// URL channel

// Maximum fraction of s coverable by non-overlapping dictionary words (gaps
// allowed). Classic word-break DP over prefix positions.
inline double word_break_coverage(const std::string& s, const std::set<std::string>& dictionary) {
    for (unsigned char c : s) {
        if (!std::isalnum(c) && c < 0x80) {
            throw ValidationError("word_break_coverage input must be alphanumeric: '" + s + "'");
        }
    }
    if (s.empty()) return 0.0;
    std::size_t n = s.size();
    std::set<std::size_t> lengths;
    for (const auto& w : dictionary) {
        if (!w.empty() && w.size() <= n) lengths.insert(w.size());
    }
    std::vector<std::size_t> best(n + 1, 0);  // best[i]: chars covered within s[0..i)
    for (std::size_t i = 0; i < n; ++i) {
        if (best[i + 1] < best[i]) best[i + 1] = best[i];  // skip s[i]
        for (std::size_t len : lengths) {
            if (i + len > n) break;
            if (dictionary.count(s.substr(i, len))) {
                if (best[i + len] < best[i] + len) best[i + len] = best[i] + len;
            }
        }
    }
    return static_cast<double>(best[n]) / static_cast<double>(n);
}

namespace detail {

// The label a reader would recognize as the site's name: strip the public
// suffix (longest match from the configured list, else the final label) and
// take the last remaining label.
inline std::string registrable_name(const std::string& domain,
                                    const std::vector<std::string>& suffixes) {
    std::string rest = domain;
    std::size_t matched = 0;
    for (const auto& suf : suffixes) {
        if (suf.empty()) continue;
        std::string s = suf[0] == '.' ? suf : "." + suf;
        if (rest.size() > s.size() && rest.compare(rest.size() - s.size(), s.size(), s) == 0) {
            matched = std::max(matched, s.size());
        }
    }
    if (matched > 0) {
        rest = rest.substr(0, rest.size() - matched);
    } else {
        auto dot = rest.rfind('.');
        if (dot != std::string::npos) rest = rest.substr(0, dot);
    }
    auto dot = rest.rfind('.');
    std::string label = dot == std::string::npos ? rest : rest.substr(dot + 1);
    return label.empty() ? rest : label;
}

inline bool has_suspicious_suffix(const std::string& domain,
                                  const std::vector<std::string>& suffixes) {
    for (const auto& suf : suffixes) {
        if (suf.empty()) continue;
        std::string s = suf[0] == '.' ? suf : "." + suf;
        if (domain.size() > s.size() &&
            domain.compare(domain.size() - s.size(), s.size(), s) == 0) {
            return true;
        }
    }
    return false;
}

}  // namespace detail

// Long, hyphen-ridden, fishy-suffix domains score low; short domains built
// from dictionary words score high.
inline FeatureGroupReport url_features(const std::string& domain,
                                       const std::set<std::string>& dictionary,
                                       const std::vector<std::string>& suspicious_suffixes) {
    FeatureGroupReport r;
    r.channel = Channel::url;
    r.available = true;

    double length = static_cast<double>(domain.size());
    double hyphens = 0.0, digits = 0.0;
    for (unsigned char c : domain) {
        if (c == '-') hyphens += 1.0;
        if (std::isdigit(c)) digits += 1.0;
    }
    bool suspicious = detail::has_suspicious_suffix(domain, suspicious_suffixes);

    std::string name = detail::registrable_name(domain, suspicious_suffixes);
    std::string alnum;
    for (unsigned char c : name) {
        if (std::isalnum(c) || c >= 0x80) alnum.push_back(static_cast<char>(c));
    }
    double coverage = alnum.empty() ? 0.0 : word_break_coverage(alnum, dictionary);

    double penalty;
    if (length <= 20.0) {
        penalty = 1.0;
    } else if (length >= 60.0) {
        penalty = 0.0;
    } else {
        penalty = (60.0 - length) / 40.0;
    }

    r.features = {{"length", length},
                  {"hyphen_count", hyphens},
                  {"digit_count", digits},
                  {"suspicious_suffix", suspicious ? 1.0 : 0.0},
                  {"word_coverage", coverage}};
    r.group_score = coverage * (suspicious ? 0.0 : 1.0) * penalty;
    return r;
}

// ---------------------------------------------------------------------------
// Traffic channel: rank 1 scores 1.0, falling off logarithmically to 0 at
// rank 1e7.

inline FeatureGroupReport traffic_feature(std::optional<std::int64_t> rank) {
    FeatureGroupReport r;
    r.channel = Channel::traffic;
    if (!rank) return r;
    if (*rank < 1) throw ValidationError("traffic rank must be >= 1");
    r.available = true;
    double log_rank = std::log10(static_cast<double>(*rank));
    r.features = {{"rank", static_cast<double>(*rank)}, {"log10_rank", log_rank}};
    r.group_score = 1.0 - std::min(log_rank / 7.0, 1.0);
    return r;
}

// ---------------------------------------------------------------------------
// Built-in fallbacks for the data-file-driven inputs, so the library works
// without a config directory. Real deployments load richer lists from disk.

inline std::vector<std::string> default_wiki_cues() {
    return {"conspiracy theories", "fake news",    "disinformation", "misinformation",
            "propaganda",          "pseudoscience", "tabloid",        "hoax"};
}

inline std::set<std::string> default_url_dictionary() {
    return {"news",   "daily",  "times",  "post",    "herald", "press",    "journal",
            "tribune", "gazette", "report", "world",  "global", "breaking", "truth",
            "metro",   "city",   "star",   "courier", "wire",   "today"};
}

inline std::vector<std::string> default_suspicious_suffixes() {
    return {".com.co", ".co.com", ".com.de", ".news.biz"};
}

// ---------------------------------------------------------------------------
// Channels 4-6: precomputed scores pass straight through.

inline FeatureGroupReport external_channel_passthrough(const OutletRecord& outlet,
                                                       Channel channel) {
    if (channel != Channel::audience_links && channel != Channel::audience_bias &&
        channel != Channel::speech) {
        throw ValidationError("channel '" + to_string(channel) + "' is not an external channel");
    }
    FeatureGroupReport r;
    r.channel = channel;
    auto it = outlet.external_scores.find(to_string(channel));
    if (it == outlet.external_scores.end()) return r;
    double v = it->second;
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError("external score for '" + to_string(channel) + "' outside [0,1]");
    }
    r.available = true;
    r.features = {{"score", v}};
    r.group_score = v;
    return r;
}

}  // namespace prefact
