#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "prefact/ingest.hpp"
#include "prefact/lexicon.hpp"
#include "prefact/unicode.hpp"
#include "prefact/util.hpp"

namespace prefact {

// ---------------------------------------------------------------------------
// Tokenization: maximal runs of Unicode letters/digits.

// Original-case tokens; used for caps-word detection.
inline std::vector<std::string> tokenize_raw(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        char32_t cp = detail::decode_utf8(text, i);
        if (detail::is_alnum_cp(cp)) {
            detail::encode_utf8(cp, current);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

inline std::string lowercase(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        detail::encode_utf8(detail::to_lower_cp(detail::decode_utf8(s, i)), out);
    }
    return out;
}

// Lowercased maximal alphanumeric runs, order preserved.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens = tokenize_raw(text);
    for (auto& t : tokens) t = lowercase(t);
    return tokens;
}

// Split on runs of '.', '!', '?'; a trailing unterminated stretch is its own
// sentence. Whitespace-only pieces are dropped.
inline std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    std::string current;
    auto flush = [&]() {
        bool blank = true;
        for (unsigned char c : current) {
            if (!std::isspace(c)) {
                blank = false;
                break;
            }
        }
        if (!blank) sentences.push_back(current);
        current.clear();
    };
    for (char c : text) {
        if (c == '.' || c == '!' || c == '?') {
            flush();
        } else {
            current.push_back(c);
        }
    }
    flush();
    return sentences;
}

// ---------------------------------------------------------------------------
// Surface statistics

// (sum of weights of matching tokens) / max(1, token count), clamped to [0,1].
inline double lexicon_density(const std::vector<std::string>& tokens, const Lexicon& lexicon) {
    double hits = 0.0;
    for (const auto& t : tokens) hits += lexicon.weight_of(t);
    double denom = static_cast<double>(std::max<std::size_t>(1, tokens.size()));
    return clamp01(hits / denom);
}

// (pos - neg) / max(1, pos + neg); hits are occurrence counts.
inline double sentiment_polarity(const std::vector<std::string>& tokens, const Lexicon& positive,
                                 const Lexicon& negative) {
    double pos = 0.0, neg = 0.0;
    for (const auto& t : tokens) {
        if (positive.contains(t)) pos += 1.0;
        if (negative.contains(t)) neg += 1.0;
    }
    return (pos - neg) / std::max(1.0, pos + neg);
}

// Distinct / total over the first min(window, len) tokens. The fixed window
// controls raw TTR's length bias.
inline double type_token_ratio(const std::vector<std::string>& tokens, std::size_t window = 1000) {
    if (window < 1) throw ValidationError("type_token_ratio window must be >= 1");
    if (tokens.empty()) return 0.0;
    std::size_t n = std::min(window, tokens.size());
    std::unordered_set<std::string_view> distinct;
    for (std::size_t i = 0; i < n; ++i) distinct.insert(tokens[i]);
    return static_cast<double>(distinct.size()) / static_cast<double>(n);
}

struct StyleFeatureVector {
    double subjectivity_density = 0.0;   // [0,1]
    double sentiment_polarity = 0.0;     // [-1,1]
    double offensive_density = 0.0;      // [0,1]
    double propaganda_cue_density = 0.0; // [0,1]
    double type_token_ratio = 0.0;       // [0,1]
    double caps_word_ratio = 0.0;        // [0,1]
    double exclamation_density = 0.0;    // [0,1]
    double mean_sentence_length = 0.0;   // tokens per sentence, >= 0

    bool operator==(const StyleFeatureVector&) const = default;
};

// The lexicon slots the style extractor reads. Stopword and negation slots
// ride along here because stance shares the same file format and loading.
struct LexiconBundle {
    Lexicon subjectivity;
    Lexicon positive;
    Lexicon negative;
    Lexicon offensive;
    Lexicon propaganda;
    Lexicon stopwords;
    Lexicon negation;
};

// Compact built-in lists so the library runs without a data directory. The
// files under data/lexicons extend these; both are illustrative starters, not
// curated research lexicons. Negators are deliberately absent from the
// stopword list: stance detection needs "not" kept as a content token.
inline LexiconBundle builtin_lexicons() {
    auto lex = [](std::string name, std::initializer_list<const char*> words) {
        std::unordered_set<std::string> entries;
        for (const char* w : words) entries.insert(w);
        return Lexicon(std::move(name), std::move(entries), {});
    };
    LexiconBundle b{
        lex("subjectivity",
            {"amazing", "terrible", "beautiful", "awful", "incredible", "horrible", "wonderful",
             "disgusting", "fantastic", "stupid", "shocking", "outrageous"}),
        lex("positive",
            {"good", "great", "success", "win", "benefit", "improve", "safe", "strong", "clean",
             "honest"}),
        lex("negative",
            {"bad", "fail", "failure", "crisis", "threat", "danger", "harm", "weak", "corrupt",
             "dirty"}),
        lex("offensive", {"idiot", "moron", "scum", "filth", "trash"}),
        lex("propaganda",
            {"shocking", "outrageous", "destroy", "traitor", "betrayal", "scandal", "elites",
             "conspiracy", "explosive", "bombshell"}),
        lex("stopwords", {"a",    "an",   "and",  "are", "as",   "at",   "be",   "by",  "does",
                          "do",   "did",  "for",  "from", "has",  "have", "in",   "is",  "it",
                          "its",  "of",   "on",   "or",  "that", "the",  "this", "to",  "was",
                          "were", "will", "with"}),
        lex("negation", {"not", "no", "never", "none", "neither", "nor", "cannot", "without"}),
    };
    return b;
}

struct StyleParams {
    std::size_t ttr_window = 1000;
};

namespace detail {

// A token looks shouted when it has >= 2 chars, at least one letter, and
// every letter carries an uppercase->lowercase mapping.
inline bool is_caps_token(const std::string& raw) {
    std::size_t cps = 0, letters = 0, upper_letters = 0;
    std::size_t i = 0;
    while (i < raw.size()) {
        char32_t cp = decode_utf8(raw, i);
        ++cps;
        bool is_ascii_digit = cp >= '0' && cp <= '9';
        if (!is_ascii_digit && is_alnum_cp(cp)) {
            ++letters;
            if (has_lower_mapping(cp)) ++upper_letters;
        }
    }
    return cps >= 2 && letters > 0 && letters == upper_letters;
}

}  // namespace detail

// Deterministic style vector over title + body, title counted twice for
// headline emphasis.
inline StyleFeatureVector style_features(const ArticleRecord& article, const LexiconBundle& lex,
                                         const StyleParams& params = {}) {
    std::vector<std::string> raw = tokenize_raw(article.title);
    std::vector<std::string> raw_title = raw;
    raw.insert(raw.end(), raw_title.begin(), raw_title.end());
    std::vector<std::string> raw_body = tokenize_raw(article.body);
    raw.insert(raw.end(), raw_body.begin(), raw_body.end());

    std::vector<std::string> tokens;
    tokens.reserve(raw.size());
    for (const auto& t : raw) tokens.push_back(lowercase(t));

    StyleFeatureVector v;
    v.subjectivity_density = lexicon_density(tokens, lex.subjectivity);
    v.sentiment_polarity = sentiment_polarity(tokens, lex.positive, lex.negative);
    v.offensive_density = lexicon_density(tokens, lex.offensive);
    v.propaganda_cue_density = lexicon_density(tokens, lex.propaganda);
    v.type_token_ratio = type_token_ratio(tokens, params.ttr_window);

    std::size_t caps = 0;
    for (const auto& t : raw) {
        if (detail::is_caps_token(t)) ++caps;
    }
    double denom = static_cast<double>(std::max<std::size_t>(1, tokens.size()));
    v.caps_word_ratio = static_cast<double>(caps) / denom;

    auto count_excl = [](std::string_view s) {
        std::size_t n = 0;
        for (char c : s) {
            if (c == '!') ++n;
        }
        return n;
    };
    std::size_t excl = 2 * count_excl(article.title) + count_excl(article.body);
    v.exclamation_density = clamp01(static_cast<double>(excl) / denom);

    std::string joined;
    if (!article.title.empty()) {
        joined = article.title + ". " + article.title + ". ";
    }
    joined += article.body;
    std::vector<std::string> sentences = split_sentences(joined);
    if (!sentences.empty()) {
        std::size_t total = 0;
        for (const auto& s : sentences) total += tokenize_raw(s).size();
        v.mean_sentence_length = static_cast<double>(total) / static_cast<double>(sentences.size());
    }
    return v;
}

struct PropagandaSignal {
    bool flagged = false;
    double score = 0.0;  // [0,1]
};

// Per-article propaganda signal: cue density blended 0.7/0.3 with
// subjectivity density, thresholded.
inline PropagandaSignal propaganda_flag(const StyleFeatureVector& vec, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw ValidationError("propaganda threshold must be in [0,1]");
    }
    PropagandaSignal s;
    s.score = 0.7 * vec.propaganda_cue_density + 0.3 * vec.subjectivity_density;
    s.flagged = s.score >= threshold;
    return s;
}

}  // namespace prefact
