#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prefact/error.hpp"
#include "prefact/ingest.hpp"
#include "prefact/lexicon.hpp"
#include "prefact/textfeat.hpp"

namespace prefact {

enum class Stance { agree, disagree, discuss, unrelated };

inline const char* to_string(Stance s) {
    switch (s) {
        case Stance::agree: return "agree";
        case Stance::disagree: return "disagree";
        case Stance::discuss: return "discuss";
        case Stance::unrelated: return "unrelated";
    }
    throw ValidationError("unknown stance label");
}

// The numeric evidence contribution: agree +1, disagree -1, both discuss and
// unrelated collapse to 0.
inline double stance_value(Stance s) {
    switch (s) {
        case Stance::agree: return 1.0;
        case Stance::disagree: return -1.0;
        default: return 0.0;
    }
}

struct StanceResult {
    Stance label = Stance::unrelated;
    double value = 0.0;
    double relatedness = 0.0;
    std::optional<std::string> matched_sentence;
};

struct StanceParams {
    double tau_rel = 0.15;
    double tau_agree = 0.5;
};

namespace detail {

inline std::set<std::string> content_token_set(const std::vector<std::string>& tokens,
                                               const Lexicon& stopwords) {
    std::set<std::string> out;
    for (const auto& t : tokens) {
        if (!stopwords.contains(t)) out.insert(t);
    }
    return out;
}

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& t : a) inter += b.count(t);
    std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

inline std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace detail

// Jaccard overlap of stopword-free token sets.
inline double relatedness(const std::vector<std::string>& claim_tokens,
                          const std::vector<std::string>& sentence_tokens,
                          const Lexicon& stopwords) {
    std::set<std::string> claim = detail::content_token_set(claim_tokens, stopwords);
    if (claim.empty()) throw ValidationError("claim is empty after stopword removal");
    return detail::jaccard(claim, detail::content_token_set(sentence_tokens, stopwords));
}

enum class Parity { even, odd };

// Parity of the count of negation-lexicon hits; double negation cancels.
inline Parity negation_parity(const std::vector<std::string>& tokens, const Lexicon& negation) {
    std::size_t hits = 0;
    for (const auto& t : tokens) {
        if (negation.contains(t)) ++hits;
    }
    return hits % 2 == 0 ? Parity::even : Parity::odd;
}

// Rule-based baseline: pick the article sentence with the highest claim
// overlap (earliest wins ties), then bucket by the relatedness thresholds.
// Negation parity decides agree vs disagree above tau_agree.
inline StanceResult detect_stance(const std::string& claim, const ArticleRecord& article,
                                  const Lexicon& stopwords, const Lexicon& negation,
                                  const StanceParams& params = {}) {
    if (params.tau_rel < 0.0 || params.tau_rel > 1.0 || params.tau_agree < 0.0 ||
        params.tau_agree > 1.0) {
        throw ValidationError("stance thresholds must lie in [0,1]");
    }
    std::vector<std::string> claim_tokens = tokenize(claim);
    if (claim_tokens.empty()) throw ValidationError("claim produced no tokens");
    if (article.body.empty()) throw ValidationError("article body is empty");
    std::set<std::string> claim_content = detail::content_token_set(claim_tokens, stopwords);
    if (claim_content.empty()) throw ValidationError("claim is empty after stopword removal");

    std::vector<std::string> sentences = split_sentences(article.title);
    for (auto& s : split_sentences(article.body)) sentences.push_back(std::move(s));

    double best_rel = 0.0;
    std::ptrdiff_t best_at = -1;
    std::vector<std::string> best_tokens;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        std::vector<std::string> toks = tokenize(sentences[i]);
        double rel = detail::jaccard(claim_content, detail::content_token_set(toks, stopwords));
        if (best_at < 0 || rel > best_rel) {
            best_rel = rel;
            best_at = static_cast<std::ptrdiff_t>(i);
            best_tokens = std::move(toks);
        }
    }

    StanceResult result;
    result.relatedness = best_at < 0 ? 0.0 : best_rel;
    if (best_at < 0 || best_rel < params.tau_rel) {
        result.label = Stance::unrelated;
    } else if (best_rel >= params.tau_agree) {
        bool parity_match = negation_parity(claim_tokens, negation) ==
                            negation_parity(best_tokens, negation);
        result.label = parity_match ? Stance::agree : Stance::disagree;
        result.matched_sentence = detail::trim(sentences[static_cast<std::size_t>(best_at)]);
    } else {
        result.label = Stance::discuss;
        result.matched_sentence = detail::trim(sentences[static_cast<std::size_t>(best_at)]);
    }
    result.value = stance_value(result.label);
    return result;
}

// Seam for swapping in trained models later; the engine talks to this.
class StanceDetector {
public:
    virtual ~StanceDetector() = default;
    virtual StanceResult detect(const std::string& claim, const ArticleRecord& article) const = 0;
};

class BaselineStanceDetector final : public StanceDetector {
public:
    BaselineStanceDetector(Lexicon stopwords, Lexicon negation, StanceParams params = {})
        : stopwords_(std::move(stopwords)), negation_(std::move(negation)), params_(params) {}

    StanceResult detect(const std::string& claim, const ArticleRecord& article) const override {
        return detect_stance(claim, article, stopwords_, negation_, params_);
    }

    const StanceParams& params() const { return params_; }

private:
    Lexicon stopwords_;
    Lexicon negation_;
    StanceParams params_;
};

}  // namespace prefact
