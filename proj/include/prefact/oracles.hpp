#pragma once

// Brute-force reference implementations, deliberately sharing no scoring code
// with the engine headers. Tests (and the report subcommand) compare engine
// output against these; agreement is only meaningful because the code paths
// are disjoint. Each oracle refuses instances large enough that the
// brute-force approach stops being obviously correct or affordable.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "prefact/error.hpp"
#include "prefact/ingest.hpp"
#include "prefact/retrieval.hpp"
#include "prefact/textfeat.hpp"
#include "prefact/verdict.hpp"

namespace prefact::oracle {

// Eq.-style evidence sum, recomputed from the raw fields with compensated
// (Kahan) summation rather than the engine's plain left fold.
inline double oracle_claim_score(const std::vector<EvidenceItem>& evidence) {
    if (evidence.size() > 1000) {
        throw ValidationError("oracle_claim_score refuses lists over 1000 items");
    }
    double sum = 0.0, carry = 0.0;
    for (const auto& e : evidence) {
        double term = e.reliability * stance_value(e.stance_label) - carry;
        double next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    return sum;
}

// Full BM25 ranking by direct per-document scans: no index, no postings.
// Returns every document with a positive score, best first, ties by id.
inline std::vector<std::pair<std::string, double>> oracle_bm25(
    const std::vector<ArticleRecord>& docs, const std::string& query,
    const Bm25Params& params = {}) {
    if (docs.size() > 100) {
        throw ValidationError("oracle_bm25 refuses corpora over 100 documents");
    }
    std::vector<std::vector<std::string>> doc_tokens;
    doc_tokens.reserve(docs.size());
    double total_len = 0.0;
    for (const auto& d : docs) {
        std::vector<std::string> toks = tokenize(d.title);
        for (auto& t : tokenize(d.body)) toks.push_back(std::move(t));
        total_len += static_cast<double>(toks.size());
        doc_tokens.push_back(std::move(toks));
    }
    double n = static_cast<double>(docs.size());
    double avgdl = docs.empty() ? 0.0 : total_len / n;

    std::vector<double> scores(docs.size(), 0.0);
    for (const auto& q : tokenize(query)) {
        double df = 0.0;
        for (const auto& toks : doc_tokens) {
            if (std::find(toks.begin(), toks.end(), q) != toks.end()) df += 1.0;
        }
        if (df == 0.0) continue;
        for (std::size_t d = 0; d < docs.size(); ++d) {
            double tf = static_cast<double>(std::count(doc_tokens[d].begin(),
                                                       doc_tokens[d].end(), q));
            if (tf == 0.0) continue;
            double dl = static_cast<double>(doc_tokens[d].size());
            double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
            double denom = tf + params.k1 * (1.0 - params.b + params.b * dl / avgdl);
            scores[d] += idf * tf * (params.k1 + 1.0) / denom;
        }
    }
    std::vector<std::pair<std::string, double>> ranking;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        if (scores[d] > 0.0) ranking.emplace_back(docs[d].id, scores[d]);
    }
    std::sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return ranking;
}

namespace detail {

inline std::size_t best_cover(const std::string& s, std::size_t at,
                              const std::set<std::string>& dict) {
    if (at >= s.size()) return 0;
    std::size_t best = best_cover(s, at + 1, dict);  // leave s[at] uncovered
    for (const auto& w : dict) {
        if (w.empty() || at + w.size() > s.size()) continue;
        if (s.compare(at, w.size(), w) == 0) {
            std::size_t covered = w.size() + best_cover(s, at + w.size(), dict);
            if (covered > best) best = covered;
        }
    }
    return best;
}

}  // namespace detail

// Exhaustive segmentation search: at every position either leave the
// character uncovered or lay down any dictionary word that matches there.
inline double oracle_segment(const std::string& s, const std::set<std::string>& dict) {
    if (s.size() > 10) {
        throw ValidationError("oracle_segment refuses strings longer than 10");
    }
    if (s.empty()) return 0.0;
    return static_cast<double>(detail::best_cover(s, 0, dict)) /
           static_cast<double>(s.size());
}

}  // namespace prefact::oracle
