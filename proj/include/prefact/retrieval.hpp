#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefact/error.hpp"
#include "prefact/ingest.hpp"
#include "prefact/textfeat.hpp"

namespace prefact {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct InvertedIndex {
    std::vector<std::string> doc_ids;
    std::vector<std::uint32_t> doc_lengths;
    double avgdl = 0.0;
    // token -> (doc position, term frequency), doc positions ascending
    std::map<std::string, std::vector<std::pair<std::uint32_t, std::uint32_t>>> postings;
};

inline std::vector<std::string> index_tokens(const ArticleRecord& a) {
    std::vector<std::string> toks = tokenize(a.title);
    std::vector<std::string> body = tokenize(a.body);
    toks.insert(toks.end(), body.begin(), body.end());
    return toks;
}

inline InvertedIndex build_index(const std::vector<ArticleRecord>& articles) {
    InvertedIndex idx;
    idx.doc_ids.reserve(articles.size());
    std::uint64_t total_len = 0;
    for (std::uint32_t pos = 0; pos < articles.size(); ++pos) {
        const auto& a = articles[pos];
        for (std::uint32_t prev = 0; prev < pos; ++prev) {
            if (idx.doc_ids[prev] == a.id) {
                throw ValidationError("duplicate article id in index: '" + a.id + "'");
            }
        }
        std::vector<std::string> toks = index_tokens(a);
        std::map<std::string, std::uint32_t> tf;
        for (const auto& t : toks) ++tf[t];
        for (const auto& [token, count] : tf) {
            idx.postings[token].emplace_back(pos, count);
        }
        idx.doc_ids.push_back(a.id);
        idx.doc_lengths.push_back(static_cast<std::uint32_t>(toks.size()));
        total_len += toks.size();
    }
    if (!articles.empty()) {
        idx.avgdl = static_cast<double>(total_len) / static_cast<double>(articles.size());
    }
    return idx;
}

// One term's BM25 contribution for a document.
inline double bm25_term(double tf, double df, double n_docs, double doc_len, double avgdl,
                        const Bm25Params& p) {
    double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
    double denom = tf + p.k1 * (1.0 - p.b + p.b * doc_len / avgdl);
    return idf * tf * (p.k1 + 1.0) / denom;
}

// Score of one document for a query, accumulated per query token in query
// order (repeated tokens contribute once per occurrence).
inline double bm25(const InvertedIndex& idx, const std::vector<std::string>& query,
                   const std::string& article_id, const Bm25Params& params = {}) {
    std::uint32_t pos = 0;
    while (pos < idx.doc_ids.size() && idx.doc_ids[pos] != article_id) ++pos;
    if (pos == idx.doc_ids.size()) {
        throw NotFoundError("no indexed article with id '" + article_id + "'");
    }
    double n_docs = static_cast<double>(idx.doc_ids.size());
    double score = 0.0;
    for (const auto& token : query) {
        auto it = idx.postings.find(token);
        if (it == idx.postings.end()) continue;
        for (const auto& [p, tf] : it->second) {
            if (p == pos) {
                score += bm25_term(static_cast<double>(tf), static_cast<double>(it->second.size()),
                                   n_docs, static_cast<double>(idx.doc_lengths[pos]), idx.avgdl,
                                   params);
                break;
            }
        }
    }
    return score;
}

struct RetrievedDoc {
    std::string article_id;
    std::uint32_t position = 0;  // index into the article list used to build the index
    double score = 0.0;
};

// Scores accumulate per query token in query order; repeated query tokens
// contribute once per occurrence. Ties break on ascending article id.
inline std::vector<RetrievedDoc> retrieve(const InvertedIndex& idx, const std::string& claim,
                                          std::size_t k, const Bm25Params& params = {}) {
    if (k == 0) throw ValidationError("retrieval depth k must be >= 1");
    std::vector<std::string> query = tokenize(claim);
    double n_docs = static_cast<double>(idx.doc_ids.size());
    std::map<std::uint32_t, double> acc;
    for (const auto& token : query) {
        auto it = idx.postings.find(token);
        if (it == idx.postings.end()) continue;
        double df = static_cast<double>(it->second.size());
        for (const auto& [pos, tf] : it->second) {
            acc[pos] += bm25_term(static_cast<double>(tf), df, n_docs,
                                  static_cast<double>(idx.doc_lengths[pos]), idx.avgdl, params);
        }
    }
    std::vector<RetrievedDoc> hits;
    hits.reserve(acc.size());
    for (const auto& [pos, score] : acc) {
        if (score > 0.0) hits.push_back({idx.doc_ids[pos], pos, score});
    }
    std::sort(hits.begin(), hits.end(), [](const RetrievedDoc& a, const RetrievedDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.article_id < b.article_id;
    });
    if (hits.size() > k) hits.resize(k);
    return hits;
}

// ---------------------------------------------------------------------------
// Canonical index snapshot (sorted keys, stable float round-trip).

inline json to_json(const InvertedIndex& idx) {
    json postings;
    for (const auto& [token, plist] : idx.postings) {
        json arr = json::array();
        for (const auto& [pos, tf] : plist) arr.push_back(json::array({pos, tf}));
        postings[token] = std::move(arr);
    }
    return json{{"avgdl", idx.avgdl},
                {"doc_ids", idx.doc_ids},
                {"doc_lengths", idx.doc_lengths},
                {"format", "prefact-index"},
                {"postings", std::move(postings)},
                {"version", 1}};
}

inline InvertedIndex index_from_json(const json& j) {
    if (!j.is_object() || j.value("format", "") != "prefact-index") {
        throw ValidationError("not a prefact index file");
    }
    if (j.value("version", 0) != 1) throw ValidationError("unsupported index file version");
    InvertedIndex idx;
    idx.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
    idx.doc_lengths = j.at("doc_lengths").get<std::vector<std::uint32_t>>();
    idx.avgdl = j.at("avgdl").get<double>();
    if (idx.doc_ids.size() != idx.doc_lengths.size()) {
        throw ValidationError("index doc_ids/doc_lengths size mismatch");
    }
    for (const auto& item : j.at("postings").items()) {
        auto& plist = idx.postings[item.key()];
        for (const auto& entry : item.value()) {
            std::uint32_t pos = entry.at(0).get<std::uint32_t>();
            if (pos >= idx.doc_ids.size()) throw ValidationError("posting references unknown doc");
            plist.emplace_back(pos, entry.at(1).get<std::uint32_t>());
        }
    }
    return idx;
}

}  // namespace prefact
