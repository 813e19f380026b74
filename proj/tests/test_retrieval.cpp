#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "prefact/oracles.hpp"
#include "prefact/retrieval.hpp"
#include "prefact/util.hpp"

using namespace prefact;

namespace {

ArticleRecord art(const std::string& id, const std::string& title, const std::string& body) {
    ArticleRecord a;
    a.id = id;
    a.source_domain = "example.com";
    a.url = "https://example.com/" + id;
    a.title = title;
    a.body = body;
    a.published_at = 1700000000;
    a.language_tag = "en";
    return a;
}

}  // namespace

TEST_CASE("build_index counts term frequencies per document", "[retrieval]") {
    InvertedIndex idx = build_index({art("d1", "a", "b a"), art("d2", "b", "c")});
    REQUIRE(idx.doc_ids == std::vector<std::string>{"d1", "d2"});
    REQUIRE(idx.doc_lengths == std::vector<std::uint32_t>{3, 2});
    REQUIRE(idx.avgdl == 2.5);

    const auto& a_posts = idx.postings.at("a");
    REQUIRE(a_posts.size() == 1);
    REQUIRE(a_posts[0] == std::make_pair(std::uint32_t{0}, std::uint32_t{2}));

    const auto& b_posts = idx.postings.at("b");
    REQUIRE(b_posts.size() == 2);
    REQUIRE(b_posts[0] == std::make_pair(std::uint32_t{0}, std::uint32_t{1}));
    REQUIRE(b_posts[1] == std::make_pair(std::uint32_t{1}, std::uint32_t{1}));
}

TEST_CASE("build_index rejects duplicate document ids", "[retrieval]") {
    REQUIRE_THROWS_AS(build_index({art("d1", "a", "b"), art("d1", "c", "d")}), ValidationError);
}

TEST_CASE("bm25 matches the hand-computed single-document value", "[retrieval]") {
    InvertedIndex idx = build_index({art("d1", "fake", "news fake")});
    // tokens: {fake x2, news}; dl = avgdl = 3; query "fake": tf=2, df=1, N=1.
    double idf = std::log(1.0 + (1.0 - 1.0 + 0.5) / (1.0 + 0.5));
    double denom = 2.0 + 1.2 * (1.0 - 0.75 + 0.75 * 3.0 / 3.0);
    double expected = idf * 2.0 * (1.2 + 1.0) / denom;
    REQUIRE(bm25(idx, {"fake"}, "d1") == Catch::Approx(expected));
}

TEST_CASE("bm25 ignores absent terms and sums duplicates twice", "[retrieval]") {
    InvertedIndex idx = build_index({art("d1", "fake", "news fake"), art("d2", "calm", "words")});
    REQUIRE(bm25(idx, {"zebra"}, "d1") == 0.0);
    REQUIRE(bm25(idx, {}, "d1") == 0.0);
    double once = bm25(idx, {"fake"}, "d1");
    REQUIRE(once > 0.0);
    REQUIRE(bm25(idx, {"fake", "fake"}, "d1") == once + once);
    REQUIRE_THROWS_AS(bm25(idx, {"fake"}, "ghost"), NotFoundError);
}

TEST_CASE("longer documents score lower for equal term frequency", "[retrieval]") {
    InvertedIndex idx = build_index(
        {art("short", "fake", "news"), art("long", "fake", "news with many extra words here")});
    double s = bm25(idx, {"fake"}, "short");
    double l = bm25(idx, {"fake"}, "long");
    REQUIRE(s > l);
}

TEST_CASE("retrieve returns positive-score docs ranked score desc, id asc", "[retrieval]") {
    InvertedIndex idx = build_index({art("b", "same text", "here"), art("a", "same text", "here"),
                                     art("c", "other", "stuff")});
    auto hits = retrieve(idx, "same text", 10);
    REQUIRE(hits.size() == 2);
    REQUIRE(hits[0].article_id == "a");  // tie broken by id
    REQUIRE(hits[1].article_id == "b");
    REQUIRE(hits[0].score == hits[1].score);
}

TEST_CASE("retrieve drops non-matching docs and honors k", "[retrieval]") {
    std::vector<ArticleRecord> docs;
    for (int i = 0; i < 5; ++i) {
        docs.push_back(art("d" + std::to_string(i), "common term", "doc body " + std::to_string(i)));
    }
    InvertedIndex idx = build_index(docs);
    REQUIRE(retrieve(idx, "zebra quagga", 3).empty());
    REQUIRE(retrieve(idx, "common", 3).size() == 3);
    REQUIRE(retrieve(idx, "common", 100).size() == 5);  // k beyond matches returns all
    REQUIRE_THROWS_AS(retrieve(idx, "common", 0), ValidationError);
}

TEST_CASE("retrieve agrees with the brute-force oracle bit for bit", "[retrieval]") {
    Rng rng(404);
    std::vector<std::string> vocab{"fake", "news",  "moon",  "landing", "vaccine",
                                   "cause", "storm", "quiet", "river",  "stone"};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<ArticleRecord> docs;
        std::size_t n_docs = 2 + rng.next_below(12);
        for (std::size_t d = 0; d < n_docs; ++d) {
            std::string body;
            std::size_t len = 1 + rng.next_below(12);
            for (std::size_t t = 0; t < len; ++t) {
                body += vocab[rng.next_below(vocab.size())] + " ";
            }
            docs.push_back(art("doc" + std::to_string(d),
                               vocab[rng.next_below(vocab.size())], body));
        }
        std::string claim = vocab[rng.next_below(vocab.size())] + " " +
                            vocab[rng.next_below(vocab.size())];
        std::size_t k = 1 + rng.next_below(n_docs);

        InvertedIndex idx = build_index(docs);
        auto fast = retrieve(idx, claim, k);
        auto slow = oracle::oracle_bm25(docs, claim);  // full ranking; truncate below
        if (slow.size() > k) slow.resize(k);

        REQUIRE(fast.size() == slow.size());
        for (std::size_t i = 0; i < fast.size(); ++i) {
            REQUIRE(fast[i].article_id == slow[i].first);
            REQUIRE(fast[i].score == slow[i].second);  // identical arithmetic, no tolerance
        }
    }
}

TEST_CASE("index snapshots round-trip through json", "[retrieval]") {
    InvertedIndex idx = build_index({art("d1", "a", "b a"), art("d2", "b", "c")});
    json j = to_json(idx);
    REQUIRE(j.at("format") == "prefact-index");
    InvertedIndex back = index_from_json(j);
    REQUIRE(back.doc_ids == idx.doc_ids);
    REQUIRE(back.doc_lengths == idx.doc_lengths);
    REQUIRE(back.avgdl == idx.avgdl);
    REQUIRE(back.postings == idx.postings);

    REQUIRE_THROWS_AS(index_from_json(json{{"format", "other"}}), ValidationError);
    json bad = to_json(idx);
    bad["version"] = 9;
    REQUIRE_THROWS_AS(index_from_json(bad), ValidationError);
}
