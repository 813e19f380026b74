#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefact/error.hpp"
#include "prefact/ingest.hpp"
#include "prefact/util.hpp"

namespace prefact {

// Recipe for a synthetic corpus. Everything downstream of the seed is
// deterministic, so the generated corpus doubles as its own ground truth.
struct SyntheticSpec {
    std::uint64_t seed = 7;
    std::size_t outlet_count = 4;
    std::size_t articles_per_outlet = 1;
    std::size_t claim_count = 1;
    double channel_noise_sigma = 0.0;  // gaussian noise on channel scores
    double stance_noise = 0.0;         // probability an article states the opposite
    // Optional explicit reliabilities (size outlet_count). When empty, outlets
    // alternate between a reliable band [0.6,0.95] and a junk band [0.05,0.4].
    std::vector<double> true_reliability;
};

struct ClaimTruth {
    std::string id;
    std::string text;
    bool is_true = false;
};

struct GroundTruth {
    std::map<std::string, double> outlet_reliability;
    std::map<std::string, int> outlet_label;  // 1 = reliable
    std::vector<ClaimTruth> claims;
};

struct SyntheticData {
    Corpus corpus;
    GroundTruth truth;
};

namespace detail {

inline std::string padded(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%03zu", prefix, i);
    return buf;
}

}  // namespace detail

// The world has one fact per claim slot: "entityN causes effectN". A true
// claim states the fact; a false claim appends the negator "never". Reliable
// outlets publish the fact, junk outlets publish its negation, and
// stance_noise flips an article's assertion with the given probability.
inline SyntheticData generate_corpus(const SyntheticSpec& spec) {
    if (spec.channel_noise_sigma < 0.0) throw ValidationError("channel noise sigma must be >= 0");
    if (spec.stance_noise < 0.0 || spec.stance_noise > 1.0) {
        throw ValidationError("stance noise rate must be in [0,1]");
    }
    if (!spec.true_reliability.empty() && spec.true_reliability.size() != spec.outlet_count) {
        throw ValidationError("true_reliability must have one entry per outlet");
    }
    if (spec.articles_per_outlet > 0 && spec.claim_count == 0) {
        throw ValidationError("articles need at least one claim slot");
    }
    for (double r : spec.true_reliability) {
        if (r < 0.0 || r > 1.0) throw ValidationError("true reliability out of [0,1]");
    }

    Rng rng(spec.seed);
    SyntheticData data;

    std::vector<double> reliability = spec.true_reliability;
    if (reliability.empty()) {
        reliability.reserve(spec.outlet_count);
        for (std::size_t i = 0; i < spec.outlet_count; ++i) {
            double u = rng.next_double();
            reliability.push_back(i % 2 == 0 ? 0.6 + 0.35 * u : 0.05 + 0.35 * u);
        }
    }

    for (std::size_t i = 0; i < spec.outlet_count; ++i) {
        double r = reliability[i];
        OutletRecord o;
        o.domain = detail::padded("outlet", i) + ".test";
        for (const char* channel : {"audience_links", "audience_bias", "speech"}) {
            double noise = spec.channel_noise_sigma * rng.next_gaussian();
            o.external_scores[channel] = clamp01(r + noise);
        }
        o.label = r > 0.5 ? FactualityLabel::high : FactualityLabel::low;
        data.corpus.outlets.emplace(o.domain, std::move(o));
        data.truth.outlet_reliability[detail::padded("outlet", i) + ".test"] = r;
        data.truth.outlet_label[detail::padded("outlet", i) + ".test"] = r > 0.5 ? 1 : 0;
    }

    for (std::size_t j = 0; j < spec.claim_count; ++j) {
        std::string fact = detail::padded("entity", j) + " causes " + detail::padded("effect", j);
        ClaimTruth c;
        c.id = detail::padded("c", j);
        c.is_true = j % 2 == 0;
        c.text = c.is_true ? fact : fact + " never";
        data.truth.claims.push_back(std::move(c));
    }

    const std::string clean_filler = "officials reviewed the quarterly infrastructure schedule.";
    const std::string junk_filler = "shocking scandal! outrageous elites hide explosive bombshell!";

    std::int64_t published = 1700000000;
    for (std::size_t i = 0; i < spec.outlet_count; ++i) {
        std::string domain = detail::padded("outlet", i) + ".test";
        bool reliable = data.truth.outlet_label[domain] == 1;
        for (std::size_t k = 0; k < spec.articles_per_outlet; ++k) {
            std::size_t j = k % spec.claim_count;
            std::string fact =
                detail::padded("entity", j) + " causes " + detail::padded("effect", j);
            bool states_fact = reliable;
            if (rng.next_double() < spec.stance_noise) states_fact = !states_fact;

            ArticleRecord a;
            a.id = detail::padded("a", i) + detail::padded("x", k);
            a.source_domain = domain;
            a.url = "https://" + domain + "/" + a.id;
            a.title = detail::padded("entity", j) + " coverage update";
            a.body = (states_fact ? fact : fact + " never") + ". " +
                     (reliable ? clean_filler : junk_filler);
            a.published_at = published;
            a.language_tag = "en";
            published += 3600;
            data.corpus.articles.push_back(std::move(a));
        }
    }
    return data;
}

// ---------------------------------------------------------------------------
// Presets used throughout the test suite and the make-fixtures subcommand.

// Four outlets, one planted claim: three reliable (0.9) outlets assert it,
// one junk (0.1) outlet denies it. Channel scores carry no noise, so profile
// reliabilities are exact and the verdict arithmetic is checkable by hand.
inline SyntheticSpec golden_spec() {
    SyntheticSpec s;
    s.seed = 2024;
    s.outlet_count = 4;
    s.articles_per_outlet = 1;
    s.claim_count = 1;
    s.channel_noise_sigma = 0.0;
    s.stance_noise = 0.0;
    s.true_reliability = {0.9, 0.9, 0.9, 0.1};
    return s;
}

// 200 outlets, half reliable and half junk, channel scores jittered with
// sigma 0.1: the supervised training corpus.
inline SyntheticSpec training_spec() {
    SyntheticSpec s;
    s.seed = 99;
    s.outlet_count = 200;
    s.articles_per_outlet = 0;
    s.claim_count = 0;
    s.channel_noise_sigma = 0.1;
    s.stance_noise = 0.0;
    return s;
}

// 20 outlets x 20 claims for the stance-noise degradation study.
inline SyntheticSpec sweep_spec(double stance_noise) {
    SyntheticSpec s;
    s.seed = 4242;
    s.outlet_count = 20;
    s.articles_per_outlet = 20;
    s.claim_count = 20;
    s.channel_noise_sigma = 0.05;
    s.stance_noise = stance_noise;
    return s;
}

// ---------------------------------------------------------------------------
// File emission (the make-fixtures subcommand)

inline json to_json(const ClaimTruth& c) {
    return json{{"claim", c.text}, {"id", c.id}, {"is_true", c.is_true}};
}

inline void write_fixture_files(const SyntheticData& data, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::string articles;
    for (const auto& a : data.corpus.articles) {
        articles += to_json(a).dump();
        articles += '\n';
    }
    write_file_atomic(dir / "articles.jsonl", articles);

    std::string outlets;
    for (const auto& [domain, o] : data.corpus.outlets) {
        outlets += to_json(o).dump();
        outlets += '\n';
    }
    write_file_atomic(dir / "outlets.jsonl", outlets);

    std::string claims;
    for (const auto& c : data.truth.claims) {
        claims += to_json(c).dump();
        claims += '\n';
    }
    write_file_atomic(dir / "claims.jsonl", claims);

    json truth;
    for (const auto& [domain, r] : data.truth.outlet_reliability) {
        truth[domain] = json{{"label", data.truth.outlet_label.at(domain)}, {"reliability", r}};
    }
    std::string body = json{{"format", "prefact-truth"}, {"outlets", std::move(truth)}}.dump(2);
    body += '\n';
    write_file_atomic(dir / "truth.json", body);
}

}  // namespace prefact
