#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefact/error.hpp"
#include "prefact/ingest.hpp"
#include "prefact/reliability.hpp"
#include "prefact/retrieval.hpp"
#include "prefact/sourcefeat.hpp"
#include "prefact/stance.hpp"
#include "prefact/textfeat.hpp"
#include "prefact/util.hpp"

namespace prefact {

// ---------------------------------------------------------------------------
// Article factuality: convex blend of what the text looks like and what the
// outlet's track record says. std::lerp keeps the endpoints exact.

inline double article_factuality(double r_lang, double r_site, double lambda = 0.5) {
    if (r_lang < 0.0 || r_lang > 1.0) throw ValidationError("r_lang out of [0,1]");
    if (r_site < 0.0 || r_site > 1.0) throw ValidationError("r_site out of [0,1]");
    if (lambda < 0.0 || lambda > 1.0) throw ValidationError("lambda out of [0,1]");
    return std::lerp(r_site, r_lang, lambda);
}

// ---------------------------------------------------------------------------
// Claim-side types

struct EvidenceItem {
    std::string article_id;
    double reliability = 0.0;
    double stance_value = 0.0;
    Stance stance_label = Stance::unrelated;
    double retrieval_score = 0.0;
    double contribution = 0.0;  // always reliability * stance_value
};

inline EvidenceItem make_evidence(std::string article_id, double reliability, Stance label,
                                  double retrieval_score) {
    if (reliability < 0.0 || reliability > 1.0) throw ValidationError("reliability out of [0,1]");
    if (retrieval_score < 0.0) throw ValidationError("retrieval score must be >= 0");
    EvidenceItem e;
    e.article_id = std::move(article_id);
    e.reliability = reliability;
    e.stance_label = label;
    e.stance_value = stance_value(label);
    e.retrieval_score = retrieval_score;
    e.contribution = e.reliability * e.stance_value;
    return e;
}

enum class Band { likely_false, unverified, likely_true };

inline const char* to_string(Band b) {
    switch (b) {
        case Band::likely_false: return "likely-false";
        case Band::unverified: return "unverified";
        case Band::likely_true: return "likely-true";
    }
    throw ValidationError("unknown band");
}

inline Band band_from_string(const std::string& s) {
    if (s == "likely-false") return Band::likely_false;
    if (s == "unverified") return Band::unverified;
    if (s == "likely-true") return Band::likely_true;
    throw ValidationError("unknown band '" + s + "'");
}

enum class ArticleReliabilityMode { eq1, site_prior_only };

inline const char* to_string(ArticleReliabilityMode m) {
    return m == ArticleReliabilityMode::eq1 ? "eq1" : "site_prior_only";
}

inline ArticleReliabilityMode article_reliability_mode_from_string(const std::string& s) {
    if (s == "eq1") return ArticleReliabilityMode::eq1;
    if (s == "site_prior_only") return ArticleReliabilityMode::site_prior_only;
    throw ValidationError("unknown article_reliability_mode '" + s + "'");
}

struct VerdictParams {
    std::size_t k = 20;
    double lambda = 0.5;
    double likely_false_below = 0.4;
    double likely_true_above = 0.6;
    ArticleReliabilityMode article_reliability_mode = ArticleReliabilityMode::eq1;
};

struct ClaimVerdict {
    std::string claim;
    std::vector<EvidenceItem> evidence;
    double raw_score = 0.0;
    double normalized_score = 0.0;
    double factuality = 0.5;
    Band band = Band::unverified;
    json config;  // parameter snapshot the verdict was computed under
};

// The evidence sum, exactly in list order.
inline double claim_raw_score(const std::vector<EvidenceItem>& evidence) {
    double sum = 0.0;
    for (const auto& e : evidence) sum += e.contribution;
    return sum;
}

// Divide by total reliability mass to land in [-1,1]; remap to [0,1].
inline std::pair<double, double> normalize_claim_score(double raw,
                                                       const std::vector<EvidenceItem>& evidence) {
    double mass = 0.0;
    for (const auto& e : evidence) mass += e.reliability;
    double normalized = mass > 0.0 ? raw / mass : 0.0;
    double factuality = (normalized + 1.0) / 2.0;
    return {normalized, factuality};
}

inline Band pick_band(double factuality, const VerdictParams& p) {
    if (factuality < p.likely_false_below) return Band::likely_false;
    if (factuality > p.likely_true_above) return Band::likely_true;
    return Band::unverified;
}

// ---------------------------------------------------------------------------
// MediaProfile

struct MediaProfile {
    std::string domain;
    double reliability = 0.0;
    std::string model_mode = "heuristic";
    double propaganda_degree = 0.0;
    double flagged_article_fraction = 0.0;
    std::optional<std::string> ideology;
    std::vector<std::string> frames;
    std::optional<std::string> hyper_partisanship;
    std::int64_t article_count = 0;
    std::map<std::string, bool> channel_availability;
    std::int64_t created_at = 0;
    std::int64_t profile_version = 1;

    bool operator==(const MediaProfile&) const = default;
};

inline json to_json(const MediaProfile& p) {
    json avail = json::object();
    for (const auto& [name, on] : p.channel_availability) avail[name] = on;
    json j{{"article_count", p.article_count},
           {"channel_availability", std::move(avail)},
           {"created_at", p.created_at},
           {"domain", p.domain},
           {"flagged_article_fraction", p.flagged_article_fraction},
           {"model_mode", p.model_mode},
           {"profile_version", p.profile_version},
           {"propaganda_degree", p.propaganda_degree},
           {"reliability", p.reliability}};
    if (p.ideology) j["ideology"] = *p.ideology;
    if (!p.frames.empty()) j["frames"] = p.frames;
    if (p.hyper_partisanship) j["hyper_partisanship"] = *p.hyper_partisanship;
    return j;
}

inline MediaProfile profile_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("profile must be a JSON object");
    MediaProfile p;
    p.domain = j.at("domain").get<std::string>();
    p.reliability = j.at("reliability").get<double>();
    p.model_mode = j.at("model_mode").get<std::string>();
    p.propaganda_degree = j.at("propaganda_degree").get<double>();
    p.flagged_article_fraction = j.at("flagged_article_fraction").get<double>();
    p.article_count = j.at("article_count").get<std::int64_t>();
    p.created_at = j.at("created_at").get<std::int64_t>();
    p.profile_version = j.at("profile_version").get<std::int64_t>();
    for (const auto& item : j.at("channel_availability").items()) {
        p.channel_availability[item.key()] = item.value().get<bool>();
    }
    if (j.contains("ideology")) p.ideology = j.at("ideology").get<std::string>();
    if (j.contains("frames")) p.frames = j.at("frames").get<std::vector<std::string>>();
    if (j.contains("hyper_partisanship")) {
        p.hyper_partisanship = j.at("hyper_partisanship").get<std::string>();
    }
    for (double v : {p.reliability, p.propaganda_degree, p.flagged_article_fraction}) {
        if (v < 0.0 || v > 1.0) throw ValidationError("profile score out of [0,1]");
    }
    if (p.article_count < 0) throw ValidationError("article_count must be >= 0");
    return p;
}

// Content identity: everything except the bookkeeping fields. The store uses
// this to decide whether a rebuild actually changed the profile.
inline std::uint64_t profile_content_hash(const MediaProfile& p) {
    json j = to_json(p);
    j.erase("created_at");
    j.erase("profile_version");
    return fnv1a64(j.dump());
}

struct ProfileBuildParams {
    std::size_t min_articles = 1;
    double propaganda_threshold = 0.5;
    LanguageMixWeights language_mix;
    StyleParams style;
    std::vector<std::string> wiki_cues = default_wiki_cues();
    std::set<std::string> url_dictionary = default_url_dictionary();
    std::vector<std::string> suspicious_suffixes = default_suspicious_suffixes();
};

// Channel reports for one outlet: text from its articles, the rest from
// outlet metadata. The url channel is always available (every outlet has a
// domain); text requires at least min_articles articles.
inline std::vector<FeatureGroupReport> outlet_channel_reports(
    const std::string& domain, const std::vector<ArticleRecord>& articles,
    const OutletRecord& outlet, const LexiconBundle& lexicons, std::int64_t now,
    const ProfileBuildParams& params) {
    std::vector<FeatureGroupReport> reports;

    FeatureGroupReport text;
    text.channel = Channel::text;
    if (articles.size() >= params.min_articles && !articles.empty()) {
        double sum = 0.0;
        for (const auto& a : articles) {
            sum += language_reliability(style_features(a, lexicons, params.style),
                                        params.language_mix);
        }
        text.available = true;
        double mean = clamp01(sum / static_cast<double>(articles.size()));
        text.features.emplace_back("mean_language_reliability", mean);
        text.group_score = mean;
    }
    reports.push_back(std::move(text));

    reports.push_back(wikipedia_features(outlet, params.wiki_cues));
    reports.push_back(twitter_features(outlet, now));
    reports.push_back(external_channel_passthrough(outlet, Channel::audience_links));
    reports.push_back(external_channel_passthrough(outlet, Channel::audience_bias));
    reports.push_back(external_channel_passthrough(outlet, Channel::speech));
    reports.push_back(traffic_feature(outlet.traffic_rank));
    reports.push_back(url_features(domain, params.url_dictionary, params.suspicious_suffixes));
    return reports;
}

inline MediaProfile build_media_profile(const std::string& domain,
                                        const std::vector<ArticleRecord>& articles,
                                        const OutletRecord& outlet, const ReliabilityModel& model,
                                        const LexiconBundle& lexicons, std::int64_t now,
                                        const ProfileBuildParams& params = {}) {
    for (const auto& a : articles) {
        if (a.source_domain != domain) {
            throw ValidationError("article '" + a.id + "' is from '" + a.source_domain +
                                  "', not '" + domain + "'");
        }
    }
    std::vector<FeatureGroupReport> reports =
        outlet_channel_reports(domain, articles, outlet, lexicons, now, params);

    MediaProfile p;
    p.domain = domain;
    p.reliability = clamp01(predict(model, reports));
    p.model_mode = model.mode == ReliabilityModel::Mode::trained ? "trained" : "heuristic";
    if (!articles.empty()) {
        double score_sum = 0.0;
        std::size_t flagged = 0;
        for (const auto& a : articles) {
            PropagandaSignal sig = propaganda_flag(style_features(a, lexicons, params.style),
                                                   params.propaganda_threshold);
            score_sum += sig.score;
            if (sig.flagged) ++flagged;
        }
        p.propaganda_degree = clamp01(score_sum / static_cast<double>(articles.size()));
        p.flagged_article_fraction =
            static_cast<double>(flagged) / static_cast<double>(articles.size());
    }
    p.ideology = outlet.ideology;
    p.frames = outlet.frames;
    p.hyper_partisanship = outlet.hyper_partisanship;
    p.article_count = static_cast<std::int64_t>(articles.size());
    for (const auto& r : reports) p.channel_availability[to_string(r.channel)] = r.available;
    p.created_at = now;
    p.profile_version = 1;
    return p;
}

// ---------------------------------------------------------------------------
// Claim verdict assembly

inline json verdict_config_snapshot(const VerdictParams& p, const StanceParams& stance) {
    return json{{"article_reliability_mode", to_string(p.article_reliability_mode)},
                {"k", p.k},
                {"lambda", p.lambda},
                {"likely_false_below", p.likely_false_below},
                {"likely_true_above", p.likely_true_above},
                {"tau_agree", stance.tau_agree},
                {"tau_rel", stance.tau_rel}};
}

// articles must be the exact list the index was built from (positions align).
inline ClaimVerdict claim_verdict(const std::string& claim, const InvertedIndex& index,
                                  const std::vector<ArticleRecord>& articles,
                                  const std::map<std::string, MediaProfile>& profiles,
                                  const StanceDetector& stance_detector,
                                  const LexiconBundle& lexicons, const VerdictParams& params = {},
                                  const StanceParams& stance_params = {},
                                  const StyleParams& style = {},
                                  const LanguageMixWeights& language_mix = {},
                                  const Bm25Params& bm25 = {}) {
    if (tokenize(claim).empty()) throw ValidationError("claim produced no tokens");
    if (params.likely_false_below > params.likely_true_above) {
        throw ValidationError("band thresholds out of order");
    }
    if (articles.size() != index.doc_ids.size()) {
        throw ValidationError("article list does not match the index");
    }

    ClaimVerdict v;
    v.claim = claim;
    v.config = verdict_config_snapshot(params, stance_params);

    for (const auto& hit : retrieve(index, claim, params.k, bm25)) {
        const ArticleRecord& article = articles[hit.position];
        auto pit = profiles.find(article.source_domain);
        if (pit == profiles.end()) {
            throw NotFoundError("no profile for domain '" + article.source_domain + "'");
        }
        StanceResult stance = stance_detector.detect(claim, article);
        double r_site = pit->second.reliability;
        double reliability = r_site;
        if (params.article_reliability_mode == ArticleReliabilityMode::eq1) {
            double r_lang =
                clamp01(language_reliability(style_features(article, lexicons, style),
                                             language_mix));
            reliability = article_factuality(r_lang, r_site, params.lambda);
        }
        v.evidence.push_back(
            make_evidence(article.id, reliability, stance.label, hit.score));
    }

    std::sort(v.evidence.begin(), v.evidence.end(),
              [](const EvidenceItem& a, const EvidenceItem& b) {
                  double ma = std::abs(a.contribution), mb = std::abs(b.contribution);
                  if (ma != mb) return ma > mb;
                  return a.article_id < b.article_id;
              });

    v.raw_score = claim_raw_score(v.evidence);
    auto [normalized, factuality] = normalize_claim_score(v.raw_score, v.evidence);
    v.normalized_score = normalized;
    v.factuality = factuality;
    v.band = pick_band(v.factuality, params);
    return v;
}

inline json to_json(const EvidenceItem& e) {
    return json{{"article_id", e.article_id},
                {"contribution", e.contribution},
                {"reliability", e.reliability},
                {"retrieval_score", e.retrieval_score},
                {"stance_label", to_string(e.stance_label)},
                {"stance_value", e.stance_value}};
}

inline json to_json(const ClaimVerdict& v) {
    json evidence = json::array();
    for (const auto& e : v.evidence) evidence.push_back(to_json(e));
    return json{{"band", to_string(v.band)},
                {"claim", v.claim},
                {"config", v.config},
                {"evidence", std::move(evidence)},
                {"factuality", v.factuality},
                {"normalized_score", v.normalized_score},
                {"raw_score", v.raw_score}};
}

}  // namespace prefact
