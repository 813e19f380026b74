#pragma once

#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefact/error.hpp"
#include "prefact/ingest.hpp"
#include "prefact/lexicon.hpp"
#include "prefact/profilestore.hpp"
#include "prefact/reliability.hpp"
#include "prefact/retrieval.hpp"
#include "prefact/sourcefeat.hpp"
#include "prefact/stance.hpp"
#include "prefact/textfeat.hpp"
#include "prefact/util.hpp"
#include "prefact/verdict.hpp"
#include "prefact/version.hpp"

namespace prefact {

// Everything the pipeline needs, resolvable from one JSON file. Unset paths
// fall back to built-in lexicons/lists and an empty corpus.
struct EngineConfig {
    std::string articles_path;
    std::string outlets_path;
    std::string lexicon_dir;
    std::string dictionary_path;
    std::string suffixes_path;
    std::string wiki_cues_path;
    std::string store_dir = "store";
    std::string model_path;

    double lambda = 0.5;
    StanceParams stance;
    std::size_t k = 20;
    Bm25Params bm25;
    double likely_false_below = 0.4;
    double likely_true_above = 0.6;
    std::map<std::string, double> group_weights;
    ArticleReliabilityMode article_reliability_mode = ArticleReliabilityMode::eq1;
    std::size_t min_articles = 1;
    double propaganda_threshold = 0.5;
    LanguageMixWeights language_mix;
    std::size_t ttr_window = 1000;
    TrainHyper train;
    std::optional<std::int64_t> fixed_now;
};

namespace detail {

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ValidationError("unknown config key '" + item.key() + "' in " + where);
        }
    }
}

inline double get_range(const json& obj, const char* key, double fallback, double lo, double hi) {
    double v = obj.value(key, fallback);
    if (v < lo || v > hi) {
        throw ValidationError(std::string("config value '") + key + "' out of range");
    }
    return v;
}

}  // namespace detail

// The effective configuration, defaults included, in canonical form. The
// config hash is computed over this document, so two configs that resolve to
// the same effective settings hash identically.
inline json to_json(const EngineConfig& c) {
    json paths;
    auto put_path = [&paths](const char* key, const std::string& v) {
        if (!v.empty()) paths[key] = v;
    };
    put_path("articles", c.articles_path);
    put_path("outlets", c.outlets_path);
    put_path("lexicons", c.lexicon_dir);
    put_path("dictionary", c.dictionary_path);
    put_path("suspicious_suffixes", c.suffixes_path);
    put_path("wiki_cues", c.wiki_cues_path);
    put_path("store", c.store_dir);
    put_path("model", c.model_path);

    json j{{"article_reliability_mode", to_string(c.article_reliability_mode)},
           {"bands",
            json{{"likely_false_below", c.likely_false_below},
                 {"likely_true_above", c.likely_true_above}}},
           {"lambda", c.lambda},
           {"language_mix",
            json{{"offensive", c.language_mix.offensive},
                 {"propaganda", c.language_mix.propaganda},
                 {"sentiment", c.language_mix.sentiment},
                 {"subjectivity", c.language_mix.subjectivity}}},
           {"min_articles", c.min_articles},
           {"paths", std::move(paths)},
           {"propaganda_threshold", c.propaganda_threshold},
           {"retrieval", json{{"b", c.bm25.b}, {"k", c.k}, {"k1", c.bm25.k1}}},
           {"stance", json{{"tau_agree", c.stance.tau_agree}, {"tau_rel", c.stance.tau_rel}}},
           {"train", json{{"epochs", c.train.epochs}, {"l2", c.train.l2}, {"lr", c.train.lr}}},
           {"ttr_window", c.ttr_window}};
    if (!c.group_weights.empty()) {
        json w;
        for (const auto& [name, v] : c.group_weights) w[name] = v;
        j["group_weights"] = std::move(w);
    }
    if (c.fixed_now) j["fixed_now"] = *c.fixed_now;
    return j;
}

inline EngineConfig engine_config_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    detail::reject_unknown_keys(
        j,
        {"article_reliability_mode", "bands", "fixed_now", "group_weights", "lambda",
         "language_mix", "min_articles", "paths", "propaganda_threshold", "retrieval", "stance",
         "train", "ttr_window"},
        "config root");

    EngineConfig c;
    if (j.contains("paths")) {
        const json& p = j.at("paths");
        detail::reject_unknown_keys(p,
                                    {"articles", "outlets", "lexicons", "dictionary",
                                     "suspicious_suffixes", "wiki_cues", "store", "model"},
                                    "paths");
        c.articles_path = p.value("articles", "");
        c.outlets_path = p.value("outlets", "");
        c.lexicon_dir = p.value("lexicons", "");
        c.dictionary_path = p.value("dictionary", "");
        c.suffixes_path = p.value("suspicious_suffixes", "");
        c.wiki_cues_path = p.value("wiki_cues", "");
        c.store_dir = p.value("store", c.store_dir);
        c.model_path = p.value("model", "");
    }
    c.lambda = detail::get_range(j, "lambda", c.lambda, 0.0, 1.0);
    if (j.contains("stance")) {
        const json& s = j.at("stance");
        detail::reject_unknown_keys(s, {"tau_agree", "tau_rel"}, "stance");
        c.stance.tau_rel = detail::get_range(s, "tau_rel", c.stance.tau_rel, 0.0, 1.0);
        c.stance.tau_agree = detail::get_range(s, "tau_agree", c.stance.tau_agree, 0.0, 1.0);
    }
    if (j.contains("retrieval")) {
        const json& r = j.at("retrieval");
        detail::reject_unknown_keys(r, {"b", "k", "k1"}, "retrieval");
        std::int64_t k = r.value("k", static_cast<std::int64_t>(c.k));
        if (k < 1) throw ValidationError("retrieval k must be >= 1");
        c.k = static_cast<std::size_t>(k);
        c.bm25.k1 = detail::get_range(r, "k1", c.bm25.k1, 0.0, 10.0);
        c.bm25.b = detail::get_range(r, "b", c.bm25.b, 0.0, 1.0);
    }
    if (j.contains("bands")) {
        const json& b = j.at("bands");
        detail::reject_unknown_keys(b, {"likely_false_below", "likely_true_above"}, "bands");
        c.likely_false_below =
            detail::get_range(b, "likely_false_below", c.likely_false_below, 0.0, 1.0);
        c.likely_true_above =
            detail::get_range(b, "likely_true_above", c.likely_true_above, 0.0, 1.0);
        if (c.likely_false_below > c.likely_true_above) {
            throw ValidationError("band thresholds out of order");
        }
    }
    if (j.contains("group_weights")) {
        for (const auto& item : j.at("group_weights").items()) {
            channel_from_string(item.key());  // validates the name
            double v = item.value().get<double>();
            if (v < 0.0) throw ValidationError("group weight must be non-negative");
            c.group_weights[item.key()] = v;
        }
    }
    if (j.contains("article_reliability_mode")) {
        c.article_reliability_mode =
            article_reliability_mode_from_string(j.at("article_reliability_mode"));
    }
    if (j.contains("min_articles")) {
        std::int64_t m = j.at("min_articles").get<std::int64_t>();
        if (m < 0) throw ValidationError("min_articles must be >= 0");
        c.min_articles = static_cast<std::size_t>(m);
    }
    c.propaganda_threshold =
        detail::get_range(j, "propaganda_threshold", c.propaganda_threshold, 0.0, 1.0);
    if (j.contains("language_mix")) {
        const json& m = j.at("language_mix");
        detail::reject_unknown_keys(m, {"offensive", "propaganda", "sentiment", "subjectivity"},
                                    "language_mix");
        c.language_mix.propaganda = detail::get_range(m, "propaganda", 0.4, 0.0, 1e6);
        c.language_mix.subjectivity = detail::get_range(m, "subjectivity", 0.3, 0.0, 1e6);
        c.language_mix.offensive = detail::get_range(m, "offensive", 0.2, 0.0, 1e6);
        c.language_mix.sentiment = detail::get_range(m, "sentiment", 0.1, 0.0, 1e6);
    }
    if (j.contains("ttr_window")) {
        std::int64_t w = j.at("ttr_window").get<std::int64_t>();
        if (w < 1) throw ValidationError("ttr_window must be >= 1");
        c.ttr_window = static_cast<std::size_t>(w);
    }
    if (j.contains("train")) {
        const json& t = j.at("train");
        detail::reject_unknown_keys(t, {"epochs", "l2", "lr"}, "train");
        c.train.lr = detail::get_range(t, "lr", c.train.lr, 1e-9, 100.0);
        c.train.l2 = detail::get_range(t, "l2", c.train.l2, 0.0, 100.0);
        std::int64_t epochs = t.value("epochs", static_cast<std::int64_t>(c.train.epochs));
        if (epochs < 1) throw ValidationError("train epochs must be >= 1");
        c.train.epochs = static_cast<int>(epochs);
    }
    if (j.contains("fixed_now")) c.fixed_now = j.at("fixed_now").get<std::int64_t>();
    return c;
}

// Config files may carry // and /* */ comments; the parser strips them.
inline EngineConfig load_engine_config(const std::filesystem::path& path) {
    std::string raw;
    try {
        raw = read_file(path);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("cannot read config: ") + e.what());
    }
    json j;
    try {
        j = json::parse(raw, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw ValidationError("config is not valid JSON: " + std::string(e.what()));
    }
    EngineConfig c = engine_config_from_json(j);
    for (const std::string& p :
         {c.articles_path, c.outlets_path, c.lexicon_dir, c.dictionary_path, c.suffixes_path,
          c.wiki_cues_path}) {
        if (!p.empty() && !std::filesystem::exists(p)) {
            throw ValidationError("configured path does not exist: " + p);
        }
    }
    return c;
}

inline std::string config_hash(const EngineConfig& c) { return to_hex64(fnv1a64(to_json(c).dump())); }

// Plain-text list file: one entry per line, '#' comments and blanks skipped.
inline std::vector<std::string> load_line_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open list file: " + path.string());
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        out.push_back(line);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Engine: owns the loaded corpus, index, model, lexicons, and store. The CLI
// and the HTTP server both call through here, which is what makes their
// outputs byte-identical for the same logical request.

class Engine {
public:
    explicit Engine(EngineConfig cfg) : cfg_(std::move(cfg)), hash_(config_hash(cfg_)) {
        if (!cfg_.lexicon_dir.empty()) {
            std::filesystem::path dir = cfg_.lexicon_dir;
            lexicons_ = LexiconBundle{Lexicon::load(dir / "subjectivity.txt", "subjectivity"),
                                      Lexicon::load(dir / "positive.txt", "positive"),
                                      Lexicon::load(dir / "negative.txt", "negative"),
                                      Lexicon::load(dir / "offensive.txt", "offensive"),
                                      Lexicon::load(dir / "propaganda_cues.txt", "propaganda"),
                                      Lexicon::load(dir / "stopwords.txt", "stopwords"),
                                      Lexicon::load(dir / "negation.txt", "negation")};
        }
        if (!cfg_.dictionary_path.empty()) {
            dictionary_.clear();
            for (auto& w : load_line_list(cfg_.dictionary_path)) dictionary_.insert(lowercase(w));
        }
        if (!cfg_.suffixes_path.empty()) suffixes_ = load_line_list(cfg_.suffixes_path);
        if (!cfg_.wiki_cues_path.empty()) wiki_cues_ = load_line_list(cfg_.wiki_cues_path);

        std::vector<ArticleRecord> articles;
        std::vector<OutletRecord> outlets;
        if (!cfg_.articles_path.empty()) {
            std::ifstream in(cfg_.articles_path);
            if (!in) throw ValidationError("cannot open articles file: " + cfg_.articles_path);
            articles = parse_article_stream(in);
        }
        if (!cfg_.outlets_path.empty()) {
            std::ifstream in(cfg_.outlets_path);
            if (!in) throw ValidationError("cannot open outlets file: " + cfg_.outlets_path);
            outlets = parse_outlet_stream(in);
        }
        corpus_ = make_corpus(std::move(articles), std::move(outlets));
        index_ = build_index(corpus_.articles);

        if (!cfg_.model_path.empty() && std::filesystem::exists(cfg_.model_path)) {
            model_ = model_from_json(json::parse(read_file(cfg_.model_path)));
        } else {
            model_.mode = ReliabilityModel::Mode::heuristic;
            for (const auto& [name, w] : cfg_.group_weights) {
                model_.group_weights[channel_from_string(name)] = w;
            }
        }
        store_ = std::make_unique<ProfileStore>(cfg_.store_dir);
        detector_ = std::make_unique<BaselineStanceDetector>(lexicons_.stopwords,
                                                             lexicons_.negation, cfg_.stance);
    }

    const EngineConfig& config() const { return cfg_; }
    const std::string& hash() const { return hash_; }
    const Corpus& corpus() const { return corpus_; }
    const InvertedIndex& index() const { return index_; }
    const LexiconBundle& lexicons() const { return lexicons_; }
    const ReliabilityModel& model() const { return model_; }
    ProfileStore& store() { return *store_; }
    const ProfileStore& store() const { return *store_; }

    std::int64_t now() const {
        return cfg_.fixed_now ? *cfg_.fixed_now : static_cast<std::int64_t>(std::time(nullptr));
    }

    ProfileBuildParams build_params() const {
        ProfileBuildParams p;
        p.min_articles = cfg_.min_articles;
        p.propaganda_threshold = cfg_.propaganda_threshold;
        p.language_mix = cfg_.language_mix;
        p.style.ttr_window = cfg_.ttr_window;
        p.wiki_cues = wiki_cues_;
        p.url_dictionary = dictionary_;
        p.suspicious_suffixes = suffixes_;
        return p;
    }

    // Corpus statistics; parsing already validated every record.
    json validate_report() const {
        json per_outlet;
        for (const auto& [domain, group] : group_by_outlet(corpus_)) {
            per_outlet[domain] = group.size();
        }
        return json{{"articles", corpus_.articles.size()},
                    {"articles_by_outlet", std::move(per_outlet)},
                    {"ok", true},
                    {"outlets", corpus_.outlets.size()}};
    }

    // Build a profile for every outlet in the corpus and publish one snapshot.
    std::map<std::string, MediaProfile> profile_all() {
        std::int64_t ts = now();
        auto grouped = group_by_outlet(corpus_);
        std::vector<MediaProfile> profiles;
        ProfileBuildParams params = build_params();
        for (const auto& [domain, outlet] : corpus_.outlets) {
            auto it = grouped.find(domain);
            static const std::vector<ArticleRecord> kNoArticles;
            const auto& articles = it == grouped.end() ? kNoArticles : it->second;
            profiles.push_back(
                build_media_profile(domain, articles, outlet, model_, lexicons_, ts, params));
        }
        store_->put_profiles(std::move(profiles), ts);
        return store_->snapshot()->profiles;
    }

    MediaProfile profile(const std::string& domain) const {
        std::string canonical = normalize_domain(domain);
        auto snap = store_->snapshot();
        auto it = snap->profiles.find(canonical);
        if (it == snap->profiles.end()) {
            throw NotFoundError("no profile for domain '" + canonical + "'");
        }
        return it->second;
    }

    json score_article(const ArticleRecord& article) const {
        StyleFeatureVector style =
            style_features(article, lexicons_, StyleParams{cfg_.ttr_window});
        double r_lang = clamp01(language_reliability(style, cfg_.language_mix));
        MediaProfile p = profile(article.source_domain);
        double factuality = article_factuality(r_lang, p.reliability, cfg_.lambda);
        PropagandaSignal sig = propaganda_flag(style, cfg_.propaganda_threshold);
        return json{{"article_id", article.id},
                    {"factuality", factuality},
                    {"lambda", cfg_.lambda},
                    {"propaganda_flagged", sig.flagged},
                    {"propaganda_score", sig.score},
                    {"r_lang", r_lang},
                    {"r_site", p.reliability},
                    {"source_domain", article.source_domain}};
    }

    json score_article_by_id(const std::string& article_id) const {
        for (const auto& a : corpus_.articles) {
            if (a.id == article_id) return score_article(a);
        }
        throw NotFoundError("no article with id '" + article_id + "'");
    }

    ClaimVerdict score_claim(const std::string& claim) const {
        VerdictParams params;
        params.k = cfg_.k;
        params.lambda = cfg_.lambda;
        params.likely_false_below = cfg_.likely_false_below;
        params.likely_true_above = cfg_.likely_true_above;
        params.article_reliability_mode = cfg_.article_reliability_mode;
        auto snap = store_->snapshot();
        return claim_verdict(claim, index_, corpus_.articles, snap->profiles, *detector_,
                             lexicons_, params, cfg_.stance, StyleParams{cfg_.ttr_window},
                             cfg_.language_mix, cfg_.bm25);
    }

    // Supervised training over the labeled outlets in the corpus ("mixed"
    // labels are excluded; the model is binary).
    TrainResult train() {
        auto grouped = group_by_outlet(corpus_);
        LabeledDataset ds;
        for (Channel c : kAllChannels) ds.feature_order.push_back(to_string(c));
        ProfileBuildParams params = build_params();
        std::int64_t ts = now();
        for (const auto& [domain, outlet] : corpus_.outlets) {
            if (!outlet.label || *outlet.label == FactualityLabel::mixed) continue;
            auto it = grouped.find(domain);
            static const std::vector<ArticleRecord> kNoArticles;
            const auto& articles = it == grouped.end() ? kNoArticles : it->second;
            auto reports = outlet_channel_reports(domain, articles, outlet, lexicons_, ts, params);
            ds.rows.push_back(reports_to_vector(ds.feature_order, reports));
            ds.labels.push_back(*outlet.label == FactualityLabel::high ? 1 : 0);
        }
        if (ds.rows.size() < 2) {
            throw InsufficientEvidenceError("training needs at least 2 labeled outlets");
        }
        return train_logistic(ds, cfg_.train);
    }

    json report() const {
        auto snap = store_->snapshot();
        double sum = 0.0;
        std::int64_t flagged_heavy = 0;
        for (const auto& [domain, p] : snap->profiles) {
            sum += p.reliability;
            if (p.flagged_article_fraction > 0.5) ++flagged_heavy;
        }
        json j{{"config_hash", hash_},
               {"engine_version", kEngineVersion},
               {"outlets_flagged_majority_propaganda", flagged_heavy},
               {"profile_count", snap->profiles.size()},
               {"snapshot_created_at", snap->created_at},
               {"snapshot_id", snap->snapshot_id},
               {"verdict_count", store_->verdicts().size()}};
        if (!snap->profiles.empty()) {
            j["mean_reliability"] = sum / static_cast<double>(snap->profiles.size());
        }
        return j;
    }

private:
    EngineConfig cfg_;
    std::string hash_;
    LexiconBundle lexicons_ = builtin_lexicons();
    std::set<std::string> dictionary_ = default_url_dictionary();
    std::vector<std::string> suffixes_ = default_suspicious_suffixes();
    std::vector<std::string> wiki_cues_ = default_wiki_cues();
    Corpus corpus_;
    InvertedIndex index_;
    ReliabilityModel model_;
    std::unique_ptr<ProfileStore> store_;
    std::unique_ptr<BaselineStanceDetector> detector_;
};

// Canonical document serialization: pretty, sorted keys, trailing newline.
inline std::string canonical_document(const json& j) {
    std::string s = j.dump(2);
    s += '\n';
    return s;
}

}  // namespace prefact
