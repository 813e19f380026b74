// prefact command-line interface.
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "prefact/prefact.hpp"

namespace {

prefact::Engine make_engine(const std::string& config_path) {
    prefact::EngineConfig cfg;
    if (!config_path.empty()) cfg = prefact::load_engine_config(config_path);
    return prefact::Engine(std::move(cfg));
}

void emit(const prefact::json& j) { std::cout << prefact::canonical_document(j); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prefact: news outlet reliability profiles and claim verdicts"};
    app.set_version_flag("--version", prefact::kEngineVersion);
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("-c,--config", config_path,
                   "JSON config file (// and /* */ comments allowed)");

    auto* cmd_ingest = app.add_subcommand("ingest", "validate the configured corpus files");

    auto* cmd_profile_all =
        app.add_subcommand("profile-all", "build and store a profile for every outlet");

    std::string domain;
    auto* cmd_profile = app.add_subcommand("profile", "print the stored profile for a domain");
    cmd_profile->add_option("domain", domain, "outlet domain")->required();

    std::string article_id;
    auto* cmd_score_article =
        app.add_subcommand("score-article", "score one corpus article against its outlet profile");
    cmd_score_article->add_option("id", article_id, "article id")->required();

    std::string claim;
    auto* cmd_score_claim =
        app.add_subcommand("score-claim", "retrieve evidence and produce a claim verdict");
    cmd_score_claim->add_option("claim", claim, "claim text")->required();

    std::string model_out;
    auto* cmd_train =
        app.add_subcommand("train", "fit the reliability model on labeled outlets");
    cmd_train->add_option("-o,--out", model_out, "model file to write (defaults to paths.model)");

    auto* cmd_report = app.add_subcommand("report", "summarize the profile store");

    std::string host = "127.0.0.1";
    int port = 8080;
    auto* cmd_serve = app.add_subcommand("serve", "run the HTTP scoring API");
    cmd_serve->add_option("--host", host, "bind address");
    cmd_serve->add_option("--port", port, "bind port");

    std::string preset = "golden";
    std::string fixtures_out;
    double noise = 0.0;
    std::optional<std::uint64_t> seed;
    auto* cmd_fixtures =
        app.add_subcommand("make-fixtures", "emit a synthetic corpus with ground truth");
    cmd_fixtures->add_option("--preset", preset, "golden | training | sweep")
        ->check(CLI::IsMember({"golden", "training", "sweep"}));
    cmd_fixtures->add_option("-o,--out", fixtures_out, "output directory")->required();
    cmd_fixtures->add_option("--noise", noise, "stance noise rate (sweep preset)");
    cmd_fixtures->add_option("--seed", seed, "override the preset seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_fixtures->parsed()) {
            prefact::SyntheticSpec spec;
            if (preset == "golden") {
                spec = prefact::golden_spec();
            } else if (preset == "training") {
                spec = prefact::training_spec();
            } else {
                spec = prefact::sweep_spec(noise);
            }
            if (seed) spec.seed = *seed;
            prefact::SyntheticData data = prefact::generate_corpus(spec);
            prefact::write_fixture_files(data, fixtures_out);
            emit(prefact::json{{"articles", data.corpus.articles.size()},
                               {"claims", data.truth.claims.size()},
                               {"out", fixtures_out},
                               {"outlets", data.corpus.outlets.size()},
                               {"preset", preset}});
            return 0;
        }

        if (cmd_score_claim->parsed() && claim.empty()) {
            std::cerr << "score-claim: claim text must be non-empty\n";
            return 1;
        }

        prefact::Engine engine = make_engine(config_path);

        if (cmd_ingest->parsed()) {
            emit(engine.validate_report());
        } else if (cmd_profile_all->parsed()) {
            auto profiles = engine.profile_all();
            emit(prefact::json{{"profiles_built", profiles.size()},
                               {"snapshot_id", engine.store().snapshot()->snapshot_id}});
        } else if (cmd_profile->parsed()) {
            emit(prefact::to_json(engine.profile(domain)));
        } else if (cmd_score_article->parsed()) {
            emit(engine.score_article_by_id(article_id));
        } else if (cmd_score_claim->parsed()) {
            prefact::ClaimVerdict v = engine.score_claim(claim);
            engine.store().append_verdict(v);
            emit(prefact::to_json(v));
        } else if (cmd_train->parsed()) {
            std::string out = model_out.empty() ? engine.config().model_path : model_out;
            if (out.empty()) {
                std::cerr << "train: no model output path (use --out or paths.model)\n";
                return 1;
            }
            prefact::TrainResult r = engine.train();
            prefact::write_file_atomic(out,
                                       prefact::canonical_document(prefact::to_json(r.model)));
            emit(prefact::json{{"epochs", engine.config().train.epochs},
                               {"final_loss", r.final_loss},
                               {"initial_loss", r.initial_loss},
                               {"model", out}});
        } else if (cmd_report->parsed()) {
            emit(engine.report());
        } else if (cmd_serve->parsed()) {
            prefact::ApiServer server(engine);
            std::cerr << "prefact-api listening on " << host << ":" << port << "\n";
            if (!server.listen(host, port)) {
                std::cerr << "serve: failed to bind " << host << ":" << port << "\n";
                return 2;
            }
        }
        return 0;
    } catch (const prefact::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
