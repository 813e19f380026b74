#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "prefact/prefact.hpp"

namespace fs = std::filesystem;
using namespace prefact;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

int g_cli_seq = 0;

fs::path scratch_dir() {
    fs::path dir = fs::temp_directory_path() /
                   ("prefact-cli-" + std::to_string(::getpid()) + "-" +
                    std::to_string(g_cli_seq++));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
    fs::path out_path = dir / "stdout.txt";
    fs::path err_path = dir / "stderr.txt";
    std::string cmd = std::string(PREFACT_CLI_PATH) + " " + args + " >" + out_path.string() +
                      " 2>" + err_path.string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_file(out_path);
    r.err = read_file(err_path);
    return r;
}

// One golden fixture corpus shared by the read-only cases; each case points
// its config at a private store so verdict logs cannot leak across cases.
const fs::path& fixture_dir() {
    static fs::path dir = [] {
        fs::path d = scratch_dir();
        RunResult r = run_cli("make-fixtures --preset golden -o " + (d / "fx").string(), d);
        REQUIRE(r.code == 0);
        return d / "fx";
    }();
    return dir;
}

fs::path write_config(const fs::path& dir) {
    json cfg{{"article_reliability_mode", "site_prior_only"},
             {"fixed_now", 1700000000},
             {"group_weights", {{"text", 0.0}, {"url", 0.0}}},
             {"paths",
              {{"articles", (fixture_dir() / "articles.jsonl").string()},
               {"outlets", (fixture_dir() / "outlets.jsonl").string()},
               {"store", (dir / "store").string()}}}};
    fs::path path = dir / "config.json";
    write_file_atomic(path, canonical_document(cfg));
    return path;
}

}  // namespace

TEST_CASE("cli reports its version and usage", "[cli]") {
    fs::path dir = scratch_dir();
    RunResult version = run_cli("--version", dir);
    REQUIRE(version.code == 0);
    REQUIRE(version.out.find(kEngineVersion) != std::string::npos);

    REQUIRE(run_cli("--help", dir).code == 0);
    REQUIRE(run_cli("", dir).code == 1);            // a subcommand is required
    REQUIRE(run_cli("frobnicate", dir).code == 1);  // unknown subcommand
    REQUIRE(run_cli("profile", dir).code == 1);     // missing required argument
    fs::remove_all(dir);
}

TEST_CASE("cli ingest validates the configured corpus", "[cli]") {
    fs::path dir = scratch_dir();
    fs::path cfg = write_config(dir);
    RunResult r = run_cli("-c " + cfg.string() + " ingest", dir);
    REQUIRE(r.code == 0);
    json report = json::parse(r.out);
    REQUIRE(report.at("ok") == true);
    REQUIRE(report.at("articles") == 4);
    REQUIRE(report.at("outlets") == 4);
    fs::remove_all(dir);
}

TEST_CASE("cli builds, stores and prints profiles", "[cli]") {
    fs::path dir = scratch_dir();
    fs::path cfg = write_config(dir);

    RunResult all = run_cli("-c " + cfg.string() + " profile-all", dir);
    REQUIRE(all.code == 0);
    json built = json::parse(all.out);
    REQUIRE(built.at("profiles_built") == 4);
    REQUIRE(built.at("snapshot_id") == 1);
    REQUIRE(fs::exists(dir / "store" / "snapshots" / "000001.json"));

    RunResult one = run_cli("-c " + cfg.string() + " profile outlet000.test", dir);
    REQUIRE(one.code == 0);
    json profile = json::parse(one.out);
    REQUIRE(profile.at("domain") == "outlet000.test");
    REQUIRE(profile.at("reliability") == 0.9);

    RunResult missing = run_cli("-c " + cfg.string() + " profile nowhere.test", dir);
    REQUIRE(missing.code == 2);
    REQUIRE(missing.err.find("nowhere.test") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cli scores articles and claims", "[cli]") {
    fs::path dir = scratch_dir();
    fs::path cfg = write_config(dir);
    REQUIRE(run_cli("-c " + cfg.string() + " profile-all", dir).code == 0);

    RunResult art = run_cli("-c " + cfg.string() + " score-article a000x000", dir);
    REQUIRE(art.code == 0);
    json scored = json::parse(art.out);
    REQUIRE(scored.at("article_id") == "a000x000");
    REQUIRE(scored.at("r_site") == 0.9);

    RunResult claim =
        run_cli("-c " + cfg.string() + " score-claim \"entity000 causes effect000\"", dir);
    REQUIRE(claim.code == 0);
    json verdict = json::parse(claim.out);
    REQUIRE(verdict.at("band") == "likely-true");
    REQUIRE(verdict.at("factuality").get<double>() ==
            Catch::Approx(27.0 / 28.0).margin(1e-12));

    // The verdict is appended to the store log and shows up in the report.
    REQUIRE(fs::exists(dir / "store" / "verdicts.jsonl"));
    RunResult rep = run_cli("-c " + cfg.string() + " report", dir);
    REQUIRE(rep.code == 0);
    json summary = json::parse(rep.out);
    REQUIRE(summary.at("verdict_count") == 1);
    REQUIRE(summary.at("profile_count") == 4);

    RunResult empty = run_cli("-c " + cfg.string() + " score-claim \"\"", dir);
    REQUIRE(empty.code == 1);
    REQUIRE_FALSE(empty.err.empty());

    RunResult ghost = run_cli("-c " + cfg.string() + " score-article ghost", dir);
    REQUIRE(ghost.code == 2);
    fs::remove_all(dir);
}

TEST_CASE("cli claim scoring is reproducible byte for byte", "[cli]") {
    fs::path dir = scratch_dir();
    fs::path cfg = write_config(dir);
    REQUIRE(run_cli("-c " + cfg.string() + " profile-all", dir).code == 0);

    RunResult first =
        run_cli("-c " + cfg.string() + " score-claim \"entity000 causes effect000\"", dir);
    RunResult second =
        run_cli("-c " + cfg.string() + " score-claim \"entity000 causes effect000\"", dir);
    REQUIRE(first.code == 0);
    REQUIRE(second.code == 0);
    REQUIRE(first.out == second.out);
    fs::remove_all(dir);
}

TEST_CASE("cli trains a model and writes it atomically", "[cli]") {
    fs::path dir = scratch_dir();
    fs::path cfg = write_config(dir);
    fs::path model_path = dir / "model.json";

    RunResult no_out = run_cli("-c " + cfg.string() + " train", dir);
    REQUIRE(no_out.code == 1);  // neither --out nor paths.model configured

    RunResult train = run_cli("-c " + cfg.string() + " train -o " + model_path.string(), dir);
    REQUIRE(train.code == 0);
    json stats = json::parse(train.out);
    REQUIRE(stats.at("final_loss").get<double>() < stats.at("initial_loss").get<double>());
    REQUIRE(stats.at("model") == model_path.string());

    ReliabilityModel model = model_from_json(json::parse(read_file(model_path)));
    REQUIRE(model.mode == ReliabilityModel::Mode::trained);
    fs::remove_all(dir);
}

TEST_CASE("cli emits fixture corpora with ground truth", "[cli]") {
    fs::path dir = scratch_dir();
    fs::path out = dir / "sweep";
    RunResult r =
        run_cli("make-fixtures --preset sweep --noise 0.3 --seed 11 -o " + out.string(), dir);
    REQUIRE(r.code == 0);
    json made = json::parse(r.out);
    REQUIRE(made.at("preset") == "sweep");
    REQUIRE(made.at("out") == out.string());
    for (const char* name : {"articles.jsonl", "outlets.jsonl", "claims.jsonl", "truth.json"}) {
        REQUIRE(fs::exists(out / name));
    }
    json truth = json::parse(read_file(out / "truth.json"));
    REQUIRE(truth.at("format") == "prefact-truth");
    REQUIRE(truth.at("outlets").size() == 20);
    REQUIRE(truth.at("outlets").at("outlet000.test").contains("reliability"));
    REQUIRE(truth.at("outlets").at("outlet000.test").contains("label"));

    REQUIRE(run_cli("make-fixtures --preset bogus -o " + out.string(), dir).code == 1);
    fs::remove_all(dir);
}
