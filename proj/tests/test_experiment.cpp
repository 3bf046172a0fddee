#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "specavg/experiment.hpp"

using namespace specavg;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("specavg_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

const char* kScalarAverage =
    "experiment = average\n"
    "pair.kind = scalar\n"
    "pair.a = 0\npair.b = 1\n"
    "profile.kind = uniform\nprofile.a = 0\nprofile.b = 1\n"
    "range.lo = -0.5\nrange.hi = 1.5\n";

}  // namespace

TEST_CASE("config parsing: comments, whitespace, errors") {
    const ExperimentConfig cfg = ExperimentConfig::parse_string(
        "# a comment\n"
        "experiment = average   # trailing comment\n"
        "  nodes =  500 \n"
        "epsilons = 0.2, 0.1,0.05\n"
        "seed = 42\n");
    CHECK(cfg.get("experiment") == "average");
    CHECK(cfg.get_int("nodes") == 500);
    CHECK(cfg.get_seed() == 42);
    CHECK(cfg.get_list("epsilons") == std::vector<double>{0.2, 0.1, 0.05});
    CHECK(cfg.get_or("missing", "fallback") == "fallback");
    CHECK(cfg.get_double_or("missing", 1.5) == 1.5);

    CHECK_THROWS_AS(cfg.get("absent"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse_string("no equals sign"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse_string("= orphan value"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse_string("nodes = many").get_int("nodes"),
                    ConfigError);
    CHECK_THROWS_AS(ExperimentConfig().get_seed(), ConfigError);
}

TEST_CASE("catalog: required statements, stable round trip") {
    const std::string catalog = experiment_catalog_json();
    const nlohmann::json j = nlohmann::json::parse(catalog);
    REQUIRE(j.is_object());
    CHECK(j.at("average").get<std::string>().find("Theorem 1") != std::string::npos);
    CHECK(j.at("commutator").get<std::string>().find("Howland Lemma 2.9") !=
          std::string::npos);
    for (const std::string& kind : experiment_kinds()) CHECK(j.contains(kind));
    CHECK(j.size() == experiment_kinds().size());

    // round trip through the JSON parser preserves the catalog
    CHECK(nlohmann::json::parse(j.dump(2) + "\n") == j);
    CHECK(experiment_catalog_json() == catalog);
}

TEST_CASE("run_experiment: scalar average passes its oracle") {
    const fs::path out = fresh_dir("avg");
    const RunReport rep =
        run_experiment(ExperimentConfig::parse_string(kScalarAverage), out);
    CHECK(rep.all_pass());
    CHECK(fs::exists(out / "nu_binned.csv"));
    const nlohmann::json j = nlohmann::json::parse(report_to_json(rep));
    CHECK(j.at("experiment") == "average");
    CHECK(j.at("pass") == true);
}

TEST_CASE("run_experiment: unknown kind and missing seed are config errors") {
    const fs::path out = fresh_dir("err");
    CHECK_THROWS_AS(
        run_experiment(ExperimentConfig::parse_string("experiment = nonsense\n"), out),
        ConfigError);
    CHECK_THROWS_AS(run_experiment(ExperimentConfig::parse_string(
                                       "experiment = ids\nmodel.cells = 2\n"
                                       "model.mesh = 4\nsamples = 3\n"),
                                   out),
                    ConfigError);
}

TEST_CASE("run_experiment: direct integral on a tiny fixture") {
    const fs::path out = fresh_dir("di");
    const RunReport rep = run_experiment(
        ExperimentConfig::parse_string(
            "experiment = direct-integral\nseed = 1\nfiber.n = 3\nfiber.count = 2\n"),
        out);
    CHECK(rep.all_pass());
    REQUIRE(rep.checks.size() == 1);
    CHECK(rep.checks[0].value <= rep.checks[0].tolerance);
}

TEST_CASE("run_experiment writes only inside the output directory") {
    const fs::path root = fresh_dir("isolated");
    const fs::path out = root / "inner";
    const RunReport rep =
        run_experiment(ExperimentConfig::parse_string(kScalarAverage), out);
    for (const std::string& artifact : rep.artifacts) {
        CHECK(fs::exists(out / artifact));
        CHECK(fs::path(artifact).is_relative());
    }
    std::size_t entries = 0;
    for (const auto& e : fs::directory_iterator(root)) {
        (void)e;
        ++entries;
    }
    CHECK(entries == 1);  // nothing escaped next to the out dir
}

// ---------------------------------------------------------------------------
// cli suite: drives the installed binary named by $SPECAVG_CLI
// ---------------------------------------------------------------------------

namespace {

struct CliResult {
    int exit_code = -1;
    std::string stdout_text;
};

CliResult run_cli(const std::string& args) {
    const char* bin = std::getenv("SPECAVG_CLI");
    REQUIRE_MESSAGE(bin != nullptr, "SPECAVG_CLI must point at the built binary");
    const fs::path captured = fs::temp_directory_path() / "specavg_cli_stdout.txt";
    const std::string cmd =
        std::string(bin) + " " + args + " > " + captured.string() + " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream is(captured, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    r.stdout_text = os.str();
    return r;
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("list prints the catalog") {
    const CliResult r = run_cli("list");
    CHECK(r.exit_code == kExitOk);
    CHECK(r.stdout_text == experiment_catalog_json());
}

TEST_CASE("validate accepts good configs and rejects bad ones with exit 2") {
    const fs::path good = write_config("cli_good.cfg", kScalarAverage);
    CHECK(run_cli("validate " + good.string()).exit_code == kExitOk);

    const fs::path unknown = write_config("cli_unknown.cfg", "experiment = what\n");
    CHECK(run_cli("validate " + unknown.string()).exit_code == kExitConfigError);

    const fs::path no_seed = write_config(
        "cli_noseed.cfg",
        "experiment = ids\nmodel.cells = 2\nmodel.mesh = 4\nsamples = 2\n");
    CHECK(run_cli("validate " + no_seed.string()).exit_code == kExitConfigError);
    CHECK(run_cli("validate /nonexistent/file.cfg").exit_code == kExitConfigError);
}

TEST_CASE("run: success, config error, acceptance failure") {
    const fs::path good = write_config("cli_run.cfg", kScalarAverage);
    const fs::path out = fresh_dir("cli_run");
    CHECK(run_cli("run " + good.string() + " --out " + out.string()).exit_code == kExitOk);
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "nu_binned.csv"));

    const fs::path bad = write_config("cli_bad.cfg", "experiment = ids\nsamples = 2\n");
    CHECK(run_cli("run " + bad.string() + " --out " + fresh_dir("cli_bad").string())
              .exit_code == kExitConfigError);

    // an impossible tolerance turns a healthy run into an acceptance failure
    const fs::path strict = write_config(
        "cli_strict.cfg", std::string(kScalarAverage) + "tol.oracle_l1 = 1e-30\n");
    CHECK(run_cli("run " + strict.string() + " --out " + fresh_dir("cli_strict").string())
              .exit_code == kExitAcceptanceFailure);
}

TEST_CASE("reproducibility: identical config, byte-identical artifacts") {
    const std::string cfg_text =
        "experiment = ids\nmodel.cells = 4\nmodel.mesh = 4\n"
        "model.law.kind = uniform\nmodel.law.a = 0\nmodel.law.b = 1\n"
        "samples = 10\nbins = 64\nseed = 202\n";
    const fs::path cfg = write_config("cli_repro.cfg", cfg_text);
    const fs::path out1 = fresh_dir("cli_repro1"), out2 = fresh_dir("cli_repro2");
    REQUIRE(run_cli("run " + cfg.string() + " --out " + out1.string()).exit_code == kExitOk);
    REQUIRE(run_cli("run " + cfg.string() + " --out " + out2.string()).exit_code == kExitOk);
    CHECK(slurp(out1 / "ids.csv") == slurp(out2 / "ids.csv"));

    // --seed overrides the config seed and changes the data
    const fs::path out3 = fresh_dir("cli_repro3");
    REQUIRE(run_cli("run " + cfg.string() + " --seed 999 --out " + out3.string())
                .exit_code == kExitOk);
    CHECK(slurp(out1 / "ids.csv") != slurp(out3 / "ids.csv"));
}

TEST_CASE("output root: env var honored only when --out is absent") {
    const fs::path cfg = write_config("cli_env.cfg", kScalarAverage);
    const fs::path env_root = fresh_dir("cli_envroot");
    const fs::path flag_out = fresh_dir("cli_flagout");

    const char* bin = std::getenv("SPECAVG_CLI");
    REQUIRE(bin != nullptr);
    auto with_env = [&](const std::string& extra) {
        const std::string cmd = "SPECAVG_OUT_ROOT=" + env_root.string() + " " +
                                std::string(bin) + " run " + cfg.string() + extra +
                                " >/dev/null 2>&1";
        const int raw = std::system(cmd.c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };

    CHECK(with_env("") == kExitOk);
    CHECK(fs::exists(env_root / "report.json"));

    CHECK(with_env(" --out " + flag_out.string()) == kExitOk);
    CHECK(fs::exists(flag_out / "report.json"));
    CHECK(!fs::exists(env_root / "nu_binned.csv.bak"));  // env run untouched by flag run
}

TEST_SUITE_END();
