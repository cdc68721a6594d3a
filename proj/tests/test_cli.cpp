#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tensormp/cli.hpp"
#include "tensormp/errors.hpp"
#include "tensormp/io.hpp"
#include "tensormp/moments.hpp"
#include "tensormp/rng.hpp"

using namespace tensormp;
namespace fs = std::filesystem;
using doctest::Approx;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const auto dir = fs::temp_directory_path() / ("tensormp_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_binary(const std::string& args) {
    const std::string command = std::string(TENSORMP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("run_verify passes and reports the class-one counts") {
    std::ostringstream out;
    CHECK(run_verify({.p_max = 4}, out) == 0);
    CHECK(out.str().find("[1 6 6 1]") != std::string::npos);
    CHECK(out.str().find("verification passed") != std::string::npos);

    std::ostringstream tiny;
    CHECK(run_verify({.p_max = 1}, tiny) == 0);

    CHECK_THROWS_AS(run_verify({.p_max = 8}, tiny), BudgetError);
}

TEST_CASE("moments report: d = 0 equals the MP column exactly") {
    MomentsOptions options;
    options.p_max = 8;
    options.c = 0.7;
    options.d = 0.0;
    options.m4 = 5.0;
    const auto report = build_moments_report(options);
    for (int p = 1; p <= 8; ++p) CHECK(report.gammas[p - 1] == report.mp_values[p - 1]);
    CHECK_FALSE(report.gamma1_note.empty());
}

TEST_CASE("moments report: two-point tau feeds the mixture moments") {
    MomentsOptions options;
    options.p_max = 2;
    options.tau_spec = "twopoint:1,2";
    const auto report = build_moments_report(options);
    // gamma_1 = c m1 = (1 + 2)/2
    CHECK(report.gammas[0] == Approx(1.5));
    // gamma_2 = c m2 + c^2 m1^2 with m2 = (1 + 4)/2
    CHECK(report.gammas[1] == Approx(2.5 + 2.25));
    CHECK(report.gamma1_note.find("gamma_1") != std::string::npos);
}

TEST_CASE("moments report: gamma_2 = e + 1 at the unit scheme") {
    MomentsOptions options;
    options.p_max = 4;
    options.d = 1.0;
    options.m4 = 2.0;
    const auto report = build_moments_report(options);
    CHECK(report.gammas[1] == Approx(std::exp(1.0) + 1.0).epsilon(1e-12));
    CHECK(report.theta == Approx(std::exp(1.0)));
}

TEST_CASE("run_oracle echoes the configuration") {
    std::ostringstream out;
    OracleOptions options;
    options.n = 2;
    options.k = 2;
    options.m = 2;
    options.p = 2;
    options.dist = "phase";
    options.with_variance = true;
    options.naive_check = true;
    CHECK(run_oracle(options, out) == 0);
    const auto text = out.str();
    CHECK(text.find("n=2 k=2 m=2 p=2 dist=phase") != std::string::npos);
    CHECK(text.find("naive path") != std::string::npos);
    CHECK(text.find("Var") != std::string::npos);
}

TEST_CASE("format_double round-trips") {
    CounterStream stream(9001);
    for (std::uint64_t j = 0; j < 200; ++j) {
        const double value = (stream.uniform(2 * j) - 0.5) *
                             std::pow(10.0, 300.0 * (stream.uniform(2 * j + 1) - 0.5));
        const std::string text = format_double(value);
        CHECK(std::strtod(text.c_str(), nullptr) == value);
        CHECK(format_double(std::strtod(text.c_str(), nullptr)) == text);
    }
}

TEST_CASE("summary CSV round-trips bit-exactly") {
    const auto dir = fresh_dir("csv");
    std::vector<SummaryRow> rows;
    SummaryRow row;
    row.n = 2;
    row.k = 3;
    row.m = 4;
    row.p = 1;
    row.mean = 1.0 / 3.0;
    row.variance = 1e-17;
    row.std_error = 3.3e-9;
    row.theory = 2.0 / 3.0;
    rows.push_back(row);
    SummaryRow bare;
    bare.n = 3;
    bare.k = 1;
    bare.m = 2;
    bare.p = 2;
    bare.mean = -0.125;
    rows.push_back(bare);

    const auto manifest = RunManifest::create("simulate", "", dir.string(), 7);
    write_summary_csv(dir / "summary.csv", rows, manifest);
    const auto back = read_summary_csv(dir / "summary.csv");
    REQUIRE(back.size() == 2);
    CHECK(back[0].mean == rows[0].mean);
    CHECK(*back[0].variance == *rows[0].variance);
    CHECK(*back[0].std_error == *rows[0].std_error);
    CHECK(*back[0].theory == *rows[0].theory);
    CHECK(back[1].mean == rows[1].mean);
    CHECK_FALSE(back[1].theory.has_value());
}

TEST_CASE("simulate writes artifacts and report reproduces them verbatim") {
    const auto dir = fresh_dir("simulate");
    SimulateOptions options;
    options.base.p_max = 2;
    options.base.dist = "phase";
    options.base.replicas = 50;
    options.base.seed = 11;
    options.base.scheme = Scheme{.c = 1.0, .d = 1.0};
    options.base.histogram_bins = 6;
    options.n_values = {2, 3};
    options.out_dir = (dir / "run").string();

    std::ostringstream out;
    CHECK(run_simulate(options, out) == 0);
    const auto csv_path = dir / "run" / "summary.csv";
    REQUIRE(fs::exists(csv_path));
    REQUIRE(fs::exists(dir / "run" / "summary.json"));

    // JSON artifact carries the manifest and resolved configs.
    std::ifstream json_in(dir / "run" / "summary.json");
    const auto payload = nlohmann::json::parse(json_in);
    CHECK(payload["schema_version"] == 1);
    CHECK(payload["manifest"]["tool_version"] == kToolVersion);
    CHECK(payload["manifest"]["seed"] == 11);
    REQUIRE(payload["experiments"].size() == 2);
    CHECK(payload["experiments"][0]["config"]["k"] == 2);
    CHECK(payload["experiments"][0]["config"]["m"] == 4);
    CHECK(payload["experiments"][1]["config"]["k"] == 3);
    CHECK(payload["experiments"][1]["config"]["m"] == 27);
    CHECK(payload["experiments"][0]["config"]["scheme"]["c"] == 1.0);
    CHECK(payload["experiments"][0].contains("histogram"));
    CHECK(payload["experiments"][0]["histogram"]["counts"].size() == 6);

    // Report must reproduce the same numbers with no drift.
    ReportOptions report_options{.in_dir = (dir / "run").string(),
                                 .out_file = (dir / "combined.csv").string()};
    std::ostringstream report_out;
    CHECK(run_report(report_options, report_out) == 0);

    const auto original = read_summary_csv(csv_path);
    const auto combined = read_summary_csv(dir / "combined.csv");
    REQUIRE(original.size() == combined.size());
    for (std::size_t j = 0; j < original.size(); ++j) {
        bool found = false;
        for (const auto& row : combined) {
            if (row.n == original[j].n && row.p == original[j].p) {
                CHECK(row.mean == original[j].mean);
                CHECK(row.theory == original[j].theory);
                CHECK(row.std_error == original[j].std_error);
                found = true;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("report refuses empty input") {
    const auto dir = fresh_dir("empty");
    ReportOptions options{.in_dir = dir.string(), .out_file = (dir / "out.csv").string()};
    std::ostringstream out;
    CHECK_THROWS_AS(run_report(options, out), DomainError);
    CHECK_THROWS_AS(run_report({.in_dir = (dir / "nope").string(), .out_file = "x.csv"}, out),
                    DomainError);
}

TEST_CASE("binary exit codes") {
    CHECK(run_binary("verify --p-max 3") == 0);
    CHECK(run_binary("verify --p-max 8") == 3);       // resource cap
    CHECK(run_binary("--bogus-flag") == 2);           // usage
    CHECK(run_binary("oracle --n 2 --k 1 --m 2 --p 1 --dist nosuch") == 2);
    CHECK(run_binary("moments --p-max 13") == 3);     // order bound
    CHECK(run_binary("--version") == 0);

    const auto dir = fresh_dir("binary");
    const std::string out_dir = (dir / "out").string();
    CHECK(run_binary("simulate --n 2 --k 2 --m 3 --dist phase --replicas 20 --seed 5 --out " +
                     out_dir) == 0);
    CHECK(run_binary("report --in " + out_dir + " --out " + (dir / "joined.csv").string()) ==
          0);
    CHECK(fs::exists(dir / "joined.csv"));
    CHECK(run_binary("report --in " + (dir / "missing").string() + " --out x.csv") == 2);
}

TEST_CASE("binary reads a sectioned config file; flags win") {
    const auto dir = fresh_dir("config");
    std::ofstream ini(dir / "campaign.ini");
    ini << "[simulate]\n"
           "n = 2\n"
           "p-max = 2\n"
           "dist = \"phase\"\n"
           "replicas = 30\n"
           "seed = 42\n"
           "scheme-c = 1.0\n"
           "scheme-d = 1.0\n";
    ini.close();

    const std::string base = "simulate --config " + (dir / "campaign.ini").string();
    CHECK(run_binary(base + " --out " + (dir / "a").string()) == 0);
    const auto rows = read_summary_csv(dir / "a" / "summary.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].k == 2);  // scheme applied: k = round(d*n) = 2
    CHECK(rows[0].m == 4);

    // A flag overrides the file's seed; different stream, same shape.
    CHECK(run_binary(base + " --seed 43 --out " + (dir / "b").string()) == 0);
    const auto rows_b = read_summary_csv(dir / "b" / "summary.csv");
    REQUIRE(rows_b.size() == 2);
    CHECK(rows_b[1].mean != rows[1].mean);
}
