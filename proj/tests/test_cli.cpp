// Tests for the command-line front end, driven in-process: table contents
// against the library, CSV/JSON schemas, run manifests, byte-exact
// reproducibility (stochastic commands included), file output, and the
// exit-code contract.

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "airyspec/cli.hpp"

namespace {

using nlohmann::ordered_json;

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = airyspec::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> cells;
    std::string cell;
    for (const char c : line) {
        if (c == sep) {
            cells.push_back(cell);
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

// Parse simple CSV (no quoted cells) into header + rows.
struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream stream(text);
    std::string line;
    REQUIRE(std::getline(stream, line));
    csv.header = split(line, ',');
    while (std::getline(stream, line))
        if (!line.empty()) csv.rows.push_back(split(line, ','));
    return csv;
}

std::string read_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    REQUIRE(stream);
    std::ostringstream content;
    content << stream.rdbuf();
    return content.str();
}

TEST_CASE("eigenvalues reproduces the reference table") {
    const RunResult result = run_cli({"eigenvalues", "--count", "6"});
    REQUIRE(result.exit_code == 0);
    const Csv csv = parse_csv(result.out);
    REQUIRE(csv.header ==
            std::vector<std::string>{"n", "parity", "lambda", "asymptotic",
                                     "bound_check"});
    REQUIRE(csv.rows.size() == 6);

    constexpr double kReference[6] = {1.01879297164747, 2.33810741045976,
                                      3.24819758217983, 4.08794944413097,
                                      4.82009921117874, 5.52055982809555};
    const char* kParity[6] = {"even", "odd", "even", "odd", "even", "odd"};
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(csv.rows[i][0] == std::to_string(i + 1));
        CHECK(csv.rows[i][1] == kParity[i]);
        // printed lambda agrees with the reference to 12 digits
        CHECK(std::fabs(std::stod(csv.rows[i][2]) - kReference[i]) <=
              5e-12 * kReference[i]);
        CHECK(csv.rows[i][4] == "pass");
    }

    // manifest goes to stderr when CSV streams to stdout
    const ordered_json manifest = ordered_json::parse(result.err);
    CHECK(manifest["command"] == "eigenvalues");
    CHECK(manifest["parameters"]["count"] == 6);
    CHECK(manifest["versions"].contains("config_hash"));
}

TEST_CASE("eigenvalues scales to a monotone, bound-checked table") {
    const RunResult result =
        run_cli({"eigenvalues", "--count", "200", "--format", "json"});
    REQUIRE(result.exit_code == 0);
    const ordered_json doc = ordered_json::parse(result.out);
    REQUIRE(doc["rows"].size() == 200);
    double prev = 0.0;
    for (const auto& row : doc["rows"]) {
        const double lambda = row["lambda"].get<double>();
        CHECK(lambda > prev);
        prev = lambda;
        CHECK(row["bound_check"] == "pass");
    }
    // single-row variant
    const RunResult one = run_cli({"eigenvalues", "--count", "1"});
    CHECK(parse_csv(one.out).rows.size() == 1);
}

TEST_CASE("eigenfunction export carries parity and the tail column") {
    const RunResult result =
        run_cli({"eigenfunction", "--n", "2", "--x-min", "-5", "--x-max", "5",
                 "--points", "41"});
    REQUIRE(result.exit_code == 0);
    const Csv csv = parse_csv(result.out);
    REQUIRE(csv.header ==
            std::vector<std::string>{"x", "phi", "tail_order3"});
    REQUIRE(csv.rows.size() == 41);

    // odd function: exact zero at the origin, anti-symmetric grid
    CHECK(csv.rows[20][0] == "0");
    CHECK(csv.rows[20][1] == "0");
    for (std::size_t i = 0; i < 41; ++i) {
        const double x = std::stod(csv.rows[i][0]);
        const double phi = std::stod(csv.rows[i][1]);
        const double phi_mirror = std::stod(csv.rows[40 - i][1]);
        CHECK(x == Catch::Approx(-std::stod(csv.rows[40 - i][0])));
        CHECK(phi == -phi_mirror);
        CHECK(csv.rows[i][2] == "nan");  // inside the crossover
    }

    // beyond the crossover the tail expansion converges onto the values
    const RunResult far =
        run_cli({"eigenfunction", "--n", "1", "--x-min", "35", "--x-max",
                 "80", "--points", "4", "--format", "json"});
    REQUIRE(far.exit_code == 0);
    const ordered_json doc = ordered_json::parse(far.out);
    double prev_gap = 1.0;
    for (const auto& row : doc["rows"]) {
        const double phi = row["phi"].get<double>();
        REQUIRE(row["tail_order3"].is_number());
        const double gap =
            std::fabs(row["tail_order3"].get<double>() - phi) / std::fabs(phi);
        CHECK(gap < prev_gap);  // relative gap shrinks with x
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-6);
}

TEST_CASE("trace table approaches the short-time limit") {
    const RunResult result = run_cli(
        {"trace", "--t-values", "0.01,0.1,1.0", "--format", "json"});
    REQUIRE(result.exit_code == 0);
    const ordered_json doc = ordered_json::parse(result.out);
    REQUIRE(doc["rows"].size() == 3);
    const double limit = 1.0 / std::sqrt(M_PI);
    const auto& first = doc["rows"][0];
    CHECK(first["t"] == 0.01);
    CHECK(std::fabs(first["scaled_trace"].get<double>() - limit) <=
          0.02 * limit);
    // trace decreases in t
    CHECK(doc["rows"][0]["trace"].get<double>() >
          doc["rows"][1]["trace"].get<double>());
    CHECK(doc["rows"][1]["trace"].get<double>() >
          doc["rows"][2]["trace"].get<double>());
}

TEST_CASE("heatkernel grid is symmetric, positive, and inside the band") {
    const RunResult result =
        run_cli({"heatkernel", "--t", "1.2", "--x-min", "-2", "--x-max", "2",
                 "--points", "5", "--format", "json"});
    REQUIRE(result.exit_code == 0);
    const ordered_json doc = ordered_json::parse(result.out);
    const auto& rows = doc["rows"];
    REQUIRE(rows.size() == 25);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            const auto& rij = rows[5 * i + j];
            const auto& rji = rows[5 * j + i];
            CHECK(rij["u"] == rji["u"]);  // exact symmetry survives printing
            CHECK(rij["u"].get<double>() > 0.0);
            const double ratio = rij["ratio"].get<double>();
            CHECK(ratio >= 1.0 / 6.0);
            CHECK(ratio <= 6.0);
        }
    }
}

TEST_CASE("verify-mc reports a z-score within tolerance and reruns identically") {
    const std::vector<std::string> args = {
        "verify-mc", "--paths", "20000", "--steps",  "200",
        "--seed",    "777",     "--t",   "1.0",      "--format", "json"};
    const RunResult first = run_cli(args);
    REQUIRE(first.exit_code == 0);
    const ordered_json doc = ordered_json::parse(first.out);
    REQUIRE(doc["rows"].size() == 1);
    const auto& row = doc["rows"][0];
    CHECK(row["sampler"] == "direct");
    CHECK(std::fabs(row["z_score"].get<double>()) <= 3.0);
    CHECK(row["std_error"].get<double>() > 0.0);
    CHECK(doc["manifest"]["seed"] == 777);

    // stochastic command, byte-identical rerun
    const RunResult second = run_cli(args);
    CHECK(second.out == first.out);
    CHECK(second.err == first.err);

    // a different seed moves the estimate
    const RunResult reseeded =
        run_cli({"verify-mc", "--paths", "20000", "--steps", "200", "--seed",
                 "778", "--t", "1.0", "--format", "json"});
    CHECK(ordered_json::parse(reseeded.out)["rows"][0]["estimate"] !=
          row["estimate"]);

    // subordinated sampler agrees with the spectral value too
    const RunResult subordinated =
        run_cli({"verify-mc", "--paths", "20000", "--steps", "200", "--seed",
                 "777", "--sampler", "subordinated", "--format", "json"});
    REQUIRE(subordinated.exit_code == 0);
    const ordered_json sub_doc = ordered_json::parse(subordinated.out);
    CHECK(sub_doc["rows"][0]["sampler"] == "subordinated");
    CHECK(std::fabs(sub_doc["rows"][0]["z_score"].get<double>()) <= 3.0);
}

TEST_CASE("outputs can be written to files with a manifest alongside") {
    const std::string csv_path = "cli_test_output.csv";
    const std::string json_path = "cli_test_output.json";
    const RunResult to_csv = run_cli(
        {"eigenvalues", "--count", "3", "--out", csv_path});
    REQUIRE(to_csv.exit_code == 0);
    CHECK(to_csv.out.empty());
    CHECK(to_csv.err.empty());  // manifest goes to the sidecar, not stderr

    const std::string csv_content = read_file(csv_path);
    const RunResult to_stdout = run_cli({"eigenvalues", "--count", "3"});
    CHECK(csv_content == to_stdout.out);
    const ordered_json sidecar =
        ordered_json::parse(read_file(csv_path + ".manifest.json"));
    CHECK(sidecar == ordered_json::parse(to_stdout.err));
    CHECK(sidecar["parameters"]["format"] == "csv");

    const RunResult to_json = run_cli(
        {"eigenvalues", "--count", "3", "--format", "json", "--out", json_path});
    REQUIRE(to_json.exit_code == 0);
    const ordered_json doc = ordered_json::parse(read_file(json_path));
    CHECK(doc["rows"].size() == 3);
    CHECK(doc["manifest"]["command"] == "eigenvalues");

    std::remove(csv_path.c_str());
    std::remove((csv_path + ".manifest.json").c_str());
    std::remove(json_path.c_str());
}

TEST_CASE("csv uses 17 significant digits and LF endings") {
    const RunResult result = run_cli({"eigenvalues", "--count", "1"});
    REQUIRE(result.exit_code == 0);
    CHECK(result.out.find('\r') == std::string::npos);
    const Csv csv = parse_csv(result.out);
    // printed value round-trips to the double exactly
    const double lambda = airyspec::eigenvalue(1).value;
    CHECK(std::stod(csv.rows[0][2]) == lambda);
    // and carries enough digits to do so
    CHECK(csv.rows[0][2].size() >= 17);
}

TEST_CASE("exit codes follow the contract") {
    CHECK(run_cli({"no-such-command"}).exit_code == 2);
    CHECK(run_cli({"eigenvalues", "--count", "0"}).exit_code == 2);
    CHECK(run_cli({"eigenvalues", "--bogus-flag"}).exit_code == 2);
    CHECK(run_cli({"eigenfunction"}).exit_code == 2);  // --n is required
    CHECK(run_cli({"eigenfunction", "--n", "1", "--x-min", "2", "--x-max",
                   "-2"})
              .exit_code == 2);
    CHECK(run_cli({"trace", "--t-values", "-0.5"}).exit_code == 2);
    CHECK(run_cli({"heatkernel", "--t", "0.3"}).exit_code == 2);
    CHECK(run_cli({"verify-mc", "--t", "0.2"}).exit_code == 2);
    CHECK(run_cli({"--help"}).exit_code == 0);
    CHECK(run_cli({"--version"}).exit_code == 0);
    CHECK(run_cli({"--version"}).out.find("airyspec") !=
          std::string::npos);
}

}  // namespace
