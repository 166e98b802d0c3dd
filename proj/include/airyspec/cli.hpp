#pragma once
// Command-line front end: every computation exposed as a reproducible,
// scriptable subcommand with CSV/JSON export.
//
// Every output is accompanied by a run manifest (command, parameters, tool
// version, configuration hash, and the seed for stochastic commands).  In
// JSON format the manifest is embedded in the document; in CSV format it is
// written to a `<out>.manifest.json` sidecar (or to stderr when the table
// goes to stdout).  Outputs are deterministic functions of the manifest, so
// re-running a command reproduces its files byte for byte.
//
// Exit codes: 0 success, 1 property/acceptance failure, 2 usage error,
// 3 numerical-convergence failure.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "airyspec/acceptance.hpp"
#include "airyspec/eigenfunctions.hpp"
#include "airyspec/errors.hpp"
#include "airyspec/feynman_kac.hpp"
#include "airyspec/heat_kernel.hpp"
#include "airyspec/spectrum.hpp"

namespace airyspec::cli {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "airyspec";
inline constexpr const char* kToolVersion = "1.0.0";

namespace detail {

// Shortest representation that round-trips a double exactly.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// FNV-1a fingerprint of the canonical command + parameter serialization;
// identifies the exact configuration an output was produced with.
inline std::string config_hash(const std::string& canonical) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

inline std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string quoted = "\"";
    for (const char c : cell) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

inline std::string csv_cell(const ordered_json& cell) {
    if (cell.is_null()) return "nan";
    if (cell.is_string()) return csv_escape(cell.get<std::string>());
    if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
    if (cell.is_number_float()) return format_double(cell.get<double>());
    if (cell.is_number_unsigned())
        return std::to_string(cell.get<std::uint64_t>());
    return std::to_string(cell.get<std::int64_t>());
}

}  // namespace detail

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<ordered_json>> rows;
};

inline ordered_json make_manifest(const std::string& command,
                                  const ordered_json& parameters,
                                  const ordered_json& seed = nullptr) {
    ordered_json manifest;
    manifest["command"] = command;
    manifest["parameters"] = parameters;
    ordered_json versions;
    versions["tool"] = std::string(kToolName) + " " + kToolVersion;
    versions["config_hash"] = detail::config_hash(
        command + "|" + parameters.dump() + "|" + kToolVersion);
    manifest["versions"] = versions;
    if (!seed.is_null()) manifest["seed"] = seed;
    return manifest;
}

inline void write_csv(const Table& table, std::ostream& out) {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << detail::csv_escape(table.columns[c]);
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << detail::csv_cell(row[c]);
        out << '\n';
    }
}

inline ordered_json to_json_document(const Table& table,
                                     const ordered_json& manifest) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : table.rows) {
        ordered_json obj;
        for (std::size_t c = 0; c < row.size(); ++c)
            obj[table.columns[c]] = row[c];
        rows.push_back(std::move(obj));
    }
    ordered_json doc;
    doc["rows"] = std::move(rows);
    doc["manifest"] = manifest;
    return doc;
}

namespace detail {

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) throw std::runtime_error("cannot open output file " + path);
    stream << content;
    if (!stream) throw std::runtime_error("failed writing " + path);
}

}  // namespace detail

// Table + manifest to the requested destination.  CSV keeps the data stream
// clean by routing the manifest to a sidecar file (or stderr).
inline void emit(const Table& table, const ordered_json& manifest,
                 const std::string& format, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
    if (format == "json") {
        const std::string doc = to_json_document(table, manifest).dump(2) + "\n";
        if (out_path.empty())
            out << doc;
        else
            detail::write_file(out_path, doc);
        return;
    }
    std::ostringstream csv;
    write_csv(table, csv);
    const std::string manifest_doc = manifest.dump(2) + "\n";
    if (out_path.empty()) {
        out << csv.str();
        err << manifest_doc;
    } else {
        detail::write_file(out_path, csv.str());
        detail::write_file(out_path + ".manifest.json", manifest_doc);
    }
}

struct CommandOutcome {
    Table table;
    bool property_failure = false;
};

inline CommandOutcome cmd_eigenvalues(unsigned count) {
    if (count < 1)
        throw std::invalid_argument("eigenvalues: count must be >= 1");
    CommandOutcome outcome;
    outcome.table.columns = {"n", "parity", "lambda", "asymptotic",
                             "bound_check"};
    for (unsigned n = 1; n <= count; ++n) {
        const Eigenvalue ev = eigenvalue(n);
        const EigenvalueBounds bounds = eigenvalue_bounds(ev.k);
        const bool in_bounds =
            ev.parity == Parity::even_function
                ? ev.value <= bounds.upper_odd
                : bounds.lower_even <= ev.value && ev.value <= bounds.upper_even;
        outcome.table.rows.push_back(
            {n, ev.parity == Parity::even_function ? "even" : "odd", ev.value,
             eigenvalue_asymptotic(n), in_bounds ? "pass" : "fail"});
    }
    return outcome;
}

inline CommandOutcome cmd_eigenfunction(unsigned n, double x_min, double x_max,
                                        unsigned points) {
    if (points < 2)
        throw std::invalid_argument("eigenfunction: points must be >= 2");
    if (!(x_min < x_max))
        throw std::invalid_argument("eigenfunction: x-min must be < x-max");
    const auto f = eigenfunction(n);
    // The tail column is populated where the evaluator itself trusts the
    // asymptotic series.
    constexpr double kTailCrossover = 30.0;

    CommandOutcome outcome;
    outcome.table.columns = {"x", "phi", "tail_order3"};
    for (unsigned i = 0; i < points; ++i) {
        const double x =
            x_min + (x_max - x_min) * static_cast<double>(i) /
                        static_cast<double>(points - 1);
        ordered_json tail;  // null inside the crossover
        if (std::fabs(x) >= kTailCrossover) {
            double v = f->tail_expansion(std::fabs(x), 3);
            if (f->parity() == Parity::odd_function && x < 0.0) v = -v;
            tail = v;
        }
        outcome.table.rows.push_back({x, f->evaluate(x), std::move(tail)});
    }
    return outcome;
}

inline CommandOutcome cmd_trace(const std::vector<double>& t_values) {
    if (t_values.empty())
        throw std::invalid_argument("trace: at least one t value required");
    CommandOutcome outcome;
    outcome.table.columns = {"t", "trace", "scaled_trace"};
    for (const double t : t_values) {
        const double tr = trace(t);
        outcome.table.rows.push_back({t, tr, std::pow(t, 1.5) * tr});
    }
    return outcome;
}

inline CommandOutcome cmd_heatkernel(double t, double x_min, double x_max,
                                     unsigned points) {
    if (points < 2)
        throw std::invalid_argument("heatkernel: points must be >= 2");
    if (!(x_min < x_max))
        throw std::invalid_argument("heatkernel: x-min must be < x-max");
    const HeatKernel& kernel = shared_heat_kernel();
    const double scale = std::exp(kernel.lambda1() * t);

    CommandOutcome outcome;
    outcome.table.columns = {"x", "y", "u", "ratio"};
    std::vector<double> grid(points);
    for (unsigned i = 0; i < points; ++i)
        grid[i] = x_min + (x_max - x_min) * static_cast<double>(i) /
                              static_cast<double>(points - 1);
    for (const double x : grid) {
        for (const double y : grid) {
            const double u = kernel.value(t, x, y);
            const double ratio =
                u * (1.0 + x * x * x * x) * (1.0 + y * y * y * y) * scale;
            outcome.table.rows.push_back({x, y, u, ratio});
        }
    }
    return outcome;
}

inline CommandOutcome cmd_verify_mc(double x, const McConfig& config) {
    const McEstimate estimate = estimate_semigroup(x, config);
    const double spectral = spectral_prediction(x, config.t);
    const double z = (estimate.mean - spectral) / estimate.std_error;

    CommandOutcome outcome;
    outcome.table.columns = {"x",          "t",         "paths",
                             "steps",      "sampler",   "estimate",
                             "std_error",  "spectral",  "z_score"};
    outcome.table.rows.push_back(
        {x, config.t, config.n_paths, config.n_steps,
         config.sampler == Sampler::direct_cauchy ? "direct" : "subordinated",
         estimate.mean, estimate.std_error, spectral, z});
    outcome.property_failure = !(std::fabs(z) <= 3.0);
    return outcome;
}

inline CommandOutcome cmd_report() {
    CommandOutcome outcome;
    // Timings are deliberately excluded: report output is a bit-exact
    // function of the build.
    outcome.table.columns = {"id", "name", "passed", "detail"};
    for (const acceptance::CriterionResult& r : acceptance::run_all()) {
        outcome.table.rows.push_back({r.id, r.name, r.passed, r.detail});
        if (!r.passed) outcome.property_failure = true;
    }
    return outcome;
}

inline int run(std::vector<std::string> args, std::ostream& out,
               std::ostream& err) {
    CLI::App app{"Spectral data of the operator sqrt(-d^2/dx^2) + x^2: "
                 "eigenvalues, eigenfunctions, semigroup trace, heat kernel, "
                 "and a Feynman-Kac Monte Carlo check.  AIRYSPEC_THREADS "
                 "caps worker threads for path sampling.",
                 kToolName};
    app.set_version_flag("--version",
                         std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    std::string format = "csv", out_path;
    const auto add_output_flags = [&](CLI::App* sub) {
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        sub->add_option("--out", out_path,
                        "write to this file instead of stdout");
    };

    unsigned count = 6;
    CLI::App* sub_eigenvalues = app.add_subcommand(
        "eigenvalues", "Eigenvalue table with asymptotics and bound checks");
    sub_eigenvalues->add_option("--count", count, "number of eigenvalues")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_output_flags(sub_eigenvalues);

    unsigned fn_index = 1, fn_points = 201;
    double fn_x_min = -10.0, fn_x_max = 10.0;
    CLI::App* sub_eigenfunction = app.add_subcommand(
        "eigenfunction", "Eigenfunction values on a grid with the order-3 "
                         "tail expansion beyond the crossover");
    sub_eigenfunction->add_option("--n", fn_index, "eigenfunction index")
        ->required()
        ->check(CLI::PositiveNumber);
    sub_eigenfunction->add_option("--x-min", fn_x_min, "grid start")
        ->capture_default_str();
    sub_eigenfunction->add_option("--x-max", fn_x_max, "grid end")
        ->capture_default_str();
    sub_eigenfunction->add_option("--points", fn_points, "grid size")
        ->check(CLI::Range(2u, 1000000u))
        ->capture_default_str();
    add_output_flags(sub_eigenfunction);

    std::vector<double> t_values;
    CLI::App* sub_trace = app.add_subcommand(
        "trace", "Semigroup trace and its t^{3/2} scaling");
    sub_trace
        ->add_option("--t-values", t_values, "times, comma separated")
        ->delimiter(',')
        ->required();
    add_output_flags(sub_trace);

    double hk_t = 1.0, hk_x_min = -3.0, hk_x_max = 3.0;
    unsigned hk_points = 13;
    CLI::App* sub_heatkernel = app.add_subcommand(
        "heatkernel", "Heat kernel values and the two-sided bound ratio on "
                      "a square grid");
    sub_heatkernel->add_option("--t", hk_t, "time (>= 0.5)")
        ->capture_default_str();
    sub_heatkernel->add_option("--x-min", hk_x_min, "grid start")
        ->capture_default_str();
    sub_heatkernel->add_option("--x-max", hk_x_max, "grid end")
        ->capture_default_str();
    sub_heatkernel->add_option("--points", hk_points, "points per axis")
        ->check(CLI::Range(2u, 4096u))
        ->capture_default_str();
    add_output_flags(sub_heatkernel);

    double mc_x = 0.0;
    McConfig mc_config;
    mc_config.seed = 20260815;
    std::string mc_sampler = "direct";
    CLI::App* sub_verify_mc = app.add_subcommand(
        "verify-mc", "Monte Carlo Feynman-Kac estimate against the spectral "
                     "value (exit 1 if |z| > 3)");
    sub_verify_mc->add_option("--x", mc_x, "starting point")
        ->capture_default_str();
    sub_verify_mc->add_option("--t", mc_config.t, "time horizon (>= 0.5)")
        ->capture_default_str();
    sub_verify_mc->add_option("--paths", mc_config.n_paths, "sample paths")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub_verify_mc->add_option("--steps", mc_config.n_steps, "time steps")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub_verify_mc->add_option("--sampler", mc_sampler, "path sampler")
        ->check(CLI::IsMember({"direct", "subordinated"}))
        ->capture_default_str();
    sub_verify_mc->add_option("--seed", mc_config.seed, "random seed")
        ->capture_default_str();
    add_output_flags(sub_verify_mc);

    CLI::App* sub_report = app.add_subcommand(
        "report", "Run the acceptance suite (exit 1 on any failure)");
    add_output_flags(sub_report);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        CommandOutcome outcome;
        ordered_json parameters;
        std::string command;
        ordered_json seed = nullptr;

        if (sub_eigenvalues->parsed()) {
            command = "eigenvalues";
            outcome = cmd_eigenvalues(count);
            parameters["count"] = count;
        } else if (sub_eigenfunction->parsed()) {
            command = "eigenfunction";
            outcome = cmd_eigenfunction(fn_index, fn_x_min, fn_x_max, fn_points);
            parameters["n"] = fn_index;
            parameters["x_min"] = fn_x_min;
            parameters["x_max"] = fn_x_max;
            parameters["points"] = fn_points;
        } else if (sub_trace->parsed()) {
            command = "trace";
            outcome = cmd_trace(t_values);
            parameters["t_values"] = t_values;
        } else if (sub_heatkernel->parsed()) {
            command = "heatkernel";
            outcome = cmd_heatkernel(hk_t, hk_x_min, hk_x_max, hk_points);
            parameters["t"] = hk_t;
            parameters["x_min"] = hk_x_min;
            parameters["x_max"] = hk_x_max;
            parameters["points"] = hk_points;
        } else if (sub_verify_mc->parsed()) {
            command = "verify-mc";
            mc_config.sampler = mc_sampler == "direct"
                                    ? Sampler::direct_cauchy
                                    : Sampler::subordinated_bm;
            outcome = cmd_verify_mc(mc_x, mc_config);
            parameters["x"] = mc_x;
            parameters["t"] = mc_config.t;
            parameters["paths"] = mc_config.n_paths;
            parameters["steps"] = mc_config.n_steps;
            parameters["sampler"] = mc_sampler;
            seed = mc_config.seed;
        } else {
            command = "report";
            if (sub_report->count("--format") == 0) format = "json";
            outcome = cmd_report();
            seed = acceptance::kMonteCarloSeed;
        }
        parameters["format"] = format;

        emit(outcome.table, make_manifest(command, parameters, seed), format,
             out_path, out, err);
        return outcome.property_failure ? 1 : 0;
    } catch (const ConvergenceError& e) {
        err << "convergence error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

inline int run(int argc, char** argv) {
    return run(std::vector<std::string>(argv + 1, argv + argc), std::cout,
               std::cerr);
}

}  // namespace airyspec::cli
