#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qpolar/report.hpp"
#include "qpolar/types.hpp"

namespace {

void add_common_flags(CLI::App* cmd, qpolar::CommandOptions& options,
                      std::string& input, std::string& example,
                      std::string& directions) {
    cmd->add_option("--input", input, "path to a symbol document (JSON)");
    cmd->add_option("--example", example,
                    "built-in example, e.g. harmonic:1, kfp:1, kolmogorov, ou");
    cmd->add_option("--rank-tol", options.rank_tol,
                    "relative rank tolerance for kernel detection");
    cmd->add_option("--res-tol", options.res_tol,
                    "pass/fail threshold on residuals");
    cmd->add_option("--seed", options.seed, "seed echoed into the report");
    cmd->add_option("--format", options.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--directions", directions,
                    "path to a JSON file with a 'directions' array");
}

void finalize_options(qpolar::CommandOptions& options, const std::string& input,
                      const std::string& example, const std::string& directions,
                      double t, bool has_t, const std::string& grid) {
    if (!input.empty()) options.input_path = input;
    if (!example.empty()) options.example = example;
    if (!directions.empty()) options.directions_path = directions;
    if (has_t) options.t = t;
    if (!grid.empty()) options.t_grid = grid;
}

int emit(const qpolar::CommandResult& result, const std::string& format,
         const std::string& command) {
    if (format == "csv") {
        if (result.csv.empty())
            throw qpolar::InputError("--format csv is only available for certify");
        std::fputs(result.csv.c_str(), stdout);
    } else {
        std::fputs(qpolar::dump_json17(result.report).c_str(), stdout);
        std::fputc('\n', stdout);
    }
    (void)command;
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polar decomposition and smoothing certification of "
                 "quadratic contraction semigroups"};
    app.require_subcommand(1);

    qpolar::CommandOptions options;
    std::string input, example, directions, grid;
    double t = 0.0;
    bool has_t = false;

    auto* analyze = app.add_subcommand(
        "analyze", "singular space, k0, stratification and direction indices");
    add_common_flags(analyze, options, input, example, directions);

    auto* decompose = app.add_subcommand(
        "decompose", "polar factors, residuals and the Mehler symbol");
    add_common_flags(decompose, options, input, example, directions);
    auto* t_opt = decompose->add_option("--t", t, "single evaluation time");
    decompose->add_option("--t-grid", grid, "time grid start:stop:N[log|lin]");

    auto* certify = app.add_subcommand(
        "certify", "lower-bound constants c(t), coercivity and direction fits");
    add_common_flags(certify, options, input, example, directions);
    certify->add_option("--t-grid", grid,
                        "time grid start:stop:N[log|lin], default "
                        "1e-3:1e-1:12log");

    auto* report = app.add_subcommand(
        "report", "smoothing-exponent predictions and subelliptic table");
    add_common_flags(report, options, input, example, directions);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    has_t = t_opt->count() > 0;
    finalize_options(options, input, example, directions, t, has_t, grid);

    try {
        if (analyze->parsed())
            return emit(qpolar::cmd_analyze(options), options.format, "analyze");
        if (decompose->parsed())
            return emit(qpolar::cmd_decompose(options), options.format,
                        "decompose");
        if (certify->parsed())
            return emit(qpolar::cmd_certify(options), options.format,
                        "certify");
        return emit(qpolar::cmd_report(options), options.format, "report");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
