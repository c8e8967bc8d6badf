// pronyfit: design IIR filters from impulse- or frequency-response samples
// and identify sum-of-exponential signal parameters.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "prony/cli.hpp"

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw prony::InvalidInputError("cannot read input file '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

int write_output(const prony::cli::RunConfig& cfg, const prony::cli::RunResult& result) {
    if (!result.diagnostics.empty()) std::cerr << result.diagnostics;
    if (cfg.output_path.empty() || cfg.output_path == "-") {
        std::cout << result.output;
        return result.exit_status;
    }
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write output file '" << cfg.output_path << "'\n";
        return 2;
    }
    out << result.output;
    return result.exit_status;
}

void add_common_options(CLI::App* cmd, prony::cli::RunConfig& cfg, std::string& mode,
                        std::string& format) {
    cmd->add_option("input", cfg.input_path, "Input file ('-' for stdin)")->required();
    cmd->add_option("--output", cfg.output_path, "Output file (default: stdout)");
    cmd->add_option("--format", format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--mode", mode, "Design mode: interp or ls")
        ->check(CLI::IsMember({"interp", "ls"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prony / Pade / linear-prediction IIR filter design and "
                 "exponential parameter identification"};
    app.require_subcommand(1);

    prony::cli::RunConfig cfg;
    std::string mode = "ls";
    std::string format = "json";
    double group_delay = 0.0;

    auto* design_time = app.add_subcommand(
        "design-time", "Design (b, a) from desired impulse-response samples");
    design_time->add_option("--order-num", cfg.num_order, "Numerator degree M")->required();
    design_time->add_option("--order-den", cfg.den_order, "Denominator degree N")->required();
    add_common_options(design_time, cfg, mode, format);

    auto* design_freq = app.add_subcommand(
        "design-freq", "Design (b, a) from equally spaced frequency-response samples");
    design_freq->add_option("--order-num", cfg.num_order, "Numerator degree M")->required();
    design_freq->add_option("--order-den", cfg.den_order, "Denominator degree N")->required();
    auto* tau = design_freq->add_option(
        "--group-delay", group_delay,
        "Linear-phase group delay in samples for magnitude shorthand specs "
        "(default (M+N)/2)");
    add_common_options(design_freq, cfg, mode, format);

    auto* design_zeros = app.add_subcommand(
        "design-zeros", "Design the numerator for a fixed denominator, minimizing the "
                        "impulse-response error");
    design_zeros->add_option("--order-num", cfg.num_order, "Numerator degree M")->required();
    add_common_options(design_zeros, cfg, mode, format);

    auto* identify = app.add_subcommand(
        "identify", "Fit a sum of N exponentials to uniform samples");
    identify->add_option("--order-den", cfg.den_order, "Number of exponential modes N")
        ->required();
    identify->add_option("--period", cfg.period, "Sample period T (default 1)");
    add_common_options(identify, cfg, mode, format);

    auto* eval = app.add_subcommand(
        "eval", "Evaluate a filter's frequency response on a uniform grid");
    eval->add_option("--grid", cfg.eval_grid, "Number of grid points over [0, 2pi)");
    add_common_options(eval, cfg, mode, format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    cfg.mode = mode == "interp" ? prony::DesignMode::Interpolate : prony::DesignMode::LeastSquares;
    cfg.format = format == "csv" ? prony::cli::OutputFormat::Csv : prony::cli::OutputFormat::Json;
    if (tau->count() > 0) cfg.group_delay = group_delay;
    if (design_time->parsed()) cfg.command = prony::cli::Command::DesignTime;
    else if (design_freq->parsed()) cfg.command = prony::cli::Command::DesignFreq;
    else if (design_zeros->parsed()) cfg.command = prony::cli::Command::DesignZeros;
    else if (identify->parsed()) cfg.command = prony::cli::Command::Identify;
    else cfg.command = prony::cli::Command::Eval;

    std::string input;
    try {
        input = read_input(cfg.input_path);
    } catch (const prony::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    return write_output(cfg, prony::cli::run(cfg, input));
}
