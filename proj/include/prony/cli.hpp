#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "prony/errors.hpp"
#include "prony/filter.hpp"
#include "prony/freq_design.hpp"
#include "prony/ident.hpp"
#include "prony/linalg.hpp"
#include "prony/time_design.hpp"
#include "prony/zero_design.hpp"

namespace prony::cli {

enum class Command { DesignTime, DesignFreq, DesignZeros, Identify, Eval };
enum class OutputFormat { Json, Csv };

/// One CLI invocation. Paths are carried for the binary wrapper; run()
/// itself maps input bytes to output bytes so results are reproducible.
struct RunConfig {
    Command command = Command::DesignTime;
    std::string input_path;
    std::string output_path;
    std::size_t num_order = 0;
    std::size_t den_order = 0;
    DesignMode mode = DesignMode::LeastSquares;
    std::optional<double> group_delay; // design-freq shorthand; default (M+N)/2
    std::size_t eval_grid = 256;
    OutputFormat format = OutputFormat::Json;
    double period = 1.0; // identify
};

/// exit_status: 0 success, 2 invalid input, 3 design failure. diagnostics
/// carries warnings (stability, rank deficiency) for the stderr stream.
struct RunResult {
    int exit_status = 0;
    std::string output;
    std::string diagnostics;
};

namespace detail {

// ---------------------------------------------------------------------
// deterministic output formatting
// ---------------------------------------------------------------------

/// 17 significant digits: round-trip safe for IEEE doubles. Non-finite
/// values become JSON null.
inline std::string fmt(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Imaginary parts below 1e-10 are reported as exact zeros at this
/// boundary; the library itself never rounds.
inline double clamp_imag(double im) { return std::abs(im) < 1e-10 ? 0.0 : im; }

inline void write_complex(std::string& out, const Complex& z) {
    out += "{\"re\":";
    out += fmt(z.real());
    out += ",\"im\":";
    out += fmt(clamp_imag(z.imag()));
    out += "}";
}

inline void write_complex_array(std::string& out, const Vec& v) {
    out += "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        write_complex(out, v[i]);
    }
    out += "]";
}

inline void write_poles(std::string& out, const Vec& poles) {
    out += "[";
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (i) out += ",";
        out += "{\"re\":";
        out += fmt(poles[i].real());
        out += ",\"im\":";
        out += fmt(clamp_imag(poles[i].imag()));
        out += ",\"modulus\":";
        out += fmt(std::abs(poles[i]));
        out += "}";
    }
    out += "]";
}

inline std::string error_document(const char* type, const std::string& message) {
    nlohmann::json msg = message; // reuse the JSON string escaper
    std::string out = "{\"schema\":1,\"error\":{\"type\":\"";
    out += type;
    out += "\",\"message\":";
    out += msg.dump();
    out += "}}\n";
    return out;
}

struct ReportFields {
    DesignMode mode = DesignMode::Interpolate;
    double equation_error_norm = 0.0;
    std::optional<double> solution_error_norm;
    Vec poles;
    bool stable = true;
    double condition_estimate = 1.0;
};

inline void write_report(std::string& out, const ReportFields& r) {
    out += "\"report\":{\"mode\":\"";
    out += to_string(r.mode);
    out += "\",\"equation_error_norm\":";
    out += fmt(r.equation_error_norm);
    if (r.solution_error_norm) {
        out += ",\"solution_error_norm\":";
        out += fmt(*r.solution_error_norm);
    }
    out += ",\"poles\":";
    write_poles(out, r.poles);
    out += ",\"stable\":";
    out += r.stable ? "true" : "false";
    out += ",\"condition_estimate\":";
    out += fmt(r.condition_estimate);
    out += "}";
}

inline std::string filter_document(const char* command, const RationalFilter& f,
                                   const ReportFields& r) {
    std::string out = "{\"schema\":1,\"command\":\"";
    out += command;
    out += "\",\"filter\":{\"b\":";
    write_complex_array(out, f.b);
    out += ",\"a\":";
    write_complex_array(out, f.a);
    out += "},";
    write_report(out, r);
    out += "}\n";
    return out;
}

inline void write_csv_part(std::string& out, const char* part, const Vec& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += part;
        out += ",";
        out += std::to_string(i);
        out += ",";
        out += fmt(v[i].real());
        out += ",";
        out += fmt(clamp_imag(v[i].imag()));
        out += "\n";
    }
}

inline std::string filter_csv(const RationalFilter& f, const Vec& poles) {
    std::string out = "part,index,re,im\n";
    write_csv_part(out, "b", f.b);
    write_csv_part(out, "a", f.a);
    write_csv_part(out, "pole", poles);
    return out;
}

// ---------------------------------------------------------------------
// input parsing
// ---------------------------------------------------------------------

inline bool looks_like_json(std::string_view input) {
    for (char c : input) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{' || c == '[';
    }
    return false;
}

inline double parse_double_field(std::string_view field, std::size_t line, const char* name) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw InvalidInputError("csv line " + std::to_string(line) + ": field '" +
                                std::string(name) + "' is not a number: '" + std::string(field) +
                                "'");
    return value;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        std::string_view f = comma == std::string_view::npos ? line.substr(start)
                                                             : line.substr(start, comma - start);
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r'))
            f.remove_suffix(1);
        fields.push_back(f);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

inline bool equals_lower(std::string_view s, std::string_view lower) {
    if (s.size() != lower.size()) return false;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(s[i])) != lower[i]) return false;
    return true;
}

/// CSV sample file: header "n,value" (real) or "k,re,im" (complex), indices
/// ascending from zero.
inline Vec parse_csv_samples(std::string_view input) {
    Vec samples;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool header_seen = false;
    bool complex_columns = false;
    while (pos <= input.size()) {
        std::size_t nl = input.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? input.substr(pos) : input.substr(pos, nl - pos);
        pos = nl == std::string_view::npos ? input.size() + 1 : nl + 1;
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_fields(line);
        if (!header_seen) {
            bool index_ok = equals_lower(fields[0], "n") || equals_lower(fields[0], "k");
            if (index_ok && fields.size() == 2 && equals_lower(fields[1], "value"))
                complex_columns = false;
            else if (index_ok && fields.size() == 3 && equals_lower(fields[1], "re") &&
                     equals_lower(fields[2], "im"))
                complex_columns = true;
            else
                throw InvalidInputError("csv line " + std::to_string(line_no) +
                                        ": expected header 'n,value' or 'k,re,im'");
            header_seen = true;
            continue;
        }
        const std::size_t expected = complex_columns ? 3 : 2;
        if (fields.size() != expected)
            throw InvalidInputError("csv line " + std::to_string(line_no) + ": expected " +
                                    std::to_string(expected) + " fields, got " +
                                    std::to_string(fields.size()));
        double index = parse_double_field(fields[0], line_no, "index");
        if (index != static_cast<double>(samples.size()))
            throw InvalidInputError("csv line " + std::to_string(line_no) + ": sample index " +
                                    std::string(fields[0]) + " out of order (expected " +
                                    std::to_string(samples.size()) + ")");
        if (complex_columns)
            samples.emplace_back(parse_double_field(fields[1], line_no, "re"),
                                 parse_double_field(fields[2], line_no, "im"));
        else
            samples.emplace_back(parse_double_field(fields[1], line_no, "value"), 0.0);
    }
    if (!header_seen) throw InvalidInputError("csv: empty input");
    if (samples.empty()) throw InvalidInputError("csv: no sample rows");
    return samples;
}

inline Complex parse_complex_json(const nlohmann::json& j, const char* context) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_object()) {
        if (!j.contains("re") || !j.contains("im") || !j["re"].is_number() || !j["im"].is_number())
            throw InvalidInputError(std::string(context) +
                                    ": complex values need numeric \"re\" and \"im\" fields");
        return Complex(j["re"].get<double>(), j["im"].get<double>());
    }
    throw InvalidInputError(std::string(context) + ": expected a number or {\"re\",\"im\"} object");
}

inline Vec parse_complex_array(const nlohmann::json& j, const char* context) {
    if (!j.is_array() || j.empty())
        throw InvalidInputError(std::string(context) + ": expected a non-empty array");
    Vec v;
    v.reserve(j.size());
    for (const auto& item : j) v.push_back(parse_complex_json(item, context));
    return v;
}

inline nlohmann::json parse_json(std::string_view input) {
    try {
        return nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInputError(std::string("json parse: ") + e.what());
    }
}

/// Sample vector from either input format.
inline Vec parse_samples(std::string_view input) {
    if (!looks_like_json(input)) return parse_csv_samples(input);
    nlohmann::json doc = parse_json(input);
    if (!doc.is_object() || !doc.contains("samples"))
        throw InvalidInputError("json input: expected an object with a \"samples\" array");
    return parse_complex_array(doc["samples"], "samples");
}

// ---------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------

inline void append_design_warnings(const std::vector<double>& moduli, bool stable,
                                   double condition_estimate, std::string& diagnostics) {
    if (!stable)
        diagnostics += "warning: designed filter is unstable (largest pole modulus " +
                       fmt(moduli.empty() ? 0.0 : *std::max_element(moduli.begin(), moduli.end())) +
                       ")\n";
    if (!(condition_estimate < 1e12))
        diagnostics += "warning: design system is nearly singular (condition estimate " +
                       fmt(condition_estimate) + "); minimum-norm solution reported\n";
}

inline RunResult design_time_command(const RunConfig& cfg, std::string_view input) {
    TimeDesignProblem problem{parse_samples(input), cfg.num_order, cfg.den_order};
    TimeDesignResult res = design_time(problem, cfg.mode);

    Vec h = impulse_response(res.filter, problem.desired.size());
    Vec diff(problem.desired.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = problem.desired[i] - h[i];

    ReportFields report;
    report.mode = cfg.mode;
    report.equation_error_norm = norm2(res.report.equation_error);
    report.solution_error_norm = norm2(diff);
    report.poles = pole_locations(res.filter);
    report.stable = res.report.stable;
    report.condition_estimate = res.report.condition_estimate;

    RunResult out;
    append_design_warnings(res.report.pole_moduli, report.stable, report.condition_estimate,
                           out.diagnostics);
    out.output = cfg.format == OutputFormat::Json
                     ? filter_document("design-time", res.filter, report)
                     : filter_csv(res.filter, report.poles);
    return out;
}

inline FrequencySpec parse_frequency_spec(const RunConfig& cfg, std::string_view input) {
    FrequencySpec spec;
    spec.num_order = cfg.num_order;
    spec.den_order = cfg.den_order;
    if (!looks_like_json(input)) {
        spec.samples = parse_csv_samples(input);
    } else {
        nlohmann::json doc = parse_json(input);
        if (!doc.is_object())
            throw InvalidInputError("frequency spec: expected a JSON object");
        if (doc.contains("samples")) {
            spec.samples = parse_complex_array(doc["samples"], "samples");
        } else if (doc.contains("count")) {
            if (!doc["count"].is_number_unsigned() || doc["count"].get<std::size_t>() < 1)
                throw InvalidInputError("frequency spec: \"count\" must be a positive integer");
            if (!doc.contains("band_edge") || !doc["band_edge"].is_number())
                throw InvalidInputError("frequency spec: shorthand needs a \"band_edge\" field");
            double edge = doc["band_edge"].get<double>();
            if (!(edge >= 0.0 && edge <= 0.5))
                throw InvalidInputError("frequency spec: band_edge must lie in [0, 0.5] "
                                        "(fraction of the sampling rate)");
            double pass = doc.value("pass_magnitude", 1.0);
            double stop = doc.value("stop_magnitude", 0.0);
            double tau = cfg.group_delay.value_or(
                static_cast<double>(cfg.num_order + cfg.den_order) / 2.0);
            spec.samples = linear_phase_samples(
                lowpass_magnitudes(doc["count"].get<std::size_t>(), edge, pass, stop), tau);
            spec.enforce_real = true;
            return spec;
        } else {
            throw InvalidInputError(
                "frequency spec: expected \"samples\" or a magnitude shorthand with \"count\"");
        }
    }
    // Explicit samples: design real whenever the data is conjugate-symmetric.
    double scale = std::max(1.0, norm_inf(spec.samples));
    spec.enforce_real = conjugate_symmetry_defect(spec.samples).first <= 1e-9 * scale;
    return spec;
}

inline RunResult design_freq_command(const RunConfig& cfg, std::string_view input) {
    FrequencySpec spec = parse_frequency_spec(cfg, input);
    FreqDesignResult res = design_freq(spec, cfg.mode);

    ReportFields report;
    report.mode = cfg.mode;
    report.equation_error_norm = norm2(res.report.equation_error);
    report.solution_error_norm = norm2(res.report.response_error);
    report.poles = pole_locations(res.filter);
    report.stable = res.report.stable;
    report.condition_estimate = res.report.condition_estimate;

    RunResult out;
    append_design_warnings(res.report.pole_moduli, report.stable, report.condition_estimate,
                           out.diagnostics);
    out.output = cfg.format == OutputFormat::Json
                     ? filter_document("design-freq", res.filter, report)
                     : filter_csv(res.filter, report.poles);
    return out;
}

inline RunResult design_zeros_command(const RunConfig& cfg, std::string_view input) {
    if (!looks_like_json(input))
        throw InvalidInputError("design-zeros: input must be a JSON object with \"a\" and "
                                "\"samples\" arrays");
    nlohmann::json doc = parse_json(input);
    if (!doc.is_object() || !doc.contains("a") || !doc.contains("samples"))
        throw InvalidInputError("design-zeros: input must contain \"a\" and \"samples\" arrays");

    Vec a = parse_complex_array(doc["a"], "a");
    const Complex lead = a[0];
    if (lead == Complex(0.0))
        throw InvalidInputError("design-zeros: leading denominator coefficient must be nonzero");
    if (lead != Complex(1.0))
        for (Complex& z : a) z /= lead;
    a[0] = 1.0;

    ZeroDesignProblem problem{a, parse_complex_array(doc["samples"], "samples"), cfg.num_order};
    ZeroDesignResult res = design_zeros(problem);

    RationalFilter filter{res.b, a};
    const std::size_t count = problem.desired.size();
    Vec padded(count, Complex(0.0));
    for (std::size_t i = 0; i < res.b.size(); ++i) padded[i] = res.b[i];
    Vec conv = matvec(convolution_matrix(a, count), problem.desired);
    for (std::size_t i = 0; i < count; ++i) padded[i] -= conv[i];

    ReportFields report;
    report.mode = DesignMode::LeastSquares;
    report.equation_error_norm = norm2(padded);
    report.solution_error_norm = res.error_norm;
    report.poles = pole_locations(filter);
    report.stable = is_stable(pole_moduli(report.poles));
    report.condition_estimate = res.condition_estimate;

    RunResult out;
    append_design_warnings(pole_moduli(report.poles), report.stable, report.condition_estimate,
                           out.diagnostics);
    out.output = cfg.format == OutputFormat::Json
                     ? filter_document("design-zeros", filter, report)
                     : filter_csv(filter, report.poles);
    return out;
}

inline RunResult identify_command(const RunConfig& cfg, std::string_view input) {
    if (cfg.den_order < 1)
        throw InvalidInputError("identify: model order (--order-den) must be at least 1");
    SampledSignal signal{parse_samples(input), cfg.period};
    IdentifyResult res = identify_detailed(signal, cfg.den_order);

    RunResult out;
    if (cfg.format == OutputFormat::Json) {
        std::string& s = out.output;
        s = "{\"schema\":1,\"command\":\"identify\",\"modes\":[";
        for (std::size_t k = 0; k < res.model.modes.size(); ++k) {
            if (k) s += ",";
            s += "{\"K\":";
            write_complex(s, res.model.modes[k].amplitude);
            s += ",\"alpha\":";
            write_complex(s, res.model.modes[k].exponent);
            s += ",\"lambda\":";
            write_complex(s, res.model.ratio(k));
            s += "}";
        }
        s += "],\"report\":{\"residual_norm\":";
        s += fmt(res.residual_norm);
        s += ",\"condition_estimate\":";
        s += fmt(res.condition_estimate);
        s += "}}\n";
    } else {
        std::string& s = out.output;
        s = "part,index,re,im\n";
        Vec amplitudes, exponents, ratios;
        for (std::size_t k = 0; k < res.model.modes.size(); ++k) {
            amplitudes.push_back(res.model.modes[k].amplitude);
            exponents.push_back(res.model.modes[k].exponent);
            ratios.push_back(res.model.ratio(k));
        }
        write_csv_part(s, "K", amplitudes);
        write_csv_part(s, "alpha", exponents);
        write_csv_part(s, "lambda", ratios);
    }
    return out;
}

inline RunResult eval_command(const RunConfig& cfg, std::string_view input) {
    if (cfg.eval_grid < 2) throw InvalidInputError("eval: grid must have at least 2 points");
    if (!looks_like_json(input))
        throw InvalidInputError("eval: input must be a JSON filter document");
    nlohmann::json doc = parse_json(input);
    if (!doc.is_object() || !doc.contains("filter") || !doc["filter"].is_object())
        throw InvalidInputError("eval: input must contain a \"filter\" object");
    const nlohmann::json& jf = doc["filter"];
    if (!jf.contains("b") || !jf.contains("a"))
        throw InvalidInputError("eval: filter needs \"b\" and \"a\" arrays");

    RationalFilter f{parse_complex_array(jf["b"], "filter.b"),
                     parse_complex_array(jf["a"], "filter.a")};
    const Complex lead = f.a[0];
    if (lead == Complex(0.0))
        throw InvalidInputError("eval: leading denominator coefficient must be nonzero");
    if (lead != Complex(1.0)) {
        for (Complex& z : f.b) z /= lead;
        for (Complex& z : f.a) z /= lead;
    }
    f.a[0] = 1.0;

    std::vector<double> omegas(cfg.eval_grid);
    for (std::size_t i = 0; i < cfg.eval_grid; ++i)
        omegas[i] = prony::detail::kTau * static_cast<double>(i) / static_cast<double>(cfg.eval_grid);
    Vec response = frequency_response(f, omegas);

    RunResult out;
    if (cfg.format == OutputFormat::Json) {
        std::string& s = out.output;
        s = "{\"schema\":1,\"command\":\"eval\",\"grid\":[";
        for (std::size_t i = 0; i < response.size(); ++i) {
            if (i) s += ",";
            s += "{\"omega\":";
            s += fmt(omegas[i]);
            s += ",\"re\":";
            s += fmt(response[i].real());
            s += ",\"im\":";
            s += fmt(clamp_imag(response[i].imag()));
            s += ",\"magnitude\":";
            s += fmt(std::abs(response[i]));
            s += "}";
        }
        s += "]}\n";
    } else {
        std::string& s = out.output;
        s = "omega,re,im,magnitude\n";
        for (std::size_t i = 0; i < response.size(); ++i) {
            s += fmt(omegas[i]);
            s += ",";
            s += fmt(response[i].real());
            s += ",";
            s += fmt(clamp_imag(response[i].imag()));
            s += ",";
            s += fmt(std::abs(response[i]));
            s += "\n";
        }
    }
    return out;
}

} // namespace detail

/// Executes one command on raw input bytes. Never throws: failures are
/// reported as machine-readable error documents with the library
/// diagnostic verbatim, exit status 2 (invalid input) or 3 (design
/// failure). Stability warnings land in diagnostics without changing the
/// exit status.
inline RunResult run(const RunConfig& cfg, std::string_view input) {
    try {
        switch (cfg.command) {
        case Command::DesignTime: return detail::design_time_command(cfg, input);
        case Command::DesignFreq: return detail::design_freq_command(cfg, input);
        case Command::DesignZeros: return detail::design_zeros_command(cfg, input);
        case Command::Identify: return detail::identify_command(cfg, input);
        case Command::Eval: return detail::eval_command(cfg, input);
        }
        return {2, detail::error_document("invalid-input", "unknown command"), ""};
    } catch (const InvalidInputError& e) {
        return {2, detail::error_document(e.code(), e.what()), ""};
    } catch (const Error& e) {
        return {3, detail::error_document(e.code(), e.what()), ""};
    }
}

} // namespace prony::cli
