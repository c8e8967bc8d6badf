#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "prony/errors.hpp"
#include "prony/linalg.hpp"
#include "prony/time_design.hpp"

namespace prony {

/// One term K e^{alpha t} of an exponential-sum model.
struct ExponentialMode {
    Complex amplitude; // K
    Complex exponent;  // alpha, per unit time
};

/// Sum-of-exponentials model with its sample period. Modes are kept sorted
/// by descending |e^{alpha T}|, ties by ascending phase, so identification
/// output is deterministic.
struct ExponentialModel {
    std::vector<ExponentialMode> modes;
    double period = 1.0;

    Complex ratio(std::size_t k) const { return std::exp(modes[k].exponent * period); }
};

inline ExponentialModel make_model(std::vector<ExponentialMode> modes, double period) {
    if (period <= 0.0) throw InvalidInputError("model: sample period must be positive");
    ExponentialModel model{std::move(modes), period};
    std::sort(model.modes.begin(), model.modes.end(),
              [period](const ExponentialMode& x, const ExponentialMode& y) {
                  Complex lx = std::exp(x.exponent * period);
                  Complex ly = std::exp(y.exponent * period);
                  double mx = std::abs(lx), my = std::abs(ly);
                  if (mx != my) return mx > my;
                  return std::arg(lx) < std::arg(ly);
              });
    return model;
}

/// Uniformly sampled signal y(n) = x(nT).
struct SampledSignal {
    Vec samples;
    double period = 1.0;
};

/// y(m) = sum_k K_k e^{alpha_k T m}, evaluated term by term.
inline Vec synthesize(const ExponentialModel& model, std::size_t count) {
    if (count < 1) throw InvalidInputError("synthesize: count must be at least 1");
    Vec y(count, Complex(0.0));
    for (std::size_t m = 0; m < count; ++m) {
        Complex acc(0.0);
        double t = model.period * static_cast<double>(m);
        for (const ExponentialMode& mode : model.modes) acc += mode.amplitude * std::exp(mode.exponent * t);
        y[m] = acc;
    }
    return y;
}

struct IdentifyResult {
    ExponentialModel model;
    double residual_norm = 0.0;
    double condition_estimate = 1.0;
};

/// Classical Prony identification of N exponential modes from uniform
/// samples:
///   1. linear-prediction denominator via the time-domain design machinery
///      with M = N-1 (exact with 2N samples, least squares with more);
///   2. mode ratios lambda_k as roots of the prediction polynomial;
///   3. exponents alpha_k = log(lambda_k)/T on the principal branch, so
///      Im(alpha) in (-pi/T, pi/T] and aliased exponents are unrecoverable;
///   4. amplitudes by least squares on the Vandermonde system over all
///      samples.
///
/// Vanishing or (numerically) repeated lambda_k are rejected: the model
/// assumes simple exponentials.
inline IdentifyResult identify_detailed(const SampledSignal& signal, std::size_t order) {
    if (order < 1) throw InvalidInputError("identify: order must be at least 1");
    if (signal.period <= 0.0) throw InvalidInputError("identify: sample period must be positive");
    if (signal.samples.size() < 2 * order)
        throw InvalidInputError("identify: need at least 2N = " + std::to_string(2 * order) +
                                " samples, got " + std::to_string(signal.samples.size()));

    TimeDesignProblem problem{signal.samples, order - 1, order};
    DesignMode mode = signal.samples.size() == 2 * order ? DesignMode::Interpolate
                                                         : DesignMode::LeastSquares;
    DenominatorSolution den = solve_denominator_detailed(build_partition(problem), mode);

    Vec ratios = poly_roots(den.a);
    for (const Complex& r : ratios)
        if (std::abs(r) < 1e-12)
            throw DegenerateModeError("identify: vanishing mode ratio; the signal supports fewer "
                                      "than " + std::to_string(order) + " modes");
    // A true double root splits by ~sqrt(eps) under coefficient roundoff,
    // so the rejection threshold sits above that scale. Genuinely distinct
    // modes this close are unrecoverable in double precision anyway.
    for (std::size_t i = 0; i < ratios.size(); ++i)
        for (std::size_t j = i + 1; j < ratios.size(); ++j)
            if (std::abs(ratios[i] - ratios[j]) < 1e-7)
                throw RepeatedRootError("identify: repeated mode ratio near " +
                                        std::to_string(ratios[i].real()) + (ratios[i].imag() < 0 ? "" : "+") +
                                        std::to_string(ratios[i].imag()) +
                                        "j; polynomial-amplitude models are not supported");

    // Amplitudes from the overdetermined Vandermonde system over every
    // provided sample.
    const std::size_t count = signal.samples.size();
    Mat vander(count, order);
    for (std::size_t k = 0; k < order; ++k) {
        Complex power(1.0);
        for (std::size_t n = 0; n < count; ++n) {
            vander(n, k) = power;
            power *= ratios[k];
        }
    }
    LstsqResult amp = lstsq(vander, signal.samples);

    std::vector<ExponentialMode> modes(order);
    for (std::size_t k = 0; k < order; ++k)
        modes[k] = {amp.solution[k], std::log(ratios[k]) / signal.period};

    IdentifyResult result;
    result.model = make_model(std::move(modes), signal.period);
    result.residual_norm = amp.residual_norm;
    result.condition_estimate = amp.condition_estimate;
    return result;
}

inline ExponentialModel identify(const SampledSignal& signal, std::size_t order) {
    return identify_detailed(signal, order).model;
}

} // namespace prony
