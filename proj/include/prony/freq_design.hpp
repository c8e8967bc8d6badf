#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "prony/errors.hpp"
#include "prony/filter.hpp"
#include "prony/linalg.hpp"
#include "prony/time_design.hpp"

namespace prony {

/// Frequency-domain design problem: L+1 complex response samples taken at
/// omega_k = 2 pi k / (L+1), plus the requested orders. When enforce_real
/// is set the samples must be conjugate-symmetric (H_k == conj(H_{L+1-k}))
/// and the design stays on real arithmetic.
struct FrequencySpec {
    Vec samples;
    std::size_t num_order = 0;
    std::size_t den_order = 0;
    bool enforce_real = false;

    std::size_t sample_count() const noexcept { return samples.size(); }
};

inline void validate(const FrequencySpec& spec) {
    if (spec.samples.empty()) throw InvalidInputError("frequency spec: no samples");
    if (spec.samples.size() < spec.num_order + spec.den_order + 1)
        throw InvalidInputError("frequency spec: need at least M + N + 1 = " +
                                std::to_string(spec.num_order + spec.den_order + 1) +
                                " samples, got " + std::to_string(spec.samples.size()));
}

/// Largest conjugate-symmetry defect |H_k - conj(H_{n-k})| and the index
/// attaining it.
inline std::pair<double, std::size_t> conjugate_symmetry_defect(const Vec& samples) {
    const std::size_t n = samples.size();
    double worst = 0.0;
    std::size_t worst_index = 0;
    for (std::size_t k = 0; k < n; ++k) {
        double d = std::abs(samples[k] - std::conj(samples[(n - k) % n]));
        if (d > worst) {
            worst = d;
            worst_index = k;
        }
    }
    return {worst, worst_index};
}

/// Inverse DFT of the response samples. These are not impulse-response
/// values of the filter; they are a time-aliased version that feeds the
/// cyclic design system. With enforce_real set, conjugate symmetry is
/// checked to 1e-9 (scaled) and the residual imaginary parts are dropped.
inline Vec pseudo_impulse(const FrequencySpec& spec) {
    validate(spec);
    Vec h = idft(spec.samples);
    if (spec.enforce_real) {
        double scale = std::max(1.0, norm_inf(spec.samples));
        auto [defect, index] = conjugate_symmetry_defect(spec.samples);
        if (defect > 1e-9 * scale)
            throw InvalidInputError(
                "frequency spec: samples are not conjugate-symmetric (worst at index " +
                std::to_string(index) + ", defect " + std::to_string(defect) + ")");
        for (Complex& z : h) z = Complex(z.real(), 0.0);
    }
    return h;
}

/// Partition of the cyclic convolution matrix H[i][j] = h[(i-j) mod (L+1)],
/// cut into the same blocks as the time-domain design.
inline ConvolutionPartition build_cyclic_partition(const Vec& h, std::size_t num_order,
                                                   std::size_t den_order) {
    if (h.empty()) throw InvalidInputError("cyclic partition: no samples");
    const std::size_t n_total = h.size();
    const std::size_t l = n_total - 1;
    const std::size_t m = num_order;
    const std::size_t n = den_order;
    if (l < m + n)
        throw InvalidInputError("cyclic partition: need at least M + N + 1 samples, got " +
                                std::to_string(n_total));

    auto wrap = [n_total](std::size_t row, std::size_t col) {
        // (row - col) mod (L+1) without signed arithmetic
        return row >= col ? row - col : row + n_total - col;
    };

    ConvolutionPartition part;
    part.numerator_rows = Mat(m + 1, n + 1);
    for (std::size_t i = 0; i <= m; ++i)
        for (std::size_t j = 0; j <= n; ++j) part.numerator_rows(i, j) = h[wrap(i, j)];

    part.predicted.assign(l - m, Complex(0.0));
    for (std::size_t i = 0; i < l - m; ++i) part.predicted[i] = h[m + 1 + i];

    part.predictors = Mat(l - m, n);
    for (std::size_t i = 0; i < l - m; ++i)
        for (std::size_t j = 0; j < n; ++j) part.predictors(i, j) = h[wrap(m + 1 + i, j + 1)];
    return part;
}

/// Frequency-domain diagnostics. equation_error is the residual of
/// B_k = H_k A_k; response_error is the response-domain error
/// B_k/A_k - H_k, related by response_error_k = equation_error_k / A_k.
struct FreqDesignReport {
    Vec equation_error;
    Vec response_error;
    std::vector<double> pole_moduli;
    bool stable = true;
    double condition_estimate = 1.0;
    DesignMode mode = DesignMode::Interpolate;
};

struct FreqDesignResult {
    RationalFilter filter;
    FreqDesignReport report;
};

/// Frequency-sampling design: solve the cyclic-convolution system with the
/// same machinery as the time-domain design, then report both error
/// measures. Interpolation passes through every sample when the system is
/// well conditioned; nothing is claimed between the samples.
inline FreqDesignResult design_freq(const FrequencySpec& spec, DesignMode mode) {
    Vec h = pseudo_impulse(spec);
    ConvolutionPartition part = build_cyclic_partition(h, spec.num_order, spec.den_order);
    DenominatorSolution den = solve_denominator_detailed(part, mode);

    FreqDesignResult result;
    result.filter.a = den.a;
    result.filter.b = solve_numerator(part, den.a);

    const std::size_t count = spec.samples.size();
    Vec b_padded(count, Complex(0.0));
    Vec a_padded(count, Complex(0.0));
    for (std::size_t i = 0; i < result.filter.b.size(); ++i) b_padded[i] = result.filter.b[i];
    for (std::size_t i = 0; i < result.filter.a.size(); ++i) a_padded[i] = result.filter.a[i];
    Vec bk = dft(b_padded);
    Vec ak = dft(a_padded);

    FreqDesignReport& report = result.report;
    report.mode = mode;
    report.condition_estimate = den.condition_estimate;
    report.equation_error.assign(count, Complex(0.0));
    report.response_error.assign(count, Complex(0.0));
    for (std::size_t k = 0; k < count; ++k) {
        report.equation_error[k] = bk[k] - spec.samples[k] * ak[k];
        report.response_error[k] = bk[k] / ak[k] - spec.samples[k];
    }

    report.pole_moduli = pole_moduli(pole_locations(result.filter));
    report.stable = is_stable(report.pole_moduli);
    return result;
}

/// Expands a folded-magnitude specification into complex samples with
/// linear phase e^{-j omega tau}. Frequencies are wrapped to (-pi, pi]
/// before applying the phase so the result is conjugate-symmetric for any
/// real group delay; an even-length Nyquist sample is forced real.
inline Vec linear_phase_samples(const std::vector<double>& magnitudes, double group_delay) {
    const std::size_t n = magnitudes.size();
    if (n == 0) throw InvalidInputError("linear_phase_samples: no magnitudes");
    Vec samples(n);
    for (std::size_t k = 0; k < n; ++k) {
        double m = k <= n / 2 ? static_cast<double>(k)
                              : static_cast<double>(k) - static_cast<double>(n);
        double phase = -detail::kTau * m * group_delay / static_cast<double>(n);
        if (n % 2 == 0 && k == n / 2)
            samples[k] = magnitudes[k] * std::cos(phase);
        else
            samples[k] = std::polar(magnitudes[k], phase);
    }
    return samples;
}

/// Ideal-lowpass magnitude grid: 1 (pass) for folded normalized frequency
/// min(k, n-k)/n strictly below the band edge, else the stop value. The
/// band edge is a fraction of the sampling rate, so 0.5 is Nyquist.
inline std::vector<double> lowpass_magnitudes(std::size_t count, double band_edge,
                                              double pass_magnitude, double stop_magnitude) {
    if (count == 0) throw InvalidInputError("lowpass_magnitudes: count must be positive");
    std::vector<double> mags(count);
    for (std::size_t k = 0; k < count; ++k) {
        double f = static_cast<double>(std::min(k, count - k)) / static_cast<double>(count);
        mags[k] = f < band_edge ? pass_magnitude : stop_magnitude;
    }
    return mags;
}

} // namespace prony
