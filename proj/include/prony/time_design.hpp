#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "prony/errors.hpp"
#include "prony/filter.hpp"
#include "prony/linalg.hpp"

namespace prony {

/// Whether a design must pass through every sample (square system) or
/// minimize the equation error over extra samples.
enum class DesignMode { Interpolate, LeastSquares };

inline const char* to_string(DesignMode m) {
    return m == DesignMode::Interpolate ? "interp" : "ls";
}

/// Time-domain design problem: desired impulse-response samples
/// h[0..L] plus the requested numerator degree M and denominator degree N.
/// Interpolation needs L == M + N; least squares needs L > M + N.
struct TimeDesignProblem {
    Vec desired;
    std::size_t num_order = 0;
    std::size_t den_order = 0;

    std::size_t sample_count() const noexcept { return desired.size(); }
};

/// Blocks of the (L+1) x (N+1) convolution matrix built from the desired
/// samples, split so the denominator and numerator solves uncouple:
///   numerator_rows  (M+1) x (N+1)  -- rows that produce b
///   predicted       length L-M     -- samples the denominator must explain
///   predictors      (L-M) x N      -- lagged-sample matrix multiplying a*
struct ConvolutionPartition {
    Mat numerator_rows;
    Vec predicted;
    Mat predictors;
};

/// Builds the partition from the lower-triangular Toeplitz convolution
/// matrix H[i][j] = h[i-j] (zero above the diagonal).
inline ConvolutionPartition build_partition(const TimeDesignProblem& p) {
    if (p.desired.empty()) throw InvalidInputError("design: no samples given");
    const std::size_t l = p.desired.size() - 1;
    const std::size_t m = p.num_order;
    const std::size_t n = p.den_order;
    if (l < m + n)
        throw InvalidInputError("design: need at least M + N + 1 = " + std::to_string(m + n + 1) +
                                " samples, got " + std::to_string(l + 1));

    ConvolutionPartition part;
    part.numerator_rows = Mat(m + 1, n + 1);
    for (std::size_t i = 0; i <= m; ++i)
        for (std::size_t j = 0; j <= n && j <= i; ++j)
            part.numerator_rows(i, j) = p.desired[i - j];

    part.predicted.assign(l - m, Complex(0.0));
    for (std::size_t i = 0; i < l - m; ++i) part.predicted[i] = p.desired[m + 1 + i];

    part.predictors = Mat(l - m, n);
    for (std::size_t i = 0; i < l - m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (m + 1 + i >= j + 1) part.predictors(i, j) = p.desired[m + i - j];
    return part;
}

/// Denominator solve outcome with the diagnostics needed to judge it.
struct DenominatorSolution {
    Vec a;
    std::size_t rank = 0;
    double condition_estimate = 1.0;
    bool rank_deficient = false;
};

/// Solves predicted = -predictors a* and prepends the unit coefficient.
///
/// A singular square system still interpolates when it is consistent (the
/// samples come from a lower-order model); the minimum-norm solution is
/// returned with the deficiency surfaced through rank and condition. An
/// inconsistent singular system has no interpolant at this order: a
/// NoSolutionError reports the diagnostics and the caller chooses between
/// lowering the order and switching to least squares. In least-squares
/// mode a rank-deficient system falls back to the minimum-norm solution.
inline DenominatorSolution solve_denominator_detailed(const ConvolutionPartition& part,
                                                      DesignMode mode) {
    const std::size_t n = part.predictors.cols();
    const std::size_t rows = part.predicted.size();

    DenominatorSolution sol;
    sol.a.assign(1, Complex(1.0));
    if (n == 0) {
        if (mode == DesignMode::Interpolate && rows != 0)
            throw InvalidInputError("design: interpolation needs a square system (L == M + N)");
        if (mode == DesignMode::LeastSquares && rows == 0)
            throw InvalidInputError("design: least squares needs more samples than coefficients");
        sol.rank = 0;
        sol.condition_estimate = 1.0;
        return sol;
    }

    if (mode == DesignMode::Interpolate && rows != n)
        throw InvalidInputError("design: interpolation needs a square system (L == M + N)");
    if (mode == DesignMode::LeastSquares && rows <= n)
        throw InvalidInputError("design: least squares needs L - M > N");

    Vec rhs(part.predicted);
    for (Complex& z : rhs) z = -z;
    LstsqResult ls = lstsq(part.predictors, rhs);

    if (ls.rank < n) {
        const double consistency_tol = 1e-10 * std::max(1.0, norm2(part.predicted));
        if (mode == DesignMode::Interpolate && ls.residual_norm > consistency_tol)
            throw NoSolutionError(
                "design: singular interpolation system (rank " + std::to_string(ls.rank) + " of " +
                    std::to_string(n) +
                    ") with no exact solution; lower the denominator order or use "
                    "least-squares mode with more samples",
                ls.rank, ls.condition_estimate);
        sol.rank_deficient = true;
    }

    sol.a.insert(sol.a.end(), ls.solution.begin(), ls.solution.end());
    sol.rank = ls.rank;
    sol.condition_estimate = ls.condition_estimate;
    return sol;
}

inline Vec solve_denominator(const ConvolutionPartition& part, DesignMode mode) {
    return solve_denominator_detailed(part, mode).a;
}

/// b = numerator_rows * a; the first M+1 equation-error entries vanish by
/// construction.
inline Vec solve_numerator(const ConvolutionPartition& part, const Vec& a) {
    if (a.empty() || a[0] != Complex(1.0))
        throw InvalidInputError("solve_numerator: denominator must start with 1");
    return matvec(part.numerator_rows, a);
}

/// Per-design diagnostics: the full equation-error vector (length L+1,
/// leading M+1 entries structurally zero), pole moduli, and the stability
/// verdict. Stability is diagnosed, never enforced.
struct DesignReport {
    Vec equation_error;
    std::vector<double> pole_moduli;
    bool stable = true;
    double condition_estimate = 1.0;
    DesignMode mode = DesignMode::Interpolate;
};

struct TimeDesignResult {
    RationalFilter filter;
    DesignReport report;
};

/// Full time-domain Prony design: partition, denominator solve, numerator
/// solve, diagnostics.
inline TimeDesignResult design_time(const TimeDesignProblem& p, DesignMode mode) {
    ConvolutionPartition part = build_partition(p);
    DenominatorSolution den = solve_denominator_detailed(part, mode);

    TimeDesignResult result;
    result.filter.a = den.a;
    result.filter.b = solve_numerator(part, den.a);

    DesignReport& report = result.report;
    report.mode = mode;
    report.condition_estimate = den.condition_estimate;

    // Equation error [b; 0] - H0 a: zero on the numerator rows, the
    // negated denominator residual below them.
    const std::size_t l = p.desired.size() - 1;
    report.equation_error.assign(l + 1, Complex(0.0));
    if (part.predictors.cols() > 0) {
        Vec astar(den.a.begin() + 1, den.a.end());
        Vec predicted_fit = matvec(part.predictors, astar);
        for (std::size_t i = 0; i < part.predicted.size(); ++i)
            report.equation_error[p.num_order + 1 + i] = -(part.predicted[i] + predicted_fit[i]);
    } else {
        for (std::size_t i = 0; i < part.predicted.size(); ++i)
            report.equation_error[p.num_order + 1 + i] = -part.predicted[i];
    }

    report.pole_moduli = pole_moduli(pole_locations(result.filter));
    report.stable = is_stable(report.pole_moduli);
    return result;
}

} // namespace prony
