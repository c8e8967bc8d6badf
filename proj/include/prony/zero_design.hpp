#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "prony/errors.hpp"
#include "prony/filter.hpp"
#include "prony/linalg.hpp"
#include "prony/time_design.hpp"

namespace prony {

/// Numerator design with a fixed denominator: pick b (degree M) so the
/// first K impulse-response samples track the desired samples with minimal
/// 2-norm solution error.
struct ZeroDesignProblem {
    Vec a;
    Vec desired;
    std::size_t num_order = 0;

    std::size_t sample_count() const noexcept { return desired.size(); }
};

inline void validate(const ZeroDesignProblem& p) {
    if (p.a.empty() || p.a[0] != Complex(1.0))
        throw InvalidInputError("zero design: denominator must start with 1");
    if (p.desired.size() <= p.num_order + 1)
        throw InvalidInputError("zero design: need K > M + 1 samples (the equation-error "
                                "numerator already interpolates shorter windows)");
}

/// K x K banded unit-lower-triangular convolution operator of the
/// denominator: A[i][j] = a[i-j] for 0 <= i-j <= N.
inline Mat convolution_matrix(const Vec& a, std::size_t count) {
    if (a.empty() || a[0] != Complex(1.0))
        throw InvalidInputError("convolution_matrix: coefficients must start with 1");
    Mat m(count, count);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = i < a.size() ? 0 : i - a.size() + 1; j <= i; ++j)
            m(i, j) = a[i - j];
    return m;
}

namespace detail {

/// First M+1 columns of A^{-1}, one banded forward solve per unit vector.
inline Mat leading_inverse_columns(const Mat& a, std::size_t cols) {
    Mat d(a.rows(), cols);
    Vec unit(a.rows(), Complex(0.0));
    for (std::size_t j = 0; j < cols; ++j) {
        unit[j] = 1.0;
        Vec col = solve_lower_triangular(a, unit);
        unit[j] = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) d(i, j) = col[i];
    }
    return d;
}

} // namespace detail

struct ZeroDesignResult {
    Vec b;
    Vec error;
    double error_norm = 0.0;
    std::size_t rank = 0;
    double condition_estimate = 1.0;
};

/// Solution-error-optimal numerator: with D1 the first M+1 columns of the
/// inverse denominator operator, h = D1 b, so b is the least-squares
/// solution of D1 b ~ desired (same minimizer as the normal equations,
/// solved orthogonally). Equality-constrained variants (pinning selected
/// samples exactly) would replace this unconstrained solve; none are
/// implemented.
inline ZeroDesignResult design_zeros(const ZeroDesignProblem& p) {
    validate(p);
    const std::size_t count = p.desired.size();
    Mat a = convolution_matrix(p.a, count);
    Mat d1 = detail::leading_inverse_columns(a, p.num_order + 1);
    LstsqResult ls = lstsq(d1, p.desired);

    ZeroDesignResult result;
    result.b = ls.solution;
    result.rank = ls.rank;
    result.condition_estimate = ls.condition_estimate;
    Vec h = matvec(d1, result.b);
    result.error.assign(count, Complex(0.0));
    for (std::size_t i = 0; i < count; ++i) result.error[i] = p.desired[i] - h[i];
    result.error_norm = norm2(result.error);
    return result;
}

inline Vec solve_numerator_solution_error(const ZeroDesignProblem& p) {
    return design_zeros(p).b;
}

/// Solution error e = desired - impulse_response((b, a), K) and its norm.
struct SolutionError {
    Vec error;
    double norm = 0.0;
};

inline SolutionError solution_error(const ZeroDesignProblem& p, const Vec& b) {
    validate(p);
    if (b.size() != p.num_order + 1)
        throw InvalidInputError("solution_error: numerator length does not match M + 1");
    RationalFilter f{b, p.a};
    Vec h = impulse_response(f, p.desired.size());
    SolutionError se;
    se.error.assign(p.desired.size(), Complex(0.0));
    for (std::size_t i = 0; i < p.desired.size(); ++i) se.error[i] = p.desired[i] - h[i];
    se.norm = norm2(se.error);
    return se;
}

} // namespace prony
