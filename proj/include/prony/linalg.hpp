#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "prony/errors.hpp"

namespace prony {

using Complex = std::complex<double>;

/// Column/sample vector of complex scalars. Real data is carried with zero
/// imaginary parts; there is a single code path for both.
using Vec = std::vector<Complex>;

/// Dense row-major complex matrix. Dimensions may be zero for the
/// degenerate partition blocks that show up when a design has no
/// denominator (the numerical kernels below reject empty operands).
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0)) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<Complex>& data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline double norm2(const Vec& v) {
    double s = 0.0;
    for (const Complex& z : v) s += std::norm(z);
    return std::sqrt(s);
}

inline double norm_inf(const Vec& v) {
    double m = 0.0;
    for (const Complex& z : v) m = std::max(m, std::abs(z));
    return m;
}

inline double frobenius_norm(const Mat& m) {
    double s = 0.0;
    for (const Complex& z : m.data()) s += std::norm(z);
    return std::sqrt(s);
}

inline Vec matvec(const Mat& m, const Vec& x) {
    if (x.size() != m.cols())
        throw InvalidInputError("matvec: vector length " + std::to_string(x.size()) +
                                " does not match matrix columns " + std::to_string(m.cols()));
    Vec y(m.rows(), Complex(0.0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Complex acc(0.0);
        for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

/// y = M^H x (Hermitian transpose applied to x).
inline Vec matvec_hermitian(const Mat& m, const Vec& x) {
    if (x.size() != m.rows())
        throw InvalidInputError("matvec_hermitian: vector length does not match matrix rows");
    Vec y(m.cols(), Complex(0.0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) y[j] += std::conj(m(i, j)) * x[i];
    return y;
}

/// Result of a least-squares solve. `rank` is the numerical rank detected
/// by the pivoted factorization; `condition_estimate` is the ratio of the
/// extreme diagonal magnitudes of the pivoted triangular factor (infinite
/// when a diagonal entry vanished). Callers use it to detect
/// near-singular design systems.
struct LstsqResult {
    Vec solution;
    double residual_norm = 0.0;
    std::size_t rank = 0;
    double condition_estimate = 0.0;
};

namespace detail {

/// Relative tolerance for declaring a factorization diagonal negligible.
inline constexpr double kRankTolerance = 1e-12;

/// Householder reflector H = I - tau v v^H acting on rows [k, k+len).
/// With beta = -(x0/|x0|)*||x||, tau = 2 / v^H v maps x to beta*e1 exactly.
struct Reflector {
    std::size_t offset = 0;
    double tau = 0.0;
    Vec v;
};

inline Complex unit_phase(Complex z) {
    double a = std::abs(z);
    return a == 0.0 ? Complex(1.0) : z / a;
}

/// Builds the reflector for the vector x (length >= 1, ||x|| > 0) and
/// returns beta, the value H x lands on.
inline Complex make_reflector(const Vec& x, std::size_t offset, Reflector& out) {
    double xnorm = norm2(x);
    Complex beta = -unit_phase(x[0]) * xnorm;
    out.offset = offset;
    out.v = x;
    out.v[0] -= beta;
    double vsq = 0.0;
    for (const Complex& z : out.v) vsq += std::norm(z);
    out.tau = vsq == 0.0 ? 0.0 : 2.0 / vsq;
    return beta;
}

/// Applies a reflector to the tail of a vector (entries [offset, end)).
inline void apply_reflector(const Reflector& h, Vec& y) {
    if (h.tau == 0.0) return;
    Complex s(0.0);
    for (std::size_t i = 0; i < h.v.size(); ++i) s += std::conj(h.v[i]) * y[h.offset + i];
    s *= h.tau;
    for (std::size_t i = 0; i < h.v.size(); ++i) y[h.offset + i] -= s * h.v[i];
}

/// Applies a reflector to column j of M, rows [offset, rows).
inline void apply_reflector(const Reflector& h, Mat& m, std::size_t j) {
    if (h.tau == 0.0) return;
    Complex s(0.0);
    for (std::size_t i = 0; i < h.v.size(); ++i) s += std::conj(h.v[i]) * m(h.offset + i, j);
    s *= h.tau;
    for (std::size_t i = 0; i < h.v.size(); ++i) m(h.offset + i, j) -= s * h.v[i];
}

} // namespace detail

/// Minimum-norm least squares via Householder QR with column pivoting.
///
/// Returns the x minimizing ||Ax - y||_2 and, among all minimizers, the one
/// of minimum ||x||_2 (rank-deficient systems are completed with a second,
/// unpivoted factorization of the leading trapezoid, LAPACK xGELSY style).
/// The normal equations are never formed.
inline LstsqResult lstsq(const Mat& a, const Vec& y) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m < 1 || n < 1)
        throw InvalidInputError("lstsq: matrix must have at least one row and one column");
    if (y.size() != m)
        throw InvalidInputError("lstsq: right-hand side length " + std::to_string(y.size()) +
                                " does not match matrix rows " + std::to_string(m));

    Mat r = a;
    Vec ty = y;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    const std::size_t kmax = std::min(m, n);
    std::size_t factored = 0;
    for (std::size_t k = 0; k < kmax; ++k) {
        // Exact column-norm pivoting; ties keep the leftmost column so
        // results are deterministic.
        std::size_t best = k;
        double best_sq = -1.0;
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += std::norm(r(i, j));
            if (s > best_sq) {
                best_sq = s;
                best = j;
            }
        }
        if (best_sq == 0.0) break; // remaining block is exactly zero
        if (best != k) {
            for (std::size_t i = 0; i < m; ++i) std::swap(r(i, k), r(i, best));
            std::swap(perm[k], perm[best]);
        }

        Vec x(m - k);
        for (std::size_t i = k; i < m; ++i) x[i - k] = r(i, k);
        detail::Reflector h;
        Complex beta = detail::make_reflector(x, k, h);
        r(k, k) = beta;
        for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0.0;
        for (std::size_t j = k + 1; j < n; ++j) detail::apply_reflector(h, r, j);
        detail::apply_reflector(h, ty);
        factored = k + 1;
    }

    // Numerical rank: leading block of diagonal entries above the relative
    // tolerance. Column pivoting keeps the diagonal (essentially)
    // non-increasing in magnitude.
    double dmax = 0.0;
    for (std::size_t k = 0; k < factored; ++k) dmax = std::max(dmax, std::abs(r(k, k)));
    std::size_t rank = 0;
    while (rank < factored && std::abs(r(rank, rank)) > detail::kRankTolerance * dmax) ++rank;

    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < kmax; ++k) dmin = std::min(dmin, k < factored ? std::abs(r(k, k)) : 0.0);
    double cond = dmin == 0.0 ? std::numeric_limits<double>::infinity() : dmax / dmin;

    LstsqResult result;
    result.rank = rank;
    result.condition_estimate = cond;
    result.solution.assign(n, Complex(0.0));

    if (rank == 0) {
        result.residual_norm = norm2(y);
        return result;
    }

    Vec z(n, Complex(0.0));
    if (rank == n) {
        // Full column rank: plain back substitution.
        for (std::size_t ii = n; ii-- > 0;) {
            Complex s = ty[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s -= r(ii, j) * z[j];
            z[ii] = s / r(ii, ii);
        }
    } else {
        // Minimum-norm completion: factor W^H = Q2 R2 for the leading
        // trapezoid W = R[0..rank, 0..n) and solve R2^H u = c, z = Q2 u.
        Mat b(n, rank);
        for (std::size_t i = 0; i < rank; ++i)
            for (std::size_t j = 0; j < n; ++j) b(j, i) = std::conj(r(i, j));
        std::vector<detail::Reflector> hs(rank);
        for (std::size_t k = 0; k < rank; ++k) {
            Vec x(n - k);
            for (std::size_t i = k; i < n; ++i) x[i - k] = b(i, k);
            Complex beta = detail::make_reflector(x, k, hs[k]);
            b(k, k) = beta;
            for (std::size_t i = k + 1; i < n; ++i) b(i, k) = 0.0;
            for (std::size_t j = k + 1; j < rank; ++j) detail::apply_reflector(hs[k], b, j);
        }
        Vec u(rank, Complex(0.0));
        for (std::size_t i = 0; i < rank; ++i) {
            Complex s = ty[i];
            for (std::size_t j = 0; j < i; ++j) s -= std::conj(b(j, i)) * u[j];
            Complex d = std::conj(b(i, i));
            if (d == Complex(0.0))
                throw SingularMatrixError("lstsq: inconsistent rank detection in minimum-norm solve");
            u[i] = s / d;
        }
        for (std::size_t i = 0; i < rank; ++i) z[i] = u[i];
        for (std::size_t k = rank; k-- > 0;) detail::apply_reflector(hs[k], z);
    }

    for (std::size_t j = 0; j < n; ++j) result.solution[perm[j]] = z[j];

    double rsq = 0.0;
    for (std::size_t i = rank; i < m; ++i) rsq += std::norm(ty[i]);
    result.residual_norm = std::sqrt(rsq);
    return result;
}

/// Forward substitution for a lower-triangular system. Entries above the
/// diagonal are ignored.
inline Vec solve_lower_triangular(const Mat& a, const Vec& y) {
    const std::size_t n = a.rows();
    if (n < 1 || a.cols() != n)
        throw InvalidInputError("solve_lower_triangular: matrix must be square and nonempty");
    if (y.size() != n)
        throw InvalidInputError("solve_lower_triangular: right-hand side length mismatch");
    Vec x(n, Complex(0.0));
    for (std::size_t i = 0; i < n; ++i) {
        Complex s = y[i];
        for (std::size_t j = 0; j < i; ++j) s -= a(i, j) * x[j];
        if (a(i, i) == Complex(0.0))
            throw SingularMatrixError("solve_lower_triangular: zero diagonal entry at index " +
                                      std::to_string(i));
        x[i] = s / a(i, i);
    }
    return x;
}

namespace detail {

inline constexpr double kTau = 6.283185307179586476925286766559;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Iterative radix-2 transform, kernel sign picked by the caller.
inline void fft_radix2(Vec& x, double sign) {
    const std::size_t n = x.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const Complex wstep = std::polar(1.0, sign * kTau / static_cast<double>(len));
        for (std::size_t start = 0; start < n; start += len) {
            Complex w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                Complex even = x[start + k];
                Complex odd = x[start + k + len / 2] * w;
                x[start + k] = even + odd;
                x[start + k + len / 2] = even - odd;
                w *= wstep;
            }
        }
    }
}

inline Vec fourier_transform(const Vec& x, double sign, bool scale) {
    const std::size_t n = x.size();
    if (n < 1) throw InvalidInputError("dft: input must not be empty");
    Vec out;
    if (is_power_of_two(n)) {
        out = x;
        if (n > 1) fft_radix2(out, sign);
    } else {
        // Direct summation with a shared twiddle table; problem sizes in
        // this library stay small.
        Vec table(n);
        for (std::size_t m = 0; m < n; ++m)
            table[m] = std::polar(1.0, sign * kTau * static_cast<double>(m) / static_cast<double>(n));
        out.assign(n, Complex(0.0));
        for (std::size_t k = 0; k < n; ++k) {
            Complex acc(0.0);
            for (std::size_t j = 0; j < n; ++j) acc += x[j] * table[(j * k) % n];
            out[k] = acc;
        }
    }
    if (scale)
        for (Complex& z : out) z /= static_cast<double>(n);
    return out;
}

} // namespace detail

/// Discrete Fourier transform with kernel e^{-j 2 pi n k / N}.
inline Vec dft(const Vec& x) { return detail::fourier_transform(x, -1.0, false); }

/// Inverse DFT (kernel e^{+j 2 pi n k / N}, scaled by 1/N); exact inverse
/// of dft up to roundoff.
inline Vec idft(const Vec& x) { return detail::fourier_transform(x, +1.0, true); }

namespace detail {

/// Horner evaluation of a polynomial with highest-degree coefficient first;
/// also returns the derivative value.
inline void horner(const Vec& c, Complex z, Complex& p, Complex& dp) {
    p = c[0];
    dp = 0.0;
    for (std::size_t i = 1; i < c.size(); ++i) {
        dp = dp * z + p;
        p = p * z + c[i];
    }
}

/// Stable quadratic formula for a z^2 + b z + c.
inline void solve_quadratic(Complex a, Complex b, Complex c, Complex& r0, Complex& r1) {
    Complex sq = std::sqrt(b * b - 4.0 * a * c);
    // Pick the sign avoiding cancellation in b + sq.
    if (std::real(std::conj(b) * sq) < 0.0) sq = -sq;
    Complex q = -0.5 * (b + sq);
    r0 = q / a;
    r1 = q == Complex(0.0) ? Complex(0.0) : c / q;
}

/// Aberth-Ehrlich simultaneous iteration on a monic polynomial
/// (coefficients highest-degree first, c[0] == 1).
inline Vec aberth_roots(const Vec& c) {
    const std::size_t deg = c.size() - 1;
    Vec z(deg);
    // Start on a circle scaled by the geometric mean of the root moduli,
    // with an angular offset that breaks coefficient symmetries.
    double radius = std::pow(std::abs(c[deg]), 1.0 / static_cast<double>(deg));
    if (!(radius > 0.0)) radius = 1.0;
    for (std::size_t k = 0; k < deg; ++k)
        z[k] = std::polar(radius, kTau * static_cast<double>(k) / static_cast<double>(deg) + 0.42);

    const int max_iterations = 400;
    for (int iter = 0; iter < max_iterations; ++iter) {
        bool converged = true;
        for (std::size_t k = 0; k < deg; ++k) {
            Complex p, dp;
            horner(c, z[k], p, dp);
            if (p == Complex(0.0)) continue;
            if (dp == Complex(0.0)) {
                z[k] += Complex(1e-6, 1e-6) * (1.0 + std::abs(z[k]));
                converged = false;
                continue;
            }
            Complex newton = p / dp;
            Complex repulsion(0.0);
            for (std::size_t j = 0; j < deg; ++j) {
                if (j == k) continue;
                Complex d = z[k] - z[j];
                if (d == Complex(0.0)) {
                    d = Complex(1e-12, 1e-12);
                }
                repulsion += 1.0 / d;
            }
            Complex denom = 1.0 - newton * repulsion;
            Complex step = denom == Complex(0.0) ? newton : newton / denom;
            z[k] -= step;
            if (std::abs(step) > 1e-14 * (1.0 + std::abs(z[k]))) converged = false;
        }
        if (converged) break;
    }
    return z;
}

} // namespace detail

/// All complex roots (with multiplicity) of a polynomial given by its
/// coefficients, highest degree first. Leading coefficients below
/// 1e-14 x max|c| are stripped; trailing near-zero coefficients become
/// exact roots at the origin. Degrees one and two use closed forms, the
/// rest Aberth-Ehrlich iteration.
inline Vec poly_roots(const Vec& coeffs) {
    if (coeffs.empty()) throw InvalidInputError("poly_roots: no coefficients");
    double max_mag = 0.0;
    for (const Complex& z : coeffs) max_mag = std::max(max_mag, std::abs(z));
    if (max_mag == 0.0) throw InvalidInputError("poly_roots: all coefficients are zero");
    const double strip_tol = 1e-14 * max_mag;

    std::size_t first = 0;
    while (first < coeffs.size() && std::abs(coeffs[first]) <= strip_tol) ++first;
    if (coeffs.size() - first < 2)
        throw InvalidInputError("poly_roots: degree is zero after stripping leading coefficients");

    Vec work(coeffs.begin() + static_cast<std::ptrdiff_t>(first), coeffs.end());
    std::size_t zero_roots = 0;
    while (work.size() > 1 && std::abs(work.back()) <= strip_tol) {
        work.pop_back();
        ++zero_roots;
    }

    Vec roots;
    const std::size_t deg = work.size() - 1;
    if (deg == 1) {
        roots.push_back(-work[1] / work[0]);
    } else if (deg == 2) {
        Complex r0, r1;
        detail::solve_quadratic(work[0], work[1], work[2], r0, r1);
        roots.push_back(r0);
        roots.push_back(r1);
    } else if (deg >= 3) {
        Vec monic(work.size());
        for (std::size_t i = 0; i < work.size(); ++i) monic[i] = work[i] / work[0];
        roots = detail::aberth_roots(monic);
    }
    roots.insert(roots.end(), zero_roots, Complex(0.0));
    return roots;
}

} // namespace prony
