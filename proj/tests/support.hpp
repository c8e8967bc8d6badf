#pragma once

// Shared test helpers: random problem generators and independent oracle
// implementations (direct summation, polynomial arithmetic, Gaussian
// elimination) kept deliberately separate from the library code paths
// they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "prony/ident.hpp"
#include "prony/linalg.hpp"

namespace testsupport {

using prony::Complex;
using prony::Mat;
using prony::Vec;

inline double uniform(std::mt19937& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Complex random_complex(std::mt19937& rng, double scale = 1.0) {
    return Complex(uniform(rng, -scale, scale), uniform(rng, -scale, scale));
}

inline Vec random_vec(std::mt19937& rng, std::size_t n, bool complex_entries) {
    Vec v(n);
    for (auto& z : v)
        z = complex_entries ? random_complex(rng) : Complex(uniform(rng, -1.0, 1.0), 0.0);
    return v;
}

inline Mat random_mat(std::mt19937& rng, std::size_t rows, std::size_t cols,
                      bool complex_entries) {
    Mat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = complex_entries ? random_complex(rng) : Complex(uniform(rng, -1.0, 1.0));
    return m;
}

inline double max_abs_diff(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::logic_error("max_abs_diff: size mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    return worst;
}

// ---------------------------------------------------------------------
// polynomial arithmetic (ascending or descending noted per helper)
// ---------------------------------------------------------------------

/// Convolution of coefficient sequences (any consistent order).
inline Vec poly_mul(const Vec& p, const Vec& q) {
    Vec out(p.size() + q.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
    return out;
}

/// Monic polynomial (highest degree first) with the given roots.
inline Vec poly_from_roots(const Vec& roots) {
    Vec p{Complex(1.0)};
    for (const Complex& r : roots) p = poly_mul(p, Vec{Complex(1.0), -r});
    return p;
}

/// Horner evaluation, highest degree first.
inline Complex poly_eval(const Vec& coeffs, Complex z) {
    Complex acc(0.0);
    for (const Complex& c : coeffs) acc = acc * z + c;
    return acc;
}

// ---------------------------------------------------------------------
// stable-filter generator
// ---------------------------------------------------------------------

/// Random poles in |z| <= max_radius with pairwise separation >= min_sep,
/// closed under conjugation (a random mix of real poles and conjugate
/// pairs), so the denominator has exactly real coefficients.
inline Vec random_separated_poles(std::mt19937& rng, std::size_t count, double max_radius,
                                  double min_sep) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        Vec poles;
        std::size_t remaining = count;
        while (remaining > 0) {
            bool pair = remaining >= 2 && uniform(rng, 0.0, 1.0) < 0.6;
            if (pair) {
                double radius = uniform(rng, 0.1, max_radius);
                double angle = uniform(rng, 0.05, M_PI - 0.05);
                poles.emplace_back(radius * std::cos(angle), radius * std::sin(angle));
                poles.emplace_back(radius * std::cos(angle), -radius * std::sin(angle));
                remaining -= 2;
            } else {
                poles.emplace_back(uniform(rng, -max_radius, max_radius), 0.0);
                remaining -= 1;
            }
        }
        bool separated = true;
        for (std::size_t i = 0; i < poles.size() && separated; ++i)
            for (std::size_t j = i + 1; j < poles.size(); ++j)
                if (std::abs(poles[i] - poles[j]) < min_sep) {
                    separated = false;
                    break;
                }
        if (separated) return poles;
    }
    throw std::logic_error("random_separated_poles: could not satisfy separation");
}

/// Real denominator coefficients (1, a1, ..., aN) built from conjugate-
/// closed poles using real arithmetic only.
inline Vec denominator_from_poles(const Vec& poles) {
    std::vector<double> coeffs{1.0};
    std::vector<bool> used(poles.size(), false);
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (used[i]) continue;
        if (std::abs(poles[i].imag()) < 1e-15) {
            std::vector<double> factor{1.0, -poles[i].real()};
            std::vector<double> next(coeffs.size() + 1, 0.0);
            for (std::size_t p = 0; p < coeffs.size(); ++p)
                for (std::size_t q = 0; q < 2; ++q) next[p + q] += coeffs[p] * factor[q];
            coeffs = next;
        } else {
            // consume the conjugate partner
            std::size_t partner = i;
            for (std::size_t j = i + 1; j < poles.size(); ++j)
                if (!used[j] && std::abs(poles[j] - std::conj(poles[i])) < 1e-12) {
                    partner = j;
                    break;
                }
            if (partner == i) throw std::logic_error("denominator_from_poles: unpaired pole");
            used[partner] = true;
            std::vector<double> factor{1.0, -2.0 * poles[i].real(), std::norm(poles[i])};
            std::vector<double> next(coeffs.size() + 2, 0.0);
            for (std::size_t p = 0; p < coeffs.size(); ++p)
                for (std::size_t q = 0; q < 3; ++q) next[p + q] += coeffs[p] * factor[q];
            coeffs = next;
        }
    }
    Vec a(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) a[i] = coeffs[i];
    return a;
}

inline Vec random_stable_denominator(std::mt19937& rng, std::size_t order,
                                     double max_radius = 0.9, double min_sep = 0.05) {
    if (order == 0) return Vec{Complex(1.0)};
    return denominator_from_poles(random_separated_poles(rng, order, max_radius, min_sep));
}

/// Real numerator with a non-negligible largest coefficient.
inline Vec random_numerator(std::mt19937& rng, std::size_t order) {
    while (true) {
        Vec b(order + 1);
        double biggest = 0.0;
        for (auto& z : b) {
            z = Complex(uniform(rng, -1.0, 1.0), 0.0);
            biggest = std::max(biggest, std::abs(z));
        }
        if (biggest >= 0.2) return b;
    }
}

// ---------------------------------------------------------------------
// oracles
// ---------------------------------------------------------------------

/// Impulse response by direct difference-equation recursion.
inline Vec recursion_impulse(const Vec& b, const Vec& a, std::size_t count) {
    Vec h(count, Complex(0.0));
    for (std::size_t i = 0; i < count; ++i) {
        Complex acc = i < b.size() ? b[i] : Complex(0.0);
        for (std::size_t n = 1; n < a.size() && n <= i; ++n) acc -= a[n] * h[i - n];
        h[i] = acc / a[0];
    }
    return h;
}

/// Leading power-series coefficients of B(z)/A(z) by polynomial long
/// division (coefficients ascending in z^{-1}).
inline Vec long_division(const Vec& b, const Vec& a, std::size_t count) {
    Vec remainder(b);
    remainder.resize(std::max(b.size(), count + a.size()), Complex(0.0));
    Vec quotient(count, Complex(0.0));
    for (std::size_t i = 0; i < count; ++i) {
        Complex q = remainder[i] / a[0];
        quotient[i] = q;
        for (std::size_t j = 0; j < a.size(); ++j) remainder[i + j] -= q * a[j];
    }
    return quotient;
}

/// Direct O(n^2) Fourier summation with per-term std::polar.
inline Vec direct_dft(const Vec& x, double sign = -1.0, bool scale = false) {
    const std::size_t n = x.size();
    Vec out(n, Complex(0.0));
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc(0.0);
        for (std::size_t j = 0; j < n; ++j)
            acc += x[j] * std::polar(1.0, sign * 2.0 * M_PI * static_cast<double>(j) *
                                              static_cast<double>(k) / static_cast<double>(n));
        out[k] = scale ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

/// Cyclic convolution by direct summation.
inline Vec cyclic_convolution(const Vec& x, const Vec& y) {
    const std::size_t n = x.size();
    Vec out(n, Complex(0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i] += x[j] * y[(i + n - j) % n];
    return out;
}

/// Complex Gaussian elimination with partial pivoting; oracle-only solver.
inline Vec gaussian_solve(Mat a, Vec y) {
    const std::size_t n = a.rows();
    if (a.cols() != n || y.size() != n) throw std::logic_error("gaussian_solve: bad shapes");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
        if (std::abs(a(pivot, k)) == 0.0) throw std::logic_error("gaussian_solve: singular");
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
            std::swap(y[k], y[pivot]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            Complex f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            y[i] -= f * y[k];
        }
    }
    Vec x(n, Complex(0.0));
    for (std::size_t i = n; i-- > 0;) {
        Complex s = y[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

/// Normal-equation least squares (A^H A) x = A^H y via Gaussian
/// elimination; the route the library must never take internally.
inline Vec normal_equation_solve(const Mat& a, const Vec& y) {
    const std::size_t n = a.cols();
    Mat gram(n, n);
    Vec rhs(n, Complex(0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex s(0.0);
            for (std::size_t k = 0; k < a.rows(); ++k) s += std::conj(a(k, i)) * a(k, j);
            gram(i, j) = s;
        }
        Complex s(0.0);
        for (std::size_t k = 0; k < a.rows(); ++k) s += std::conj(a(k, i)) * y[k];
        rhs[i] = s;
    }
    return gaussian_solve(gram, rhs);
}

/// Random exponential-sum model with ratios in 0.3 <= |lambda| <= 1.1 and
/// pairwise separation >= 0.05; optionally conjugate-closed so the
/// synthesized samples are real.
inline prony::ExponentialModel random_model(std::mt19937& rng, std::size_t order, double period,
                                            bool real_signal) {
    while (true) {
        Vec ratios;
        std::size_t remaining = order;
        while (remaining > 0) {
            if (real_signal) {
                bool pair = remaining >= 2 && uniform(rng, 0.0, 1.0) < 0.6;
                if (pair) {
                    Complex lambda =
                        std::polar(uniform(rng, 0.3, 1.1), uniform(rng, 0.1, M_PI - 0.1));
                    ratios.push_back(lambda);
                    ratios.push_back(std::conj(lambda));
                    remaining -= 2;
                } else {
                    double sign = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
                    ratios.push_back(Complex(sign * uniform(rng, 0.3, 1.1), 0.0));
                    remaining -= 1;
                }
            } else {
                ratios.push_back(std::polar(uniform(rng, 0.3, 1.1), uniform(rng, 0.0, 2 * M_PI)));
                remaining -= 1;
            }
        }
        bool ok = true;
        for (std::size_t i = 0; i < ratios.size() && ok; ++i)
            for (std::size_t j = i + 1; j < ratios.size(); ++j)
                if (std::abs(ratios[i] - ratios[j]) < 0.05) {
                    ok = false;
                    break;
                }
        if (!ok) continue;

        std::vector<prony::ExponentialMode> modes;
        std::vector<bool> used(order, false);
        for (std::size_t i = 0; i < order; ++i) {
            if (used[i]) continue;
            Complex alpha = std::log(ratios[i]) / period;
            if (real_signal && ratios[i].imag() > 1e-14) {
                Complex amp(uniform(rng, 0.5, 2.0), uniform(rng, -1.0, 1.0));
                modes.push_back({amp, alpha});
                for (std::size_t j = i + 1; j < order; ++j)
                    if (!used[j] && std::abs(ratios[j] - std::conj(ratios[i])) < 1e-14) {
                        used[j] = true;
                        break;
                    }
                modes.push_back({std::conj(amp), std::conj(alpha)});
            } else if (real_signal) {
                modes.push_back(
                    {Complex(uniform(rng, 0.5, 2.0) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0),
                             0.0),
                     alpha});
            } else {
                modes.push_back(
                    {std::polar(uniform(rng, 0.5, 2.0), uniform(rng, 0.0, 2 * M_PI)), alpha});
            }
        }
        if (modes.size() != order) continue;
        return prony::make_model(std::move(modes), period);
    }
}

inline Vec mode_ratios(const prony::ExponentialModel& model) {
    Vec out(model.modes.size());
    for (std::size_t k = 0; k < model.modes.size(); ++k) out[k] = model.ratio(k);
    return out;
}

inline Vec mode_amplitudes(const prony::ExponentialModel& model) {
    Vec out(model.modes.size());
    for (std::size_t k = 0; k < model.modes.size(); ++k) out[k] = model.modes[k].amplitude;
    return out;
}

/// Greedy nearest-neighbor pairing; returns the largest pairing distance.
/// Robust replacement for sorted pairing when magnitudes tie.
inline double match_distance(const Vec& expected, const Vec& actual) {
    if (expected.size() != actual.size()) throw std::logic_error("match_distance: size mismatch");
    std::vector<bool> used(actual.size(), false);
    double worst = 0.0;
    for (const Complex& e : expected) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_index = 0;
        for (std::size_t j = 0; j < actual.size(); ++j) {
            if (used[j]) continue;
            double d = std::abs(e - actual[j]);
            if (d < best) {
                best = d;
                best_index = j;
            }
        }
        used[best_index] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace testsupport
