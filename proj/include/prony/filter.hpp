#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "prony/errors.hpp"
#include "prony/linalg.hpp"

namespace prony {

/// IIR transfer function b(z)/a(z) in negative powers of z, with the
/// denominator normalized so a[0] == 1. Numerator degree M = b.size()-1,
/// denominator degree N = a.size()-1.
struct RationalFilter {
    Vec b;
    Vec a;

    std::size_t num_order() const noexcept { return b.empty() ? 0 : b.size() - 1; }
    std::size_t den_order() const noexcept { return a.empty() ? 0 : a.size() - 1; }
};

inline void validate(const RationalFilter& f) {
    if (f.b.empty() || f.a.empty())
        throw InvalidInputError("filter: coefficient vectors must not be empty");
    if (f.a[0] != Complex(1.0))
        throw InvalidInputError("filter: leading denominator coefficient must be 1");
    for (const Complex& z : f.b)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw InvalidInputError("filter: non-finite numerator coefficient");
    for (const Complex& z : f.a)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw InvalidInputError("filter: non-finite denominator coefficient");
}

/// First `count` samples of the causal impulse response, by running the
/// difference equation h[i] = b[i] - sum_{n=1..N} a[n] h[i-n].
inline Vec impulse_response(const RationalFilter& f, std::size_t count) {
    validate(f);
    if (count < 1) throw InvalidInputError("impulse_response: count must be at least 1");
    const std::size_t n_order = f.den_order();
    Vec h(count, Complex(0.0));
    for (std::size_t i = 0; i < count; ++i) {
        Complex acc = i < f.b.size() ? f.b[i] : Complex(0.0);
        const std::size_t lag_max = std::min(n_order, i);
        for (std::size_t n = 1; n <= lag_max; ++n) acc -= f.a[n] * h[i - n];
        h[i] = acc;
    }
    return h;
}

namespace detail {

/// Evaluates sum_k c[k] w^k by Horner's rule.
inline Complex eval_ascending(const Vec& c, Complex w) {
    Complex acc(0.0);
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * w + c[i];
    return acc;
}

} // namespace detail

/// Frequency response H(omega) = b(e^{-j omega}) / a(e^{-j omega}),
/// coefficients applied to e^{-j omega n}. Fails if a requested frequency
/// sits on a pole of the transfer function.
inline Vec frequency_response(const RationalFilter& f, const std::vector<double>& omegas) {
    validate(f);
    Vec out(omegas.size());
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const Complex w = std::polar(1.0, -omegas[i]);
        const Complex den = detail::eval_ascending(f.a, w);
        if (std::abs(den) < 1e-14)
            throw EvaluationError("frequency_response: pole on the unit circle at omega = " +
                                  std::to_string(omegas[i]));
        out[i] = detail::eval_ascending(f.b, w) / den;
    }
    return out;
}

/// Poles of the filter: roots of z^N + a1 z^{N-1} + ... + aN.
inline Vec pole_locations(const RationalFilter& f) {
    validate(f);
    if (f.den_order() == 0) return {};
    return poly_roots(f.a);
}

inline std::vector<double> pole_moduli(const Vec& poles) {
    std::vector<double> mods(poles.size());
    for (std::size_t i = 0; i < poles.size(); ++i) mods[i] = std::abs(poles[i]);
    return mods;
}

/// Stable iff every pole modulus is strictly less than one.
inline bool is_stable(const std::vector<double>& moduli) {
    for (double m : moduli)
        if (!(m < 1.0)) return false;
    return true;
}

} // namespace prony
