#pragma once

// Exact integration: Gaussian-weighted Berezin integration over the full
// superspace, the Pizzetti supersphere integral, and the inner product
// <.|.>_1 on P exp(-R^2/2).  (<.|.>_2 lives with the T map in harmonics.hpp.)

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "superspace/superpoly.hpp"

namespace superspace {

enum class Weight { None, HalfGauss };

/// Polynomial with an implicit exp(-R^2/2) factor when weight == HalfGauss.
struct WeightedPolynomial {
    SuperPolynomial poly;
    Weight weight = Weight::HalfGauss;

    static WeightedPolynomial half_gauss(SuperPolynomial p) {
        return {std::move(p), Weight::HalfGauss};
    }
};

namespace detail {

/// 1D moment: integral over R of x^alpha exp(-x^2) dx.
/// Zero for odd alpha; Gamma((alpha+1)/2) for even alpha (a rational times
/// sqrt(pi); only the rational factor is returned).  Returned by value: the
/// cache may reallocate under another thread once the lock is released.
inline Rational moment_1d(std::uint32_t alpha) {
    static std::vector<Rational> cache{Rational(1)};  // Gamma(1/2) / sqrt(pi)
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::uint32_t idx = alpha / 2;
    while (cache.size() <= idx) {
        // Gamma(a+1) = a Gamma(a) with a = (2 size - 1)/2
        std::size_t s = cache.size();
        cache.push_back(cache[s - 1] * Rational(2 * static_cast<long>(s) - 1, 2));
    }
    return cache[idx];
}

/// Bosonic Gaussian moment of a monomial: integral of x^bos exp(-r^2) dV,
/// divided by pi^(m/2).  Zero if any exponent is odd.
inline Rational bos_moment(const std::vector<std::uint32_t>& bos) {
    Rational p(1);
    for (auto e : bos) {
        if (e & 1) return Rational(0);
        p *= moment_1d(e);
    }
    return p;
}

/// Berezin integral of a bare monomial mask: pi^-n iff mask is full.
inline bool is_full_mask(FermionicMask mask, int n) {
    return mask == ((FermionicMask(1) << (2 * n)) - 1);
}

}  // namespace detail

/// Integral of P exp(-r^2) over R^{m|2n}: bosonic Gaussian moments times the
/// plain Berezin integral of the fermionic factor (no fermionic weight).
inline PiScaled gaussian_integral_bos_weight(const SuperPolynomial& P) {
    const int m = P.m();
    const int n = P.n();
    GaussianRational sum;
    for (const auto& [key, c] : P.terms()) {
        if (!detail::is_full_mask(key.mask, n)) continue;
        Rational mom = detail::bos_moment(key.bos);
        if (mom.is_zero()) continue;
        sum += c * GaussianRational(mom);
    }
    if (sum.is_zero()) return PiScaled::zero();
    return PiScaled(sum, m - 2 * n);
}

/// Integral of P exp(-R^2) over R^{m|2n}; the fermionic Gaussian is expanded
/// by its finite Taylor series.
inline PiScaled gaussian_integral(const SuperPolynomial& P) {
    if (P.n() == 0) return gaussian_integral_bos_weight(P);
    return gaussian_integral_bos_weight(P * SuperPolynomial::exp_theta2(P.m(), P.n(), Rational(-1)));
}

namespace detail {

/// Gamma at any half-odd argument (possibly negative), or positive integer.
/// Used by Pizzetti where k + M/2 can be <= 0 for M <= 0; reciprocal at
/// nonpositive integers is zero.
inline PiScaled reciprocal_gamma_half(HalfInt a) {
    if (a.is_integer()) {
        long v = a.as_integer();
        if (v <= 0) return PiScaled::zero();
        return gamma_half(a).inverse();
    }
    if (a.twice() > 0) return gamma_half(a).inverse();
    // Gamma(a) = Gamma(a + s) / ((a)(a+1)...(a+s-1)) for the half-odd a < 0.
    unsigned long s = static_cast<unsigned long>((1 - a.twice()) / 2 + 1);
    Rational denom = pochhammer(a, s);
    PiScaled g = gamma_half(HalfInt::halves(a.twice() + 2 * static_cast<long>(s)));
    return (g * PiScaled(GaussianRational(Rational(1) / denom))).inverse();
}

}  // namespace detail

/// Pizzetti integral over the supersphere R^2 = 1:
///   sum_k 2 pi^(M/2) / (2^(2k) k! Gamma(k + M/2)) (nabla^(2k) P)(0).
inline PiScaled pizzetti(const SuperPolynomial& P) {
    if (P.m() == 0) throw PurelyFermionic("pizzetti: requires m != 0");
    const long M = P.super_dim();
    PiScaled total = PiScaled::zero();
    SuperPolynomial cur = P;
    for (unsigned k = 0;; ++k) {
        GaussianRational at0 = cur.constant_term();
        if (!at0.is_zero()) {
            PiScaled coeff(GaussianRational(Rational(2) / Rational(pow2_mpz(2 * k)) /
                                            factorial(k)),
                           M);
            coeff *= detail::reciprocal_gamma_half(HalfInt::halves(2 * k + M));
            total += coeff * PiScaled(at0);
        }
        if (cur.is_zero() || 2 * (k + 1) > P.degree()) break;
        cur = laplacian(cur);
    }
    return total;
}

/// <f|g>_1 = integral of f (star conj(g)) over R^{m|2n}, for f, g in
/// P exp(-R^2/2).  The star map acts on the full fermionic content,
/// including the fermionic Gaussian.
inline PiScaled inner1(const WeightedPolynomial& f, const WeightedPolynomial& g) {
    f.poly.require_same_dims(g.poly);
    if (f.weight != Weight::HalfGauss || g.weight != Weight::HalfGauss)
        throw Error("inner1: defined on half-Gaussian weighted polynomials");
    const int m = f.poly.m();
    const int n = f.poly.n();
    SuperPolynomial gf = SuperPolynomial::exp_theta2(m, n, Rational(-1, 2));
    return gaussian_integral_bos_weight((f.poly * gf) * star_ferm(g.poly.conj() * gf));
}

}  // namespace superspace
