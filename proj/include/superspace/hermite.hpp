#pragma once

// Generalized Laguerre polynomials and the Hermite families (super, bosonic,
// fermionic, and bosonic-fermionic products), with the weighted operator
// calculus on P exp(-R^2/2) and the oscillator ladder relations.

#include <mutex>
#include <optional>

#include "superspace/harmonics.hpp"

namespace superspace {

/// Coefficients of L_j^alpha(t) = sum_k (k+alpha+1)_{j-k} / (k! (j-k)!) (-t)^k,
/// index k holds the coefficient of t^k.  Memoized.
inline std::vector<Rational> laguerre(unsigned j, HalfInt alpha) {
    static std::map<std::pair<unsigned, long>, std::vector<Rational>> cache;
    static std::mutex mu;
    std::pair<unsigned, long> key{j, alpha.twice()};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    std::vector<Rational> c(j + 1);
    for (unsigned k = 0; k <= j; ++k) {
        Rational v = pochhammer(alpha + HalfInt(static_cast<long>(k) + 1), j - k) /
                     (factorial(k) * factorial(j - k));
        if (k & 1) v = -v;
        c[k] = v;
    }
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, c);
    return c;
}

/// Evaluate a Laguerre coefficient vector at a double argument.
inline double laguerre_eval(const std::vector<Rational>& c, double t) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k].to_double();
    return acc;
}

/// Orthonormal Laguerre functions l_j(t) = sqrt(j!/Gamma(j+alpha+1))
/// L_j^alpha(t) exp(-t/2) for j = 0..j_max via the stable three-term
/// recurrence (the monomial form cancels catastrophically for large j).
/// Requires alpha > -1.
inline std::vector<double> laguerre_orthonormal(int j_max, double alpha, double t) {
    std::vector<double> l(j_max + 1);
    double g = std::tgamma(alpha + 1.0);
    l[0] = std::exp(-0.5 * t) / std::sqrt(g);
    if (j_max >= 1) l[1] = (alpha + 1.0 - t) * l[0] / std::sqrt(alpha + 1.0);
    for (int j = 1; j < j_max; ++j) {
        l[j + 1] = ((2.0 * j + alpha + 1.0 - t) * l[j] -
                    std::sqrt(j * (j + alpha)) * l[j - 1]) /
                   std::sqrt((j + 1.0) * (j + 1.0 + alpha));
    }
    return l;
}

// ---------------------------------------------------------------------------
// Hermite functions
// ---------------------------------------------------------------------------

struct HermiteLabel {
    enum class Family { Super, Bosonic, Fermionic, Product };
    Family family = Family::Super;
    int m = 0, n = 0;
    long j = 0, k = 0, l = 1;  // radial, harmonic degree, multiplicity
    long s = 0, q = 0, t = 1;  // fermionic radial/degree/multiplicity (product family)
};

/// Unnormalized Hermite function: poly * exp(-R^2/2) with exact squared norm
/// in the family's inner product, plus the exact square of the closed-form
/// normalization constant (they agree; the tests assert it).
struct HermiteFunction {
    HermiteLabel label;
    FactoredFunction factored;
    PiScaled norm2;
    PiScaled closed_norm2;

    SuperPolynomial poly() const { return expand(factored); }
};

namespace detail {

/// zeta_{j,k}^M squared: Gamma(j + k + M/2) / (2 j!).
inline PiScaled zeta_sq(long M, long j, long k) {
    return gamma_half(HalfInt::halves(2 * j + 2 * k + M)) *
           PiScaled(GaussianRational(Rational(1) / (Rational(2) * factorial(static_cast<unsigned long>(j)))));
}

/// Radial part of L_j^alpha(R^2) applied to a base radial profile.
inline RadialPoly laguerre_radial(unsigned j, HalfInt alpha, const RadialPoly& base, int n) {
    auto coeffs = laguerre(j, alpha);
    RadialPoly out;
    for (unsigned c = 0; c < coeffs.size(); ++c) {
        if (coeffs[c].is_zero()) continue;
        RadialPoly part = radial_mul_R2pow(base, static_cast<int>(c), n);
        for (const auto& [ie, v] : part) radial_add(out, ie.first, ie.second, v * coeffs[c]);
    }
    return out;
}

}  // namespace detail

/// Super Hermite function phi_{j,K,l} (unnormalized): L_j^{M/2+K-1}(R^2)
/// times the l-th refined basis element of H_K.
inline HermiteFunction hermite_super(int m, int n, long j, long K, long l) {
    const long M = static_cast<long>(m) - 2 * n;
    if (M <= 0) throw NonPositiveSuperDimension("hermite_super: requires M > 0");
    auto basis = super_harmonic_basis(m, n, static_cast<int>(K));
    if (l < 1 || l > static_cast<long>(basis->elements.size()))
        throw IndexOutOfRange("hermite_super: l out of range");
    const FactoredFunction& harm = basis->factored[l - 1];
    const RefinedLabel& lab = basis->labels[l - 1];

    HermiteFunction out;
    out.label = {HermiteLabel::Family::Super, m, n, j, K, l, 0, lab.q, lab.t};
    out.factored = harm;
    out.factored.radial = detail::laguerre_radial(static_cast<unsigned>(j),
                                                  HalfInt::halves(M + 2 * (K - 1)),
                                                  harm.radial, n);
    out.norm2 = inner2_factored(out.factored, out.factored);
    PiScaled hb = bosonic_harmonics(m, static_cast<int>(lab.p))->norm2.at(lab.l - 1);
    PiScaled hf = fermionic_harmonics(n, static_cast<int>(lab.q))->norm2.at(lab.t - 1);
    out.closed_norm2 = detail::zeta_sq(M, j, K) *
                      PiScaled(GaussianRational(basis->a_const[l - 1] * basis->b_const[l - 1] *
                                                factorial(static_cast<unsigned long>(n - lab.q)))) *
                      hb * hf;
    return out;
}

/// Bosonic Hermite function phi^b_{j,p,l} (unnormalized) on R^m.
inline HermiteFunction hermite_bosonic(int m, long j, long p, long l) {
    auto basis = bosonic_harmonics(m, static_cast<int>(p));
    if (l < 1 || l > static_cast<long>(basis->elements.size()))
        throw IndexOutOfRange("hermite_bosonic: l out of range");
    HermiteFunction out;
    out.label = {HermiteLabel::Family::Bosonic, m, 0, j, p, l, 0, 0, 1};
    out.factored.m = m;
    out.factored.n = 0;
    out.factored.p = p;
    out.factored.l = l;
    RadialPoly base;
    detail::radial_add(base, 0, 0, Rational(1));
    out.factored.radial = detail::laguerre_radial(static_cast<unsigned>(j),
                                                  HalfInt::halves(m + 2 * (p - 1)), base, 0);
    out.norm2 = inner1_factored(out.factored, out.factored);
    out.closed_norm2 = detail::zeta_sq(m, j, p) * basis->norm2.at(l - 1);
    return out;
}

/// Fermionic Hermite function phi^f_{s,q,t} (unnormalized) in Lambda_2n:
/// L_s^{q-n-1}(theta^2) H_q^f(t).
inline HermiteFunction hermite_fermionic(int n, long s, long q, long t) {
    if (s < 0 || q < 0 || s + q > n)
        throw DegreeTooLarge("hermite_fermionic: need s + q <= n");
    auto basis = fermionic_harmonics(n, static_cast<int>(q));
    if (t < 1 || t > static_cast<long>(basis->elements.size()))
        throw IndexOutOfRange("hermite_fermionic: t out of range");
    HermiteFunction out;
    out.label = {HermiteLabel::Family::Fermionic, 0, n, 0, 0, 1, s, q, t};
    out.factored.m = 0;
    out.factored.n = n;
    out.factored.q = q;
    out.factored.t = t;
    auto lag = laguerre(static_cast<unsigned>(s), HalfInt(q - n - 1));
    for (unsigned e = 0; e < lag.size(); ++e)
        if (!lag[e].is_zero() && static_cast<int>(e) <= n)
            detail::radial_add(out.factored.radial, 0, static_cast<int>(e), lag[e]);
    // norm in the weighted Lambda inner product
    GrassmannElement gf = GrassmannElement::exp_theta2(n, Rational(-1, 2));
    GrassmannElement th = GrassmannElement::theta2(n);
    GrassmannElement poly(n);
    {
        GrassmannElement pw = GrassmannElement::one(n);
        for (unsigned e = 0; e < lag.size(); ++e) {
            if (!lag[e].is_zero()) poly += pw * GaussianRational(lag[e]);
            pw = pw * th;
        }
        poly = poly * basis->elements.at(t - 1);
    }
    out.norm2 = inner_lambda(poly * gf, poly * gf);
    out.closed_norm2 =
        basis->norm2.at(t - 1) *
        PiScaled(GaussianRational(factorial(static_cast<unsigned long>(n - q)) /
                                  (factorial(static_cast<unsigned long>(s)) *
                                   factorial(static_cast<unsigned long>(n - s - q)))));
    return out;
}

/// Product function phi^b_{i,p,l} phi^f_{s,q,t} (unnormalized) on R^{m|2n}.
inline HermiteFunction hermite_product(int m, int n, long i, long p, long l, long s, long q,
                                       long t) {
    HermiteFunction fb = hermite_bosonic(m, i, p, l);
    HermiteFunction ff = hermite_fermionic(n, s, q, t);
    HermiteFunction out;
    out.label = {HermiteLabel::Family::Product, m, n, i, p, l, s, q, t};
    out.factored.m = m;
    out.factored.n = n;
    out.factored.p = p;
    out.factored.l = l;
    out.factored.q = q;
    out.factored.t = t;
    for (const auto& [ib, cb] : fb.factored.radial)
        for (const auto& [ie, ce] : ff.factored.radial)
            detail::radial_add(out.factored.radial, ib.first, ie.second, cb * ce);
    out.norm2 = inner1_factored(out.factored, out.factored);
    out.closed_norm2 = fb.closed_norm2 * ff.closed_norm2;
    return out;
}

// ---------------------------------------------------------------------------
// Weighted operator calculus and ladders
// ---------------------------------------------------------------------------

/// nabla^2 (P e^{-R^2/2}) = (nabla^2 P - 2 E P - M P + R^2 P) e^{-R^2/2}.
inline SuperPolynomial weighted_laplacian(const SuperPolynomial& P) {
    return laplacian(P) - euler(P) * GaussianRational(Rational(2)) -
           P * GaussianRational(Rational(P.super_dim())) + SuperPolynomial::R2(P.m(), P.n()) * P;
}

/// E (P e^{-R^2/2}) = (E P - R^2 P) e^{-R^2/2}.
inline SuperPolynomial weighted_euler(const SuperPolynomial& P) {
    return euler(P) - SuperPolynomial::R2(P.m(), P.n()) * P;
}

enum class LadderOp { Raise, Lower, Hamiltonian };

/// Apply the oscillator ladder combinations to P e^{-R^2/2}:
///   Raise       = nabla^2 + R^2 - 2E - M
///   Lower       = nabla^2 + R^2 + 2E + M
///   Hamiltonian = (R^2 - nabla^2) / 2
inline WeightedPolynomial ladder_apply(LadderOp op, const WeightedPolynomial& f) {
    if (f.weight != Weight::HalfGauss) throw Error("ladder_apply: weighted input required");
    const SuperPolynomial& P = f.poly;
    const GaussianRational M(Rational(P.super_dim()));
    SuperPolynomial wl = weighted_laplacian(P);
    SuperPolynomial r2p = SuperPolynomial::R2(P.m(), P.n()) * P;
    SuperPolynomial we = weighted_euler(P);
    switch (op) {
        case LadderOp::Raise:
            return WeightedPolynomial::half_gauss(wl + r2p - we * GaussianRational(Rational(2)) -
                                                  P * M);
        case LadderOp::Lower:
            return WeightedPolynomial::half_gauss(wl + r2p + we * GaussianRational(Rational(2)) +
                                                  P * M);
        case LadderOp::Hamiltonian:
            return WeightedPolynomial::half_gauss((r2p - wl) * GaussianRational(Rational(1, 2)));
    }
    throw Error("ladder_apply: unknown op");
}

/// Fermionic oscillator lowering combination nabla_f^2 + theta^2 + 2E_f - 2n
/// applied to a fully expanded weighted Grassmann element.
inline GrassmannElement fermionic_lower(const GrassmannElement& f) {
    return gr_laplacian(f) + GrassmannElement::theta2(f.n()) * f +
           gr_euler(f) * GaussianRational(Rational(2)) -
           f * GaussianRational(Rational(2 * f.n()));
}

/// Exact ratio c with a = c * b, when the two polynomials are collinear.
inline std::optional<GaussianRational> collinearity_ratio(const SuperPolynomial& a,
                                                          const SuperPolynomial& b) {
    if (b.is_zero()) return a.is_zero() ? std::optional<GaussianRational>(GaussianRational())
                                        : std::nullopt;
    const auto& tb = b.terms();
    GaussianRational ratio = a.coefficient(tb.begin()->first) / tb.begin()->second;
    if ((b * ratio) != a) return std::nullopt;
    return ratio;
}

}  // namespace superspace
