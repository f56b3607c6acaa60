#pragma once

// Change of basis between the spherical super Hermite functions and the
// bosonic x fermionic product basis: the alpha/beta coefficients, their
// recursion, closed forms, the exact <.|.>_1 oracle, expansion conversion,
// and the empirical growth-bound report.

#include <cmath>
#include <complex>
#include <mutex>
#include <tuple>

#include "superspace/hermite.hpp"

namespace superspace {

/// Table of change-of-basis coefficients alpha_{j,k,p,q,s} for fixed (m, n).
///
/// Production path: the j-recursion seeded at the j = 0 closed form; the
/// closed s = 0 expression and the exact <.|.>_1 oracle are verification
/// paths.  Radicands are exact rationals; the square root is the only float
/// step.
class AlphaTable {
public:
    AlphaTable(int m, int n) : m_(m), n_(n), M_(static_cast<long>(m) - 2 * n) {
        if (M_ <= 0) throw NonPositiveSuperDimension("AlphaTable: requires M > 0");
    }

    int m() const { return m_; }
    int n() const { return n_; }
    long M() const { return M_; }

    /// Structural support: alpha is zero outside this window.
    bool in_support(long j, long k, long p, long q, long s) const {
        check_args(j, k, p, q, s);
        return k <= n_ - q && s <= std::min<long>(n_ - q, j + k);
    }

    double alpha(long j, long k, long p, long q, long s) const {
        if (!in_support(j, k, p, q, s)) return 0.0;
        std::lock_guard<std::mutex> lock(mu_);
        return alpha_rec(j, k, p, q, s);
    }

    /// beta_{i,s,p,q,k} = (-1)^{k-s} alpha_{i+s-k,k,p,q,s}.
    double beta(long i, long s, long p, long q, long k) const {
        check_args(i, k, p, q, s);
        if (k > std::min<long>(n_ - q, i + s)) return 0.0;
        if (i + s - k < 0) return 0.0;
        double a = alpha(i + s - k, k, p, q, s);
        return ((k - s) % 2 != 0) ? -a : a;
    }

    /// Exact squared seed |alpha_{0,k,p,q,s}|^2 from the closed form.
    Rational alpha_sq_seed(long k, long p, long q, long s) const {
        check_args(0, k, p, q, s);
        if (k > n_ - q || s > k) return Rational(0);
        // C(k,s) * Gamma(m/2+p+k)/Gamma(m/2+p+k-s)
        //        * Gamma(M/2+p+q+k-1)/Gamma(M/2+p+q+2k-1) * (n-q-s)!/(n-q-k)!
        Rational v = binomial(k, s) *
                     pochhammer(HalfInt::halves(m_ + 2 * (p + k - s)), static_cast<unsigned long>(s)) *
                     factorial(static_cast<unsigned long>(n_ - q - s)) /
                     factorial(static_cast<unsigned long>(n_ - q - k));
        Rational denom = pochhammer(HalfInt::halves(M_ + 2 * (p + q + k - 1)),
                                    static_cast<unsigned long>(k));
        return v / denom;
    }

    /// Exact squared value along the s = 0 chain (the recursion squared).
    Rational alpha_sq_s0(long j, long k, long p, long q) const {
        check_args(j, k, p, q, 0);
        if (k > n_ - q) return Rational(0);
        Rational v = alpha_sq_seed(k, p, q, 0);
        for (long jj = 1; jj <= j; ++jj) {
            Rational num = Rational(jj + k) *
                           (Rational(2 * (jj + k + p) + m_ - 2) / Rational(2));
            Rational den = Rational(jj) *
                           (Rational(2 * (jj + 2 * k + p + q) + M_ - 2) / Rational(2));
            v *= num / den;
        }
        return v;
    }

    /// Closed s = 0 form evaluated in float (verification path).
    double alpha_s0_closed(long j, long k, long p, long q) const {
        Rational ratio = binomial(j + k, j) *
                         pochhammer(HalfInt::halves(m_ + 2 * (k + p)), static_cast<unsigned long>(j)) /
                         pochhammer(HalfInt::halves(M_ + 2 * (2 * k + p + q)),
                                    static_cast<unsigned long>(j));
        double seed = alpha(0, k, p, q, 0);
        return std::sqrt(ratio.to_double()) * seed;
    }

    /// Independent oracle: exact <phi_{j,k,p,q,1,1} | phi^b phi^f>_1 on
    /// unnormalized functions divided by the exact norms, in float.
    double alpha_oracle(long j, long k, long p, long q, long s) const {
        if (!in_support(j, k, p, q, s)) return 0.0;
        auto [num, den_sq] = oracle_parts(j, k, p, q, s);
        double x = to_float(num).real();
        return x / std::sqrt(to_float(den_sq).real());
    }

    /// Exact squared oracle value with its sign: sign * alpha^2 as a rational.
    Rational alpha_sq_oracle(long j, long k, long p, long q, long s) const {
        if (!in_support(j, k, p, q, s)) return Rational(0);
        auto [num, den_sq] = oracle_parts(j, k, p, q, s);
        PiScaled sq = num * num * den_sq.inverse();
        if (!sq.coeff().is_real() || sq.half_pi_exp() != 0)
            throw Error("alpha_sq_oracle: non-real or pi-scaled square");
        Rational v = sq.coeff().re();
        return num.coeff().re().sign() < 0 ? -v : v;
    }

private:
    void check_args(long j, long k, long p, long q, long s) const {
        if (j < 0 || k < 0 || p < 0 || q < 0 || s < 0 || q > n_)
            throw IndexConstraintViolated("alpha: indices out of domain");
    }

    // recursion with memoization; callers hold the lock
    double alpha_rec(long j, long k, long p, long q, long s) const {
        if (s < 0 || k > n_ - q || s > std::min<long>(n_ - q, j + k)) return 0.0;
        auto key = std::make_tuple(j, k, p, q, s);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        double v;
        if (j == 0) {
            v = std::sqrt(alpha_sq_seed(k, p, q, s).to_double());
            if (k % 2 != 0) v = -v;
        } else {
            double denom = static_cast<double>(j) *
                           (static_cast<double>(j + 2 * k + p + q) + 0.5 * M_ - 1.0);
            double c1 = (static_cast<double>(j + k - s) *
                         (static_cast<double>(j + k - s + p) + 0.5 * m_ - 1.0)) /
                        denom;
            double c2 = (static_cast<double>(s) * static_cast<double>(n_ - s - q + 1)) / denom;
            v = std::sqrt(c1) * alpha_rec(j - 1, k, p, q, s);
            if (s > 0) v += std::sqrt(c2) * alpha_rec(j - 1, k, p, q, s - 1);
        }
        memo_.emplace(key, v);
        return v;
    }

    /// (numerator integral, product of the three squared norms), both exact.
    std::pair<PiScaled, PiScaled> oracle_parts(long j, long k, long p, long q, long s) const {
        long K = 2 * k + p + q;
        long lsuper = super_label_index(k, p, q);
        HermiteFunction fs = hermite_super(m_, n_, j, K, lsuper);
        HermiteFunction fp = hermite_product(m_, n_, j + k - s, p, 1, s, q, 1);
        PiScaled num = inner1_factored(fs.factored, fp.factored);
        PiScaled den_sq = fs.norm2 * fp.norm2;
        return {num, den_sq};
    }

    /// Index (1-based) of the refined element (k, p, q, l=1, t=1) in H_K.
    long super_label_index(long k, long p, long q) const {
        long K = 2 * k + p + q;
        auto labels = super_labels(m_, n_, static_cast<int>(K));
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i].kp == k && labels[i].p == p && labels[i].q == q && labels[i].l == 1 &&
                labels[i].t == 1)
                return static_cast<long>(i) + 1;
        throw IndexConstraintViolated("alpha: no refined label for (k,p,q)");
    }

    int m_, n_;
    long M_;
    mutable std::mutex mu_;
    mutable std::map<std::tuple<long, long, long, long, long>, double> memo_;
};

// ---------------------------------------------------------------------------
// Expansion conversion
// ---------------------------------------------------------------------------

struct SphericalKey {
    long j = 0, k = 0, p = 0, q = 0, l = 1, t = 1;
    friend bool operator<(const SphericalKey& a, const SphericalKey& b) {
        return std::tie(a.j, a.k, a.p, a.q, a.l, a.t) < std::tie(b.j, b.k, b.p, b.q, b.l, b.t);
    }
};

struct ProductKey {
    long i = 0, p = 0, l = 1, s = 0, q = 0, t = 1;
    friend bool operator<(const ProductKey& a, const ProductKey& b) {
        return std::tie(a.i, a.p, a.l, a.s, a.q, a.t) < std::tie(b.i, b.p, b.l, b.s, b.q, b.t);
    }
};

using SphericalCoeffs = std::map<SphericalKey, std::complex<double>>;
using ProductCoeffs = std::map<ProductKey, std::complex<double>>;

inline ProductCoeffs convert_to_product(const AlphaTable& table, const SphericalCoeffs& in) {
    ProductCoeffs out;
    for (const auto& [key, c] : in) {
        long smax = std::min<long>(table.n() - key.q, key.j + key.k);
        for (long s = 0; s <= smax; ++s) {
            double a = table.alpha(key.j, key.k, key.p, key.q, s);
            if (a == 0.0) continue;
            ProductKey pk{key.j + key.k - s, key.p, key.l, s, key.q, key.t};
            out[pk] += a * c;
        }
    }
    return out;
}

inline SphericalCoeffs convert_to_spherical(const AlphaTable& table, const ProductCoeffs& in) {
    SphericalCoeffs out;
    for (const auto& [key, c] : in) {
        long kmax = std::min<long>(table.n() - key.q, key.i + key.s);
        for (long k = 0; k <= kmax; ++k) {
            double b = table.beta(key.i, key.s, key.p, key.q, k);
            if (b == 0.0) continue;
            SphericalKey sk{key.i + key.s - k, k, key.p, key.q, key.l, key.t};
            out[sk] += b * c;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Growth-bound report
// ---------------------------------------------------------------------------

/// Empirical maxima of |alpha| against the growth bound j^(n-q-2s+2) p^(s-k)
/// and the energy bound (2j+2k+p+q+1)^(n+2).  Zero bases are replaced by 1.
struct BoundReport {
    double max_growth_ratio = 0.0;
    long argmax_j_growth = 0;
    double max_energy_ratio = 0.0;
    long argmax_j_energy = 0;
    std::vector<double> partial_max_growth_by_j;  // running maxima over j' <= j
    std::vector<double> partial_max_energy_by_j;
};

inline BoundReport bound_report(const AlphaTable& table, long j_max, long p_max) {
    if (j_max < 1 || p_max < 1) throw IndexConstraintViolated("bound_report: j_max, p_max >= 1");
    BoundReport rep;
    rep.partial_max_growth_by_j.assign(j_max + 1, 0.0);
    rep.partial_max_energy_by_j.assign(j_max + 1, 0.0);
    const int n = table.n();
    for (long j = 0; j <= j_max; ++j) {
        double jmax_growth = 0.0, jmax_energy = 0.0;
        for (long q = 0; q <= n; ++q) {
            for (long k = 0; k <= n - q; ++k) {
                for (long s = 0; s <= std::min<long>(n - q, j + k); ++s) {
                    for (long p = 0; p <= p_max; ++p) {
                        double a = std::fabs(table.alpha(j, k, p, q, s));
                        if (a == 0.0) continue;
                        double jb = j > 0 ? static_cast<double>(j) : 1.0;
                        double pb = p > 0 ? static_cast<double>(p) : 1.0;
                        double growth =
                            a / std::sqrt(std::pow(jb, static_cast<double>(n - q - 2 * s + 2)) *
                                          std::pow(pb, static_cast<double>(s - k)));
                        double energy =
                            a / std::sqrt(std::pow(static_cast<double>(2 * j + 2 * k + p + q + 1),
                                                   static_cast<double>(n + 2)));
                        jmax_growth = std::max(jmax_growth, growth);
                        jmax_energy = std::max(jmax_energy, energy);
                    }
                }
            }
        }
        if (jmax_growth > rep.max_growth_ratio) {
            rep.max_growth_ratio = jmax_growth;
            rep.argmax_j_growth = j;
        }
        if (jmax_energy > rep.max_energy_ratio) {
            rep.max_energy_ratio = jmax_energy;
            rep.argmax_j_energy = j;
        }
        rep.partial_max_growth_by_j[j] = rep.max_growth_ratio;
        rep.partial_max_energy_by_j[j] = rep.max_energy_ratio;
    }
    return rep;
}

}  // namespace superspace
