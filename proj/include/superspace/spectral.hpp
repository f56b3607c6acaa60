#pragma once

// Coefficient-space model of the Hilbert space of spherical Hermite series:
// sparse expansions over the labels (j, k, l), the tridiagonal actions of
// R^2 and nabla^2, the Fourier transform (pure phases), Casimir and number
// operators, Schwartz norms, Parseval and Heisenberg checks, and the
// divergence demo showing <.|.>_2 does not extend to L_2.

#include <cmath>
#include <complex>
#include <functional>

#include "superspace/basischange.hpp"

namespace superspace {

struct CoeffKey {
    long j = 0, k = 0, l = 1;
    friend bool operator<(const CoeffKey& a, const CoeffKey& b) {
        return std::tie(a.j, a.k, a.l) < std::tie(b.j, b.k, b.l);
    }
    friend bool operator==(const CoeffKey& a, const CoeffKey& b) {
        return a.j == b.j && a.k == b.k && a.l == b.l;
    }
};

/// Finite-support element of the coefficient space: a_{j,k,l} over the
/// <.|.>_2-orthonormal spherical Hermite basis.
class HermiteExpansion {
public:
    HermiteExpansion(int m, int n) : m_(m), n_(n), M_(static_cast<long>(m) - 2 * n) {
        if (M_ <= 0) throw NonPositiveSuperDimension("HermiteExpansion: requires M > 0");
    }

    int m() const { return m_; }
    int n() const { return n_; }
    long M() const { return M_; }
    const std::map<CoeffKey, std::complex<double>>& coeffs() const { return c_; }
    bool empty() const { return c_.empty(); }

    void set(long j, long k, long l, std::complex<double> v) {
        check_key(j, k, l);
        if (v == std::complex<double>(0.0, 0.0))
            c_.erase(CoeffKey{j, k, l});
        else
            c_[CoeffKey{j, k, l}] = v;
    }

    void add(long j, long k, long l, std::complex<double> v) {
        check_key(j, k, l);
        auto key = CoeffKey{j, k, l};
        auto it = c_.find(key);
        std::complex<double> nv = (it == c_.end() ? v : it->second + v);
        if (nv == std::complex<double>(0.0, 0.0)) {
            if (it != c_.end()) c_.erase(it);
        } else {
            c_[key] = nv;
        }
    }

    static HermiteExpansion unit(int m, int n, long j, long k, long l) {
        HermiteExpansion f(m, n);
        f.set(j, k, l, 1.0);
        return f;
    }

    HermiteExpansion& operator+=(const HermiteExpansion& o) {
        require_same_dims(o);
        for (const auto& [key, v] : o.c_) add(key.j, key.k, key.l, v);
        return *this;
    }

    HermiteExpansion& operator*=(std::complex<double> z) {
        if (z == std::complex<double>(0.0, 0.0)) {
            c_.clear();
            return *this;
        }
        for (auto& [key, v] : c_) v *= z;
        return *this;
    }

    friend HermiteExpansion operator+(HermiteExpansion a, const HermiteExpansion& b) {
        return a += b;
    }
    friend HermiteExpansion operator*(HermiteExpansion a, std::complex<double> z) { return a *= z; }

    void require_same_dims(const HermiteExpansion& o) const {
        if (m_ != o.m_ || n_ != o.n_) throw MismatchedDims("expansion dims differ");
    }

private:
    void check_key(long j, long k, long l) const {
        if (j < 0 || k < 0 || l < 1 || l > dim_super_harmonics(m_, n_, static_cast<int>(k)))
            throw IndexOutOfRange("HermiteExpansion: bad (j,k,l)");
    }

    int m_, n_;
    long M_;
    std::map<CoeffKey, std::complex<double>> c_;
};

enum class CoeffOp { R2, Nabla2, EulerPlusM2, FourierPlus, FourierMinus, Casimir, NumberOp };

namespace detail {

inline double t_plus(long M, long j, long k) {
    return std::sqrt(static_cast<double>(j + 1) *
                     (static_cast<double>(j + k) + 0.5 * static_cast<double>(M)));
}

/// (j+1)(j+k+M/2) as an exact rational (squared off-diagonal entry).
inline Rational t_plus_sq_rational(long M, long j, long k) {
    return Rational(j + 1) * Rational(2 * (j + k) + M, 2);
}

/// i^e as an exact complex unit.
inline std::complex<double> i_power(long e) {
    switch (((e % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace detail

/// Casimir eigenvalue (k + M/2 - 2)(k + M/2), exact.
inline Rational casimir_eigenvalue(long M, long k) {
    return Rational(2 * k + M - 4, 2) * Rational(2 * k + M, 2);
}

/// The same value through M/2 (M/2 - 2) + k (k + M - 2).
inline Rational casimir_eigenvalue_via_lb(long M, long k) {
    return Rational(M, 2) * Rational(M - 4, 2) + Rational(k) * Rational(k + M - 2);
}

inline HermiteExpansion apply_coeff(CoeffOp op, const HermiteExpansion& f) {
    const long M = f.M();
    HermiteExpansion out(f.m(), f.n());
    for (const auto& [key, a] : f.coeffs()) {
        const long j = key.j, k = key.k, l = key.l;
        const double diag = 2.0 * j + k + 0.5 * M;
        switch (op) {
            case CoeffOp::R2:
                out.add(j, k, l, diag * a);
                out.add(j + 1, k, l, -detail::t_plus(M, j, k) * a);
                if (j > 0) out.add(j - 1, k, l, -detail::t_plus(M, j - 1, k) * a);
                break;
            case CoeffOp::Nabla2:
                out.add(j, k, l, -diag * a);
                out.add(j + 1, k, l, -detail::t_plus(M, j, k) * a);
                if (j > 0) out.add(j - 1, k, l, -detail::t_plus(M, j - 1, k) * a);
                break;
            case CoeffOp::EulerPlusM2:
                // (E + M/2) = (1/4)[nabla^2, R^2]; equivalently, from the
                // ladder relations, off-diagonal +-t with zero diagonal
                out.add(j + 1, k, l, detail::t_plus(M, j, k) * a);
                if (j > 0) out.add(j - 1, k, l, -detail::t_plus(M, j - 1, k) * a);
                break;
            case CoeffOp::FourierPlus:
                out.add(j, k, l, detail::i_power(2 * j + k) * a);
                break;
            case CoeffOp::FourierMinus:
                out.add(j, k, l, detail::i_power(-(2 * j + k)) * a);
                break;
            case CoeffOp::Casimir:
                out.add(j, k, l, casimir_eigenvalue(M, k).to_double() * a);
                break;
            case CoeffOp::NumberOp:
                out.add(j, k, l, static_cast<double>(2 * j + k) * a);
                break;
        }
    }
    return out;
}

/// <f|g>_2 = sum a conj(b).
inline std::complex<double> inner2_coeff(const HermiteExpansion& f, const HermiteExpansion& g) {
    f.require_same_dims(g);
    const auto& cf = f.coeffs();
    const auto& cg = g.coeffs();
    std::complex<double> s = 0.0;
    const auto& small = cf.size() <= cg.size() ? cf : cg;
    const auto& big = cf.size() <= cg.size() ? cg : cf;
    bool flipped = !(cf.size() <= cg.size());
    for (const auto& [key, v] : small) {
        auto it = big.find(key);
        if (it == big.end()) continue;
        s += flipped ? it->second * std::conj(v) : v * std::conj(it->second);
    }
    return s;
}

inline double norm0(const HermiteExpansion& f) {
    return std::sqrt(std::max(0.0, inner2_coeff(f, f).real()));
}

enum class SchwartzVariant { Spherical, Star };

/// ||f||_r in the spherical Hermite representation:
/// sum |a_{j,k,l}|^2 (2j + k + 1)^(2r).
inline double schwartz_norm(const HermiteExpansion& f, long r) {
    double s = 0.0;
    for (const auto& [key, a] : f.coeffs())
        s += std::norm(a) * std::pow(static_cast<double>(2 * key.j + key.k + 1),
                                     2.0 * static_cast<double>(r));
    return std::sqrt(s);
}

/// Spherical label (j, K, l) -> refined label (j; kp, p, q, lb, t).
inline SphericalKey refine_key(int m, int n, const CoeffKey& key) {
    auto labels = super_labels(m, n, static_cast<int>(key.k));
    const RefinedLabel& lab = labels.at(key.l - 1);
    return SphericalKey{key.j, lab.kp, lab.p, lab.q, lab.l, lab.t};
}

/// Product coefficients of an expansion via the alpha table.
inline ProductCoeffs product_coefficients(const AlphaTable& table, const HermiteExpansion& f) {
    SphericalCoeffs sc;
    for (const auto& [key, a] : f.coeffs()) sc[refine_key(f.m(), f.n(), key)] += a;
    return convert_to_product(table, sc);
}

/// ||f||*_r = sum over product labels of |c|^2 (2i + 2s + p + q + 1)^(2r).
inline double schwartz_norm_star(const AlphaTable& table, const HermiteExpansion& f, long r) {
    double s = 0.0;
    for (const auto& [key, c] : product_coefficients(table, f))
        s += std::norm(c) * std::pow(static_cast<double>(2 * key.i + 2 * key.s + key.p + key.q + 1),
                                     2.0 * static_cast<double>(r));
    return std::sqrt(s);
}

struct HeisenbergResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool saturated = false;
};

/// ||R f||_0 ||R F f||_0 >= (M/2) ||f||_0^2; equality exactly on Gaussians.
inline HeisenbergResult heisenberg_check(const HermiteExpansion& f) {
    HermiteExpansion r2f = apply_coeff(CoeffOp::R2, f);
    HermiteExpansion Ff = apply_coeff(CoeffOp::FourierPlus, f);
    HermiteExpansion r2Ff = apply_coeff(CoeffOp::R2, Ff);
    double a = std::max(0.0, inner2_coeff(f, r2f).real());
    double b = std::max(0.0, inner2_coeff(Ff, r2Ff).real());
    HeisenbergResult res;
    res.lhs = std::sqrt(a) * std::sqrt(b);
    double n0 = norm0(f);
    res.rhs = 0.5 * static_cast<double>(f.M()) * n0 * n0;
    res.saturated = std::fabs(res.lhs - res.rhs) < 1e-10;
    return res;
}

/// |<f|g>_2 - <F+ f|F+ g>_2|.
inline double parseval_check(const HermiteExpansion& f, const HermiteExpansion& g) {
    std::complex<double> lhs = inner2_coeff(f, g);
    std::complex<double> rhs = inner2_coeff(apply_coeff(CoeffOp::FourierPlus, f),
                                            apply_coeff(CoeffOp::FourierPlus, g));
    return std::abs(lhs - rhs);
}

/// Partial values <f_r|f_r>_2 for f = sum_{i>=1} (1/i) phi^b_{i,0,1} phi^f_{0,0,1};
/// the sum starts at i = 1 since the 1/i coefficient is undefined at i = 0.
inline std::vector<double> divergence_demo(const AlphaTable& table, long r_max) {
    if (r_max < 1 || r_max > 10000)
        throw IndexConstraintViolated("divergence_demo: need 1 <= r_max <= 10^4");
    std::vector<double> out;
    out.reserve(r_max);
    double acc = 0.0;
    for (long i = 1; i <= r_max; ++i) {
        double si = 0.0;
        for (long k = 0; k <= std::min<long>(table.n(), i); ++k) {
            double b = table.beta(i, 0, 0, 0, k);
            si += b * b;
        }
        acc += si / (static_cast<double>(i) * static_cast<double>(i));
        out.push_back(acc);
    }
    return out;
}

}  // namespace superspace
