#pragma once

// The Grassmann algebra over 2n anticommuting generators: products with
// Koszul signs, left derivatives, the Berezin integral, the Hodge-type star
// map, the tilde antihomomorphism, and the Lambda_{2n} inner product.
//
// A monomial is a bitmask: bit i set means generator i+1 is present, and
// monomials are stored in canonical ascending generator order.  Every sign
// in the module is derived from explicit transposition counts against that
// canonical order.

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "superspace/scalar.hpp"

namespace superspace {

using FermionicMask = std::uint32_t;

namespace detail {

inline int mask_degree(FermionicMask a) { return std::popcount(a); }

/// Sign of reordering the concatenation (A, B) of two disjoint ascending
/// monomials into one ascending monomial.
inline int koszul_sign(FermionicMask a, FermionicMask b) {
    int inversions = 0;
    FermionicMask bb = b;
    while (bb) {
        int i = std::countr_zero(bb);
        inversions += std::popcount(a >> (i + 1));
        bb &= bb - 1;
    }
    return (inversions & 1) ? -1 : 1;
}

}  // namespace detail

/// Element of Lambda_{2n}: sparse map from monomial masks to coefficients.
class GrassmannElement {
public:
    explicit GrassmannElement(int n) : n_(n) {
        if (n < 0 || n > 15) throw IndexOutOfRange("GrassmannElement: need 0 <= n <= 15");
    }

    static GrassmannElement zero(int n) { return GrassmannElement(n); }

    static GrassmannElement scalar(int n, GaussianRational c) {
        GrassmannElement f(n);
        f.add_term(0, std::move(c));
        return f;
    }

    static GrassmannElement one(int n) { return scalar(n, GaussianRational(1)); }

    /// Single generator x`_j, 1-based.
    static GrassmannElement generator(int n, int j) {
        if (j < 1 || j > 2 * n) throw IndexOutOfRange("generator index out of range");
        GrassmannElement f(n);
        f.add_term(FermionicMask(1) << (j - 1), GaussianRational(1));
        return f;
    }

    static GrassmannElement monomial(int n, FermionicMask mask, GaussianRational c) {
        GrassmannElement f(n);
        f.check_mask(mask);
        f.add_term(mask, std::move(c));
        return f;
    }

    /// theta^2 = -sum_j x`_{2j-1} x`_{2j}.
    static GrassmannElement theta2(int n) {
        GrassmannElement f(n);
        for (int j = 0; j < n; ++j)
            f.add_term(FermionicMask(3) << (2 * j), GaussianRational(Rational(-1)));
        return f;
    }

    /// Finite expansion of exp(c * theta^2) = prod_j (1 - c x`_{2j-1} x`_{2j}).
    static GrassmannElement exp_theta2(int n, const Rational& c) {
        GrassmannElement f = one(n);
        for (int j = 0; j < n; ++j) {
            GrassmannElement factor = one(n);
            factor.add_term(FermionicMask(3) << (2 * j), GaussianRational(-c));
            f = f * factor;
        }
        return f;
    }

    int n() const { return n_; }
    const std::map<FermionicMask, GaussianRational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    FermionicMask full_mask() const { return (FermionicMask(1) << (2 * n_)) - 1; }

    GaussianRational coefficient(FermionicMask mask) const {
        auto it = terms_.find(mask);
        return it == terms_.end() ? GaussianRational() : it->second;
    }

    void add_term(FermionicMask mask, const GaussianRational& c) {
        check_mask(mask);
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(mask, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    GrassmannElement conj() const {
        GrassmannElement f(n_);
        for (const auto& [mask, c] : terms_) f.terms_.emplace(mask, c.conj());
        return f;
    }

    GrassmannElement operator-() const {
        GrassmannElement f(n_);
        for (const auto& [mask, c] : terms_) f.terms_.emplace(mask, -c);
        return f;
    }

    GrassmannElement& operator+=(const GrassmannElement& o) {
        require_same_n(o);
        for (const auto& [mask, c] : o.terms_) add_term(mask, c);
        return *this;
    }
    GrassmannElement& operator-=(const GrassmannElement& o) { return *this += -o; }

    friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
    friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }

    GrassmannElement& operator*=(const GaussianRational& c) {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [mask, v] : terms_) v *= c;
        return *this;
    }
    friend GrassmannElement operator*(GrassmannElement a, const GaussianRational& c) { return a *= c; }
    friend GrassmannElement operator*(const GaussianRational& c, GrassmannElement a) { return a *= c; }

    friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
        a.require_same_n(b);
        GrassmannElement r(a.n_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                if (ma & mb) continue;  // nilpotent generators
                int sign = detail::koszul_sign(ma, mb);
                GaussianRational c = ca * cb;
                if (sign < 0) c = -c;
                r.add_term(ma | mb, c);
            }
        }
        return r;
    }

    friend bool operator==(const GrassmannElement& a, const GrassmannElement& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const GrassmannElement& a, const GrassmannElement& b) { return !(a == b); }

    /// Max monomial degree present (0 for the zero element).
    int degree() const {
        int d = 0;
        for (const auto& [mask, c] : terms_) d = std::max(d, detail::mask_degree(mask));
        return d;
    }

    bool is_homogeneous(int d) const {
        for (const auto& [mask, c] : terms_)
            if (detail::mask_degree(mask) != d) return false;
        return true;
    }

    void require_same_n(const GrassmannElement& o) const {
        if (n_ != o.n_)
            throw MismatchedN("Grassmann operands have n=" + std::to_string(n_) + " and n=" +
                              std::to_string(o.n_));
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [mask, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += c.to_string();
            FermionicMask mm = mask;
            while (mm) {
                int i = std::countr_zero(mm);
                s += "*xf" + std::to_string(i + 1);
                mm &= mm - 1;
            }
        }
        return s;
    }

private:
    void check_mask(FermionicMask mask) const {
        if ((mask >> (2 * n_)) != 0)
            throw IndexOutOfRange("mask uses generators beyond 2n");
    }

    int n_;
    std::map<FermionicMask, GaussianRational> terms_;
};

/// Left partial derivative with respect to x`_j (1-based).
inline GrassmannElement gr_derive(int j, const GrassmannElement& f) {
    if (j < 1 || j > 2 * f.n()) throw IndexOutOfRange("gr_derive: index out of range");
    FermionicMask bit = FermionicMask(1) << (j - 1);
    GrassmannElement r(f.n());
    for (const auto& [mask, c] : f.terms()) {
        if (!(mask & bit)) continue;
        int below = std::popcount(mask & (bit - 1));
        r.add_term(mask ^ bit, (below & 1) ? -c : c);
    }
    return r;
}

inline GrassmannElement gr_mul(const GrassmannElement& f, const GrassmannElement& g) { return f * g; }

/// Fermionic Laplacian: -4 sum_j d_{2j-1} d_{2j}.
inline GrassmannElement gr_laplacian(const GrassmannElement& f) {
    GrassmannElement r(f.n());
    for (int j = 1; j <= f.n(); ++j)
        r -= gr_derive(2 * j - 1, gr_derive(2 * j, f)) * GaussianRational(Rational(4));
    return r;
}

/// Fermionic Euler operator: multiplies each monomial by its degree.
inline GrassmannElement gr_euler(const GrassmannElement& f) {
    GrassmannElement r(f.n());
    for (const auto& [mask, c] : f.terms())
        r.add_term(mask, c * GaussianRational(Rational(detail::mask_degree(mask))));
    return r;
}

/// Berezin integral pi^-n d_{2n} ... d_1, applied as the derivative string.
inline PiScaled berezin(const GrassmannElement& f) {
    GrassmannElement g = f;
    for (int j = 1; j <= 2 * f.n(); ++j) g = gr_derive(j, g);
    GaussianRational top = g.coefficient(0);
    if (top.is_zero()) return PiScaled::zero();
    return PiScaled(top, -2 * f.n());
}

/// Star map: monomial of degree k maps to +-2^(k-n) times the complementary
/// monomial, with the sign fixed by x`_A (star x`_A) = 2^(k-n) x`_1...x`_2n.
/// Linear; conjugation is the caller's job.
inline GrassmannElement star(const GrassmannElement& f) {
    int n = f.n();
    FermionicMask full = (FermionicMask(1) << (2 * n)) - 1;
    GrassmannElement r(n);
    for (const auto& [mask, c] : f.terms()) {
        FermionicMask comp = full ^ mask;
        int k = detail::mask_degree(mask);
        int sign = detail::koszul_sign(mask, comp);
        Rational scale = (k >= n) ? Rational(pow2_mpz(k - n))
                                  : Rational(mpz_class(1), pow2_mpz(n - k));
        GaussianRational coeff = c * GaussianRational(sign < 0 ? -scale : scale);
        r.add_term(comp, coeff);
    }
    return r;
}

/// Tilde antihomomorphism: x`_{2i-1} -> x`_{2i}, x`_{2i} -> -x`_{2i-1},
/// (ab)~ = b~ a~; coefficients are left unchanged.
inline GrassmannElement tilde(const GrassmannElement& f) {
    int n = f.n();
    GrassmannElement r(n);
    for (const auto& [mask, c] : f.terms()) {
        // Image of the reversed product of mapped generators.
        FermionicMask acc = 0;
        int sign = 1;
        // Collect generator indices ascending, then multiply in reverse.
        int idx[32];
        int cnt = 0;
        FermionicMask mm = mask;
        while (mm) {
            idx[cnt++] = std::countr_zero(mm);
            mm &= mm - 1;
        }
        for (int t = cnt - 1; t >= 0; --t) {
            int i = idx[t];
            int mapped = (i % 2 == 0) ? i + 1 : i - 1;
            if (i % 2 == 1) sign = -sign;
            FermionicMask bit = FermionicMask(1) << mapped;
            // append generator `mapped` on the right of acc
            sign *= detail::koszul_sign(acc, bit);
            acc |= bit;
        }
        r.add_term(acc, sign < 0 ? -c : c);
    }
    return r;
}

/// <f|g>_Lambda = (2 pi)^-n sum_A 2^|A| f_A conj(g_A); equals
/// berezin(f * star(conj(g))), which the tests assert.
inline PiScaled inner_lambda(const GrassmannElement& f, const GrassmannElement& g) {
    f.require_same_n(g);
    int n = f.n();
    GaussianRational sum;
    for (const auto& [mask, cf] : f.terms()) {
        GaussianRational cg = g.coefficient(mask);
        if (cg.is_zero()) continue;
        int k = detail::mask_degree(mask);
        sum += cf * cg.conj() * GaussianRational(Rational(pow2_mpz(k)));
    }
    if (sum.is_zero()) return PiScaled::zero();
    sum *= GaussianRational(Rational(mpz_class(1), pow2_mpz(n)));
    return PiScaled(sum, -2 * n);
}

}  // namespace superspace
