#pragma once

// Superpolynomials R[x_1..x_m] (x) Lambda_2n and the differential-operator
// algebra on them: super Laplacian, Euler operators, R^2 multiplication,
// Laplace-Beltrami, osp(m|2n) generators, and (unscaled) ladder operators.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "superspace/grassmann.hpp"
#include "superspace/scalar.hpp"

namespace superspace {

/// Canonical term key: bosonic exponent sequence plus fermionic mask,
/// ordered lexicographically for deterministic serialization.
struct TermKey {
    std::vector<std::uint32_t> bos;
    FermionicMask mask = 0;

    friend bool operator<(const TermKey& a, const TermKey& b) {
        if (a.bos != b.bos) return a.bos < b.bos;
        return a.mask < b.mask;
    }
    friend bool operator==(const TermKey& a, const TermKey& b) {
        return a.bos == b.bos && a.mask == b.mask;
    }

    unsigned degree() const {
        unsigned d = detail::mask_degree(mask);
        for (auto e : bos) d += e;
        return d;
    }
};

class SuperPolynomial {
public:
    SuperPolynomial(int m, int n) : m_(m), n_(n) {
        if (m < 0 || n < 0 || n > 15) throw IndexOutOfRange("SuperPolynomial: bad (m, n)");
    }

    static SuperPolynomial zero(int m, int n) { return SuperPolynomial(m, n); }

    static SuperPolynomial scalar(int m, int n, GaussianRational c) {
        SuperPolynomial p(m, n);
        p.add_term(TermKey{std::vector<std::uint32_t>(m, 0), 0}, std::move(c));
        return p;
    }

    static SuperPolynomial one(int m, int n) { return scalar(m, n, GaussianRational(1)); }

    /// Bosonic variable x_i, 1-based.
    static SuperPolynomial variable(int m, int n, int i) {
        if (i < 1 || i > m) throw IndexOutOfRange("variable index out of range");
        SuperPolynomial p(m, n);
        TermKey key{std::vector<std::uint32_t>(m, 0), 0};
        key.bos[i - 1] = 1;
        p.add_term(key, GaussianRational(1));
        return p;
    }

    /// Fermionic variable x`_j, 1-based.
    static SuperPolynomial ferm_variable(int m, int n, int j) {
        if (j < 1 || j > 2 * n) throw IndexOutOfRange("fermionic variable index out of range");
        SuperPolynomial p(m, n);
        p.add_term(TermKey{std::vector<std::uint32_t>(m, 0), FermionicMask(1) << (j - 1)},
                   GaussianRational(1));
        return p;
    }

    static SuperPolynomial monomial(int m, int n, TermKey key, GaussianRational c) {
        SuperPolynomial p(m, n);
        p.add_term(std::move(key), std::move(c));
        return p;
    }

    static SuperPolynomial r2(int m, int n) {
        SuperPolynomial p(m, n);
        for (int i = 1; i <= m; ++i) {
            TermKey key{std::vector<std::uint32_t>(m, 0), 0};
            key.bos[i - 1] = 2;
            p.add_term(key, GaussianRational(1));
        }
        return p;
    }

    static SuperPolynomial theta2(int m, int n) {
        SuperPolynomial p(m, n);
        for (int j = 0; j < n; ++j)
            p.add_term(TermKey{std::vector<std::uint32_t>(m, 0), FermionicMask(3) << (2 * j)},
                       GaussianRational(Rational(-1)));
        return p;
    }

    /// R^2 = r^2 + theta^2.
    static SuperPolynomial R2(int m, int n) { return r2(m, n) + theta2(m, n); }

    /// Finite expansion of exp(c * theta^2).
    static SuperPolynomial exp_theta2(int m, int n, const Rational& c) {
        return embed(m, GrassmannElement::exp_theta2(n, c));
    }

    /// Embed a Grassmann element as a superpolynomial constant in x.
    static SuperPolynomial embed(int m, const GrassmannElement& f) {
        SuperPolynomial p(m, f.n());
        for (const auto& [mask, c] : f.terms())
            p.add_term(TermKey{std::vector<std::uint32_t>(m, 0), mask}, c);
        return p;
    }

    int m() const { return m_; }
    int n() const { return n_; }
    long super_dim() const { return static_cast<long>(m_) - 2 * n_; }
    const std::map<TermKey, GaussianRational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    GaussianRational coefficient(const TermKey& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? GaussianRational() : it->second;
    }

    GaussianRational constant_term() const {
        return coefficient(TermKey{std::vector<std::uint32_t>(m_, 0), 0});
    }

    void add_term(TermKey key, const GaussianRational& c) {
        if (static_cast<int>(key.bos.size()) != m_)
            throw MismatchedDims("term has wrong bosonic arity");
        if ((key.mask >> (2 * n_)) != 0) throw IndexOutOfRange("term mask beyond 2n");
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(std::move(key), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    /// Same polynomial over a larger Grassmann algebra.
    SuperPolynomial embedded(int new_n) const {
        if (new_n < n_) throw IndexOutOfRange("embedded: cannot shrink n");
        SuperPolynomial p(m_, new_n);
        for (const auto& [key, c] : terms_) p.add_term(key, c);
        return p;
    }

    SuperPolynomial conj() const {
        SuperPolynomial p(m_, n_);
        for (const auto& [key, c] : terms_) p.terms_.emplace(key, c.conj());
        return p;
    }

    SuperPolynomial operator-() const {
        SuperPolynomial p(m_, n_);
        for (const auto& [key, c] : terms_) p.terms_.emplace(key, -c);
        return p;
    }

    SuperPolynomial& operator+=(const SuperPolynomial& o) {
        require_same_dims(o);
        for (const auto& [key, c] : o.terms_) add_term(key, c);
        return *this;
    }
    SuperPolynomial& operator-=(const SuperPolynomial& o) { return *this += -o; }

    friend SuperPolynomial operator+(SuperPolynomial a, const SuperPolynomial& b) { return a += b; }
    friend SuperPolynomial operator-(SuperPolynomial a, const SuperPolynomial& b) { return a -= b; }

    SuperPolynomial& operator*=(const GaussianRational& c) {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [key, v] : terms_) v *= c;
        return *this;
    }
    friend SuperPolynomial operator*(SuperPolynomial a, const GaussianRational& c) { return a *= c; }
    friend SuperPolynomial operator*(const GaussianRational& c, SuperPolynomial a) { return a *= c; }

    /// Graded-commutative product; bosonic parts multiply freely, fermionic
    /// parts contribute the Koszul sign.
    friend SuperPolynomial operator*(const SuperPolynomial& a, const SuperPolynomial& b) {
        a.require_same_dims(b);
        SuperPolynomial r(a.m_, a.n_);
        for (const auto& [ka, ca] : a.terms_) {
            for (const auto& [kb, cb] : b.terms_) {
                if (ka.mask & kb.mask) continue;
                TermKey key;
                key.bos.resize(a.m_);
                for (int i = 0; i < a.m_; ++i) key.bos[i] = ka.bos[i] + kb.bos[i];
                key.mask = ka.mask | kb.mask;
                int sign = detail::koszul_sign(ka.mask, kb.mask);
                GaussianRational c = ca * cb;
                if (sign < 0) c = -c;
                r.add_term(std::move(key), c);
            }
        }
        return r;
    }

    SuperPolynomial pow(unsigned e) const {
        SuperPolynomial r = one(m_, n_);
        for (unsigned t = 0; t < e; ++t) r = r * (*this);
        return r;
    }

    friend bool operator==(const SuperPolynomial& a, const SuperPolynomial& b) {
        return a.m_ == b.m_ && a.n_ == b.n_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const SuperPolynomial& a, const SuperPolynomial& b) { return !(a == b); }

    unsigned degree() const {
        unsigned d = 0;
        for (const auto& [key, c] : terms_) d = std::max(d, key.degree());
        return d;
    }

    /// Purely fermionic content as a Grassmann element; requires every term
    /// to have zero bosonic degree.
    GrassmannElement ferm_part() const {
        GrassmannElement f(n_);
        for (const auto& [key, c] : terms_) {
            for (auto e : key.bos)
                if (e != 0) throw Error("ferm_part: polynomial has bosonic content");
            f.add_term(key.mask, c);
        }
        return f;
    }

    void require_same_dims(const SuperPolynomial& o) const {
        if (m_ != o.m_ || n_ != o.n_)
            throw MismatchedDims("superpolynomial dims (" + std::to_string(m_) + "," +
                                 std::to_string(n_) + ") vs (" + std::to_string(o.m_) + "," +
                                 std::to_string(o.n_) + ")");
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [key, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += c.to_string();
            for (int i = 0; i < m_; ++i)
                if (key.bos[i]) s += "*x" + std::to_string(i + 1) +
                                     (key.bos[i] > 1 ? "^" + std::to_string(key.bos[i]) : "");
            FermionicMask mm = key.mask;
            while (mm) {
                int i = std::countr_zero(mm);
                s += "*xf" + std::to_string(i + 1);
                mm &= mm - 1;
            }
        }
        return s;
    }

private:
    int m_, n_;
    std::map<TermKey, GaussianRational> terms_;
};

// ---------------------------------------------------------------------------
// Derivatives and first-order building blocks
// ---------------------------------------------------------------------------

/// d/dx_i, 1-based.
inline SuperPolynomial derive_bos(int i, const SuperPolynomial& f) {
    if (i < 1 || i > f.m()) throw IndexOutOfRange("derive_bos: index out of range");
    SuperPolynomial r(f.m(), f.n());
    for (const auto& [key, c] : f.terms()) {
        std::uint32_t e = key.bos[i - 1];
        if (e == 0) continue;
        TermKey k2 = key;
        k2.bos[i - 1] = e - 1;
        r.add_term(std::move(k2), c * GaussianRational(Rational(static_cast<long>(e))));
    }
    return r;
}

/// Left derivative d/dx`_j, 1-based.
inline SuperPolynomial derive_ferm(int j, const SuperPolynomial& f) {
    if (j < 1 || j > 2 * f.n()) throw IndexOutOfRange("derive_ferm: index out of range");
    FermionicMask bit = FermionicMask(1) << (j - 1);
    SuperPolynomial r(f.m(), f.n());
    for (const auto& [key, c] : f.terms()) {
        if (!(key.mask & bit)) continue;
        int below = std::popcount(key.mask & (bit - 1));
        TermKey k2 = key;
        k2.mask ^= bit;
        r.add_term(std::move(k2), (below & 1) ? -c : c);
    }
    return r;
}

inline SuperPolynomial laplacian_bos(const SuperPolynomial& f) {
    SuperPolynomial r(f.m(), f.n());
    for (int i = 1; i <= f.m(); ++i) r += derive_bos(i, derive_bos(i, f));
    return r;
}

inline SuperPolynomial laplacian_ferm(const SuperPolynomial& f) {
    SuperPolynomial r(f.m(), f.n());
    for (int j = 1; j <= f.n(); ++j)
        r -= derive_ferm(2 * j - 1, derive_ferm(2 * j, f)) * GaussianRational(Rational(4));
    return r;
}

/// Super Laplacian: sum_i d_i^2 - 4 sum_j d_{2j-1} d_{2j}.
inline SuperPolynomial laplacian(const SuperPolynomial& f) {
    return laplacian_bos(f) + laplacian_ferm(f);
}

inline SuperPolynomial euler_bos(const SuperPolynomial& f) {
    SuperPolynomial r(f.m(), f.n());
    for (const auto& [key, c] : f.terms()) {
        long d = 0;
        for (auto e : key.bos) d += e;
        if (d) r.add_term(key, c * GaussianRational(Rational(d)));
    }
    return r;
}

inline SuperPolynomial euler_ferm(const SuperPolynomial& f) {
    SuperPolynomial r(f.m(), f.n());
    for (const auto& [key, c] : f.terms()) {
        int d = detail::mask_degree(key.mask);
        if (d) r.add_term(key, c * GaussianRational(Rational(d)));
    }
    return r;
}

inline SuperPolynomial euler(const SuperPolynomial& f) { return euler_bos(f) + euler_ferm(f); }

/// Multiplication by the supervector component X_i, 1 <= i <= m + 2n.
inline SuperPolynomial supervector_mul(int i, const SuperPolynomial& f) {
    if (i <= f.m()) return SuperPolynomial::variable(f.m(), f.n(), i) * f;
    return SuperPolynomial::ferm_variable(f.m(), f.n(), i - f.m()) * f;
}

/// Derivative with respect to the raised index X^j (the super gradient
/// component): d_{x_j} for j <= m, then 2 d_{x`_{2t}}, -2 d_{x`_{2t-1}}.
inline SuperPolynomial gradient_component(int j, const SuperPolynomial& f) {
    if (j <= f.m()) return derive_bos(j, f);
    int fj = j - f.m();  // 1..2n
    int t = (fj + 1) / 2;
    GaussianRational two(Rational(2));
    if (fj % 2 == 1) return derive_ferm(2 * t, f) * two;
    return derive_ferm(2 * t - 1, f) * -two;
}

// ---------------------------------------------------------------------------
// Operator catalogue
// ---------------------------------------------------------------------------

/// Differential/multiplication operators on superpolynomials.
///
/// Ladder operators are the oscillator creation/annihilation operators without
/// their scalar prefactors (sqrt(2)/2 bosonic, 1/2 fermionic), so that their
/// action stays inside exact arithmetic: a_i^+- = LadderBos+-(i)/sqrt(2) and
/// b_j^+- = LadderFerm+-(j)/2.
struct OperatorKind {
    enum class Tag {
        Laplacian,
        EulerB,
        EulerF,
        Euler,
        R2Mul,
        Theta2Mul,
        LaplaceBeltrami,
        Osp,
        PartialBos,
        PartialFerm,
        LadderBosPlus,
        LadderBosMinus,
        LadderFermPlus,
        LadderFermMinus,
    };

    Tag tag;
    int i = 0;
    int j = 0;

    static OperatorKind Laplacian() { return {Tag::Laplacian}; }
    static OperatorKind EulerB() { return {Tag::EulerB}; }
    static OperatorKind EulerF() { return {Tag::EulerF}; }
    static OperatorKind Euler() { return {Tag::Euler}; }
    static OperatorKind R2Mul() { return {Tag::R2Mul}; }
    static OperatorKind Theta2Mul() { return {Tag::Theta2Mul}; }
    static OperatorKind LaplaceBeltrami() { return {Tag::LaplaceBeltrami}; }
    static OperatorKind Osp(int i, int j) { return {Tag::Osp, i, j}; }
    static OperatorKind PartialBos(int i) { return {Tag::PartialBos, i}; }
    static OperatorKind PartialFerm(int j) { return {Tag::PartialFerm, j}; }
    static OperatorKind LadderBosPlus(int i) { return {Tag::LadderBosPlus, i}; }
    static OperatorKind LadderBosMinus(int i) { return {Tag::LadderBosMinus, i}; }
    static OperatorKind LadderFermPlus(int j) { return {Tag::LadderFermPlus, j}; }
    static OperatorKind LadderFermMinus(int j) { return {Tag::LadderFermMinus, j}; }
};

inline SuperPolynomial apply_operator(const OperatorKind& op, const SuperPolynomial& f) {
    using Tag = OperatorKind::Tag;
    const int m = f.m();
    const int n = f.n();
    const long M = f.super_dim();
    switch (op.tag) {
        case Tag::Laplacian:
            return laplacian(f);
        case Tag::EulerB:
            return euler_bos(f);
        case Tag::EulerF:
            return euler_ferm(f);
        case Tag::Euler:
            return euler(f);
        case Tag::R2Mul:
            return SuperPolynomial::R2(m, n) * f;
        case Tag::Theta2Mul:
            return SuperPolynomial::theta2(m, n) * f;
        case Tag::LaplaceBeltrami: {
            // R^2 nabla^2 - E (M - 2 + E)
            SuperPolynomial ef = euler(f);
            return SuperPolynomial::R2(m, n) * laplacian(f) -
                   euler(ef) - ef * GaussianRational(Rational(M - 2));
        }
        case Tag::Osp: {
            int i = op.i, j = op.j;
            if (i < 1 || j < i || j > m + 2 * n)
                throw IndexOutOfRange("Osp: need 1 <= i <= j <= m+2n");
            bool fi = i > m, fj = j > m;
            SuperPolynomial lhs = supervector_mul(i, gradient_component(j, f));
            SuperPolynomial rhs = supervector_mul(j, gradient_component(i, f));
            return (fi && fj) ? lhs + rhs : lhs - rhs;
        }
        case Tag::PartialBos:
            return derive_bos(op.i, f);
        case Tag::PartialFerm:
            return derive_ferm(op.i, f);
        case Tag::LadderBosPlus:
            return supervector_mul(op.i, f) - derive_bos(op.i, f);
        case Tag::LadderBosMinus:
            return supervector_mul(op.i, f) + derive_bos(op.i, f);
        case Tag::LadderFermPlus: {
            int j = op.i;
            if (j < 1 || j > 2 * n) throw IndexOutOfRange("LadderFermPlus: index");
            GaussianRational two(Rational(2));
            if (j % 2 == 0)  // b+_{2t} = x`_{2t} + 2 d_{2t-1}
                return SuperPolynomial::ferm_variable(m, n, j) * f + derive_ferm(j - 1, f) * two;
            // b+_{2t-1} = x`_{2t-1} - 2 d_{2t}
            return SuperPolynomial::ferm_variable(m, n, j) * f - derive_ferm(j + 1, f) * two;
        }
        case Tag::LadderFermMinus: {
            int j = op.i;
            if (j < 1 || j > 2 * n) throw IndexOutOfRange("LadderFermMinus: index");
            GaussianRational two(Rational(2));
            if (j % 2 == 0)  // b-_{2t} = x`_{2t-1} + 2 d_{2t}
                return SuperPolynomial::ferm_variable(m, n, j - 1) * f + derive_ferm(j, f) * two;
            // b-_{2t-1} = -x`_{2t} + 2 d_{2t-1}
            return -(SuperPolynomial::ferm_variable(m, n, j + 1) * f) + derive_ferm(j, f) * two;
        }
    }
    throw Error("apply_operator: unknown tag");
}

/// Split into homogeneous parts, ascending degree; each part satisfies
/// euler(part) = degree * part.
inline std::vector<std::pair<unsigned, SuperPolynomial>> homogeneous_parts(const SuperPolynomial& f) {
    std::map<unsigned, SuperPolynomial> parts;
    for (const auto& [key, c] : f.terms()) {
        unsigned d = key.degree();
        auto it = parts.find(d);
        if (it == parts.end()) it = parts.emplace(d, SuperPolynomial(f.m(), f.n())).first;
        it->second.add_term(key, c);
    }
    return {parts.begin(), parts.end()};
}

/// Star map applied to the fermionic factor of each term.
inline SuperPolynomial star_ferm(const SuperPolynomial& f) {
    SuperPolynomial r(f.m(), f.n());
    for (const auto& [key, c] : f.terms()) {
        GrassmannElement s = star(GrassmannElement::monomial(f.n(), key.mask, c));
        for (const auto& [mask2, c2] : s.terms()) {
            TermKey k2 = key;
            k2.mask = mask2;
            r.add_term(std::move(k2), c2);
        }
    }
    return r;
}

/// Tilde applied to the fermionic factor of each term.
inline SuperPolynomial tilde_ferm(const SuperPolynomial& f) {
    SuperPolynomial r(f.m(), f.n());
    for (const auto& [key, c] : f.terms()) {
        GrassmannElement s = tilde(GrassmannElement::monomial(f.n(), key.mask, c));
        for (const auto& [mask2, c2] : s.terms()) {
            TermKey k2 = key;
            k2.mask = mask2;
            r.add_term(std::move(k2), c2);
        }
    }
    return r;
}

}  // namespace superspace
