#pragma once

// Exact scalar arithmetic: rationals, Gaussian rationals, half-integers,
// and rational multiples of half-integer powers of pi.  Everything in the
// library computes in these types; doubles appear only through to_float().

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

#include "superspace/errors.hpp"

namespace superspace {

/// Arbitrary-precision rational, always reduced, denominator > 0.
class Rational {
public:
    Rational() : q_(0) {}
    Rational(long v) : q_(v) {}  // NOLINT: intentionally implicit
    Rational(const mpz_class& v) : q_(v) {}
    Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}
    Rational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw DivisionByZero("Rational: zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }

    static Rational from_string(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw ParseError("Rational: cannot parse '" + s + "'");
        if (q.get_den() == 0) throw DivisionByZero("Rational: zero denominator");
        q.canonicalize();
        Rational r;
        r.q_ = q;
        return r;
    }

    mpz_class numerator() const { return q_.get_num(); }
    mpz_class denominator() const { return q_.get_den(); }

    bool is_zero() const { return q_ == 0; }
    bool is_one() const { return q_ == 1; }
    int sign() const { return sgn(q_); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw DivisionByZero("Rational: division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

    Rational abs() const { return sign() < 0 ? -*this : *this; }

    double to_double() const { return q_.get_d(); }

    /// Canonical "num/den" with decimal integers, e.g. "-3/4", "0/1".
    std::string to_string() const {
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.to_string();
    }

private:
    explicit Rational(mpq_class q) : q_(std::move(q)) {}
    mpq_class q_;
};

/// Element of Q(i): re + im*i with rational parts.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(Rational re) : re_(std::move(re)) {}  // NOLINT
    GaussianRational(long v) : re_(v) {}                   // NOLINT
    GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussianRational i() { return GaussianRational(Rational(0), Rational(1)); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }

    GaussianRational conj() const { return GaussianRational(re_, -im_); }

    GaussianRational operator-() const { return GaussianRational(-re_, -im_); }
    GaussianRational& operator+=(const GaussianRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        Rational r = re_ * o.re_ - im_ * o.im_;
        Rational i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        Rational n = o.re_ * o.re_ + o.im_ * o.im_;
        if (n.is_zero()) throw DivisionByZero("GaussianRational: division by zero");
        GaussianRational t = *this;
        t *= o.conj();
        re_ = t.re_ / n;
        im_ = t.im_ / n;
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }

    std::string to_string() const {
        if (im_.is_zero()) return re_.to_string();
        return "(" + re_.to_string() + " + " + im_.to_string() + "*i)";
    }

    friend std::ostream& operator<<(std::ostream& os, const GaussianRational& z) {
        return os << z.to_string();
    }

private:
    Rational re_;
    Rational im_;
};

/// Half-integer: value = twice/2.  Used for M/2 and Laguerre parameters.
class HalfInt {
public:
    HalfInt() : twice_(0) {}
    HalfInt(long v) : twice_(2 * v) {}  // NOLINT: whole integers convert implicitly
    static HalfInt halves(long t) {
        HalfInt h;
        h.twice_ = t;
        return h;
    }

    long twice() const { return twice_; }
    bool is_integer() const { return twice_ % 2 == 0; }
    long as_integer() const {
        if (!is_integer()) throw Error("HalfInt: not an integer: " + to_string());
        return twice_ / 2;
    }

    Rational to_rational() const { return Rational(twice_, 2); }
    double to_double() const { return 0.5 * static_cast<double>(twice_); }

    HalfInt operator-() const { return halves(-twice_); }
    friend HalfInt operator+(HalfInt a, HalfInt b) { return halves(a.twice_ + b.twice_); }
    friend HalfInt operator-(HalfInt a, HalfInt b) { return halves(a.twice_ - b.twice_); }
    friend bool operator==(HalfInt a, HalfInt b) { return a.twice_ == b.twice_; }
    friend bool operator!=(HalfInt a, HalfInt b) { return a.twice_ != b.twice_; }
    friend bool operator<(HalfInt a, HalfInt b) { return a.twice_ < b.twice_; }
    friend bool operator<=(HalfInt a, HalfInt b) { return a.twice_ <= b.twice_; }
    friend bool operator>(HalfInt a, HalfInt b) { return a.twice_ > b.twice_; }
    friend bool operator>=(HalfInt a, HalfInt b) { return a.twice_ >= b.twice_; }

    std::string to_string() const {
        if (is_integer()) return std::to_string(twice_ / 2);
        return std::to_string(twice_) + "/2";
    }

private:
    long twice_;
};

/// Exact scalar of the form coeff * pi^(half_pi_exp / 2).
///
/// The canonical zero has exponent 0.  Addition is defined only between
/// equal exponents; a mismatch throws MismatchedPiExponent rather than
/// coercing, since the quantities of interest never mix pi powers.
class PiScaled {
public:
    PiScaled() = default;
    PiScaled(GaussianRational c) : coeff_(std::move(c)) {}  // NOLINT
    PiScaled(Rational c) : coeff_(std::move(c)) {}          // NOLINT
    PiScaled(long c) : coeff_(Rational(c)) {}               // NOLINT
    PiScaled(GaussianRational c, long half_pi_exp) : coeff_(std::move(c)), half_pi_(half_pi_exp) {
        if (coeff_.is_zero()) half_pi_ = 0;
    }

    static PiScaled zero() { return PiScaled(); }

    const GaussianRational& coeff() const { return coeff_; }
    long half_pi_exp() const { return half_pi_; }
    bool is_zero() const { return coeff_.is_zero(); }

    PiScaled conj() const { return PiScaled(coeff_.conj(), half_pi_); }
    PiScaled operator-() const { return PiScaled(-coeff_, half_pi_); }

    PiScaled& operator+=(const PiScaled& o) {
        if (o.is_zero()) return *this;
        if (is_zero()) {
            *this = o;
            return *this;
        }
        if (half_pi_ != o.half_pi_)
            throw MismatchedPiExponent("PiScaled: adding pi^(" + std::to_string(half_pi_) +
                                       "/2) to pi^(" + std::to_string(o.half_pi_) + "/2)");
        coeff_ += o.coeff_;
        if (coeff_.is_zero()) half_pi_ = 0;
        return *this;
    }
    PiScaled& operator-=(const PiScaled& o) { return *this += -o; }
    PiScaled& operator*=(const PiScaled& o) {
        coeff_ *= o.coeff_;
        half_pi_ += o.half_pi_;
        if (coeff_.is_zero()) half_pi_ = 0;
        return *this;
    }

    friend PiScaled operator+(PiScaled a, const PiScaled& b) { return a += b; }
    friend PiScaled operator-(PiScaled a, const PiScaled& b) { return a -= b; }
    friend PiScaled operator*(PiScaled a, const PiScaled& b) { return a *= b; }

    PiScaled inverse() const {
        if (is_zero()) throw DivisionByZero("PiScaled: inverse of zero");
        return PiScaled(GaussianRational(1) / coeff_, -half_pi_);
    }

    friend bool operator==(const PiScaled& a, const PiScaled& b) {
        return a.coeff_ == b.coeff_ && a.half_pi_ == b.half_pi_;
    }
    friend bool operator!=(const PiScaled& a, const PiScaled& b) { return !(a == b); }

    std::string to_string() const {
        std::string s = coeff_.to_string();
        if (half_pi_ != 0) s += " * pi^(" + std::to_string(half_pi_) + "/2)";
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const PiScaled& p) {
        return os << p.to_string();
    }

private:
    GaussianRational coeff_;
    long half_pi_ = 0;
};

inline mpz_class pow2_mpz(unsigned long k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, k);
    return r;
}

inline mpz_class factorial_mpz(unsigned long n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

inline Rational factorial(unsigned long n) { return Rational(factorial_mpz(n)); }

inline mpz_class binomial_mpz(long n, long k) {
    if (k < 0 || k > n) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return b;
}

inline Rational binomial(long n, long k) { return Rational(binomial_mpz(n, k)); }

/// Pochhammer symbol (a)_j = a (a+1) ... (a+j-1), exact.
inline Rational pochhammer(HalfInt a, unsigned long j) {
    Rational p(1);
    Rational x = a.to_rational();
    for (unsigned long t = 0; t < j; ++t) {
        p *= x;
        x += Rational(1);
    }
    return p;
}

/// Gamma at a positive half-integer argument, exact.
/// Integer a gives ((a-1)!, exponent 0); half-odd a gives (rational, exponent 1).
inline PiScaled gamma_half(HalfInt a) {
    if (a.twice() <= 0)
        throw NonPositiveArgument("gamma_half: argument " + a.to_string() + " must be > 0");
    if (a.is_integer())
        return PiScaled(GaussianRational(factorial(static_cast<unsigned long>(a.as_integer() - 1))), 0);
    // Gamma(a) = (1/2)_{a - 1/2} * Gamma(1/2)
    unsigned long steps = static_cast<unsigned long>((a.twice() - 1) / 2);
    return PiScaled(GaussianRational(pochhammer(HalfInt::halves(1), steps)), 1);
}

/// Ratio Gamma(a + j) / Gamma(a) without requiring positivity of a itself.
inline Rational gamma_ratio(HalfInt a, unsigned long j) { return pochhammer(a, j); }

/// The single float-conversion gateway.
inline std::complex<double> to_float(const PiScaled& x) {
    static const double kPi = 3.14159265358979323846264338327950288;
    static const double kSqrtPi = 1.77245385090551602729816748334114518;
    long h = x.half_pi_exp();
    double scale = 1.0;
    long q = h / 2;
    long r = h % 2;  // sign of r matches sign of h
    if (q >= 0)
        for (long t = 0; t < q; ++t) scale *= kPi;
    else
        for (long t = 0; t < -q; ++t) scale /= kPi;
    if (r == 1) scale *= kSqrtPi;
    if (r == -1) scale /= kSqrtPi;
    return x.coeff().to_complex() * scale;
}

inline double to_float_real(const PiScaled& x) { return to_float(x).real(); }

}  // namespace superspace
