#include <catch2/catch.hpp>

#include "helpers.hpp"
#include "superspace/io_json.hpp"

using namespace superspace;

namespace {
GrassmannElement mono(int n, FermionicMask mask) {
    return GrassmannElement::monomial(n, mask, GaussianRational(1));
}
}  // namespace

TEST_CASE("product examples") {
    auto x1 = GrassmannElement::generator(1, 1);
    auto x2 = GrassmannElement::generator(1, 2);
    REQUIRE(x1 * x2 == mono(1, 0b11));
    REQUIRE(x2 * x1 == -mono(1, 0b11));
    REQUIRE((x1 * x1).is_zero());
    REQUIRE_THROWS_AS(x1 * GrassmannElement::generator(2, 1), MismatchedN);
}

TEST_CASE("associativity and supercommutation on all monomials, n <= 3") {
    for (int n = 1; n <= 3; ++n) {
        FermionicMask top = (FermionicMask(1) << (2 * n));
        for (FermionicMask a = 0; a < top; ++a) {
            for (FermionicMask b = 0; b < top; ++b) {
                GrassmannElement ab = mono(n, a) * mono(n, b);
                // supercommutation: a b = (-1)^{|a||b|} b a
                GrassmannElement ba = mono(n, b) * mono(n, a);
                int sgn = (detail::mask_degree(a) * detail::mask_degree(b)) % 2 ? -1 : 1;
                REQUIRE(ab == (sgn < 0 ? -ba : ba));
                for (FermionicMask c = 0; c < top; ++c) {
                    if (n == 3 && ((a + b + c) % 7 != 0)) continue;  // thin out the n=3 cube
                    REQUIRE((mono(n, a) * mono(n, b)) * mono(n, c) ==
                            mono(n, a) * (mono(n, b) * mono(n, c)));
                }
            }
        }
    }
}

TEST_CASE("left derivative examples") {
    auto x1x2 = mono(1, 0b11);
    REQUIRE(gr_derive(1, x1x2) == GrassmannElement::generator(1, 2));
    REQUIRE(gr_derive(2, x1x2) == -GrassmannElement::generator(1, 1));
    REQUIRE(gr_derive(1, GrassmannElement::one(1)).is_zero());
    REQUIRE_THROWS_AS(gr_derive(3, x1x2), IndexOutOfRange);
}

TEST_CASE("berezin: derivative string vs laplacian power, exhaustive n <= 3") {
    for (int n = 1; n <= 3; ++n) {
        Rational fourn_nfact = Rational(1);
        for (int i = 0; i < n; ++i) fourn_nfact *= Rational(4);
        fourn_nfact *= factorial(static_cast<unsigned long>(n));
        for (FermionicMask a = 0; a < (FermionicMask(1) << (2 * n)); ++a) {
            GrassmannElement f = mono(n, a);
            PiScaled direct = berezin(f);
            GrassmannElement lap = f;
            for (int i = 0; i < n; ++i) lap = gr_laplacian(lap);
            GaussianRational c0 = lap.coefficient(0) * GaussianRational(Rational(1) / fourn_nfact);
            PiScaled via_lap = c0.is_zero() ? PiScaled::zero() : PiScaled(c0, -2 * n);
            REQUIRE(direct == via_lap);
        }
    }
}

TEST_CASE("berezin examples at n = 1") {
    REQUIRE(berezin(mono(1, 0b11)) == PiScaled(GaussianRational(1), -2));
    REQUIRE(berezin(GrassmannElement::one(1)).is_zero());
    // theta^2 = -x1 x2
    REQUIRE(berezin(GrassmannElement::theta2(1)) == PiScaled(GaussianRational(Rational(-1)), -2));
}

TEST_CASE("star map: defining identity on every monomial, n <= 3") {
    for (int n = 1; n <= 3; ++n) {
        FermionicMask full = (FermionicMask(1) << (2 * n)) - 1;
        for (FermionicMask a = 0; a <= full; ++a) {
            GrassmannElement lhs = mono(n, a) * star(mono(n, a));
            int k = detail::mask_degree(a);
            Rational scale = (k >= n) ? Rational(pow2_mpz(k - n))
                                      : Rational(mpz_class(1), pow2_mpz(n - k));
            REQUIRE(lhs == GrassmannElement::monomial(n, full, GaussianRational(scale)));
        }
    }
}

TEST_CASE("star examples at n = 1") {
    REQUIRE(star(GrassmannElement::one(1)) ==
            GrassmannElement::monomial(1, 0b11, GaussianRational(Rational(1, 2))));
    REQUIRE(star(GrassmannElement::generator(1, 1)) == GrassmannElement::generator(1, 2));
    REQUIRE(star(mono(1, 0b11)) == GrassmannElement::scalar(1, GaussianRational(Rational(2))));
}

TEST_CASE("tilde: generator rules, double tilde, antihomomorphism") {
    REQUIRE(tilde(GrassmannElement::generator(1, 1)) == GrassmannElement::generator(1, 2));
    REQUIRE(tilde(tilde(GrassmannElement::generator(1, 1))) ==
            -GrassmannElement::generator(1, 1));
    REQUIRE(tilde(mono(1, 0b11)) == -mono(1, 0b11));
    for (int n = 1; n <= 3; ++n) {
        for (FermionicMask a = 0; a < (FermionicMask(1) << (2 * n)); ++a) {
            int d = detail::mask_degree(a);
            GrassmannElement twice = tilde(tilde(mono(n, a)));
            REQUIRE(twice == (d % 2 ? -mono(n, a) : mono(n, a)));
        }
    }
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        GrassmannElement a = testgen::random_grassmann(rng, n);
        GrassmannElement b = testgen::random_grassmann(rng, n);
        REQUIRE(tilde(a * b) == tilde(b) * tilde(a));
    }
}

TEST_CASE("lambda inner product: formula vs berezin-star route") {
    std::mt19937_64 rng(515151);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        GrassmannElement f = testgen::random_grassmann(rng, n);
        GrassmannElement g = testgen::random_grassmann(rng, n);
        REQUIRE(inner_lambda(f, g) == berezin(f * star(g.conj())));
        // Hermitian symmetry
        REQUIRE(inner_lambda(f, g) == inner_lambda(g, f).conj());
    }
}

TEST_CASE("lambda inner product: Gram diagonal on monomials is positive") {
    for (int n = 1; n <= 3; ++n) {
        for (FermionicMask a = 0; a < (FermionicMask(1) << (2 * n)); ++a) {
            for (FermionicMask b = 0; b < (FermionicMask(1) << (2 * n)); ++b) {
                PiScaled v = inner_lambda(mono(n, a), mono(n, b));
                if (a != b) {
                    REQUIRE(v.is_zero());
                } else {
                    REQUIRE(v.coeff().re().sign() > 0);
                    REQUIRE(v.half_pi_exp() == -2 * n);
                }
            }
        }
    }
}

TEST_CASE("grassmann json round trip") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 10; ++t) {
        GrassmannElement f = testgen::random_grassmann(rng, 2);
        REQUIRE(grassmann_from_json(to_json(f)) == f);
    }
}

TEST_CASE("lambda inner product examples at n = 1") {
    REQUIRE(inner_lambda(GrassmannElement::one(1), GrassmannElement::one(1)) ==
            PiScaled(GaussianRational(Rational(1, 2)), -2));
    REQUIRE(inner_lambda(GrassmannElement::generator(1, 1), GrassmannElement::generator(1, 2))
                .is_zero());
    GrassmannElement gf = GrassmannElement::exp_theta2(1, Rational(-1, 2));
    REQUIRE(inner_lambda(gf, gf) == PiScaled(GaussianRational(1), -2));
}
