#include <catch2/catch.hpp>

#include "helpers.hpp"
#include "superspace/io_json.hpp"

using namespace superspace;

namespace {
bool close(std::complex<double> a, std::complex<double> b, double tol = 1e-12) {
    return std::abs(a - b) <= tol;
}
}  // namespace

TEST_CASE("coefficient operators: worked examples") {
    // Fourier phase on phi_{1,0,1} is exp(i pi) = -1
    auto f = HermiteExpansion::unit(3, 1, 1, 0, 1);
    auto Ff = apply_coeff(CoeffOp::FourierPlus, f);
    REQUIRE(close(Ff.coeffs().begin()->second, {-1.0, 0.0}));

    // Casimir at M = 1, k = 2: (2 + 1/2 - 2)(2 + 1/2) = 5/4
    REQUIRE(casimir_eigenvalue(1, 2) == Rational(5, 4));
    auto g = HermiteExpansion::unit(3, 1, 3, 2, 1);
    auto Cg = apply_coeff(CoeffOp::Casimir, g);
    REQUIRE(close(Cg.coeffs().begin()->second, {1.25, 0.0}));

    // R^2 on phi_{0,0,1} at M = 1
    auto h = HermiteExpansion::unit(3, 1, 0, 0, 1);
    auto Rh = apply_coeff(CoeffOp::R2, h);
    REQUIRE(Rh.coeffs().size() == 2);
    REQUIRE(close(Rh.coeffs().at(CoeffKey{0, 0, 1}), {0.5, 0.0}));
    REQUIRE(close(Rh.coeffs().at(CoeffKey{1, 0, 1}), {-std::sqrt(0.5), 0.0}));
}

TEST_CASE("number operator multiplies by 2j + k") {
    for (long j = 0; j <= 4; ++j)
        for (long k = 0; k <= 3; ++k) {
            auto f = HermiteExpansion::unit(3, 1, j, k, 1);
            auto nf = apply_coeff(CoeffOp::NumberOp, f);
            if (2 * j + k == 0) {
                REQUIRE(nf.coeffs().empty());
            } else {
                REQUIRE(close(nf.coeffs().at(CoeffKey{j, k, 1}),
                              {static_cast<double>(2 * j + k), 0.0}, 0.0));
            }
        }
}

TEST_CASE("casimir eigenvalue: two exact routes agree") {
    for (long M : {1L, 3L}) {
        for (long k = 0; k <= 5; ++k) {
            REQUIRE(casimir_eigenvalue(M, k) == casimir_eigenvalue_via_lb(M, k));
        }
    }
}

TEST_CASE("sl2 in coefficient space: commutator equals 2(E + M/2)") {
    const int m = 3, n = 1;
    for (long k = 0; k <= 2; ++k) {
        long dim = dim_super_harmonics(m, n, static_cast<int>(k));
        for (long j = 0; j <= 6; ++j) {
            auto e = HermiteExpansion::unit(m, n, j, k, 1 + (j % dim));
            auto lhs1 = apply_coeff(CoeffOp::R2, apply_coeff(CoeffOp::Nabla2, e));
            auto lhs2 = apply_coeff(CoeffOp::Nabla2, apply_coeff(CoeffOp::R2, e));
            auto rhs = apply_coeff(CoeffOp::EulerPlusM2, e);
            // (1/4)(nabla^2 R^2 - R^2 nabla^2) = E + M/2, whose off-diagonal
            // entries are the ladder couplings +-sqrt((j+1)(j+k+M/2))
            for (const auto& [key, v] : rhs.coeffs()) {
                std::complex<double> left = 0.0;
                auto it1 = lhs2.coeffs().find(key);
                auto it2 = lhs1.coeffs().find(key);
                if (it1 != lhs2.coeffs().end()) left += it1->second;
                if (it2 != lhs1.coeffs().end()) left -= it2->second;
                REQUIRE(close(left * 0.25, v, 1e-12));
                if (key.j == j + 1) {
                    double t = std::sqrt((j + 1) * (j + k + 0.5));
                    REQUIRE(close(v, {t, 0.0}, 1e-12));
                }
            }
        }
    }
}

TEST_CASE("tridiagonal actions match the exact weighted polynomial calculus") {
    // nabla^2 (phi_j e) expanded over the unnormalized phi_{j-1}, phi_j,
    // phi_{j+1} polynomials; the normalized couplings must square to the
    // exact tridiagonal entries (j+1)(j+k+M/2), j(j+k+M/2-1) and the
    // diagonal must be -(2j+k+M/2)
    const int m = 3, n = 1;
    const long M = 1;
    for (long K = 0; K <= 2; ++K) {
        long dim = dim_super_harmonics(m, n, static_cast<int>(K));
        for (long j = 0; j <= 3; ++j) {
            for (long l : {1L, dim}) {
                HermiteFunction fj = hermite_super(m, n, j, K, l);
                HermiteFunction fj1 = hermite_super(m, n, j + 1, K, l);
                SuperPolynomial img = weighted_laplacian(fj.poly());
                // exact projections through <.|.>_2
                auto proj = [&](const HermiteFunction& g) {
                    WeightedPolynomial wi = WeightedPolynomial::half_gauss(img);
                    WeightedPolynomial wg = WeightedPolynomial::half_gauss(g.poly());
                    return inner2(wi, wg) * g.norm2.inverse();
                };
                PiScaled diag = proj(fj);
                REQUIRE(diag == PiScaled(GaussianRational(-Rational(2 * (2 * j + K) + M, 2))));
                PiScaled up = proj(fj1);
                REQUIRE(up.coeff().re().sign() < 0);  // couplings are -sqrt(...)
                PiScaled lhs = up * up * fj1.norm2 * fj.norm2.inverse();
                REQUIRE(lhs == PiScaled(GaussianRational(Rational(j + 1) *
                                                         Rational(2 * (j + K) + M, 2))));
                if (j > 0) {
                    HermiteFunction fjm = hermite_super(m, n, j - 1, K, l);
                    PiScaled down = proj(fjm);
                    REQUIRE(down.coeff().re().sign() < 0);
                    PiScaled lhs2 = down * down * fjm.norm2 * fj.norm2.inverse();
                    REQUIRE(lhs2 == PiScaled(GaussianRational(Rational(j) *
                                                              Rational(2 * (j + K) + M - 2, 2))));
                }
                // R^2 multiplication: diagonal +(2j+K+M/2), same couplings
                SuperPolynomial r2img = SuperPolynomial::R2(m, n) * fj.poly();
                WeightedPolynomial wr = WeightedPolynomial::half_gauss(r2img);
                PiScaled rdiag = inner2(wr, WeightedPolynomial::half_gauss(fj.poly())) *
                                 fj.norm2.inverse();
                REQUIRE(rdiag == PiScaled(GaussianRational(Rational(2 * (2 * j + K) + M, 2))));
            }
        }
    }
}

TEST_CASE("symmetries with respect to the coefficient inner product") {
    std::mt19937_64 rng(424201);
    for (int t = 0; t < 30; ++t) {
        auto f = testgen::random_expansion(rng, 3, 1, 5, 3, 6);
        auto g = testgen::random_expansion(rng, 3, 1, 5, 3, 6);
        REQUIRE(close(inner2_coeff(f, g), std::conj(inner2_coeff(g, f))));
        REQUIRE(close(inner2_coeff(apply_coeff(CoeffOp::R2, f), g),
                      inner2_coeff(f, apply_coeff(CoeffOp::R2, g)), 1e-10));
        REQUIRE(close(inner2_coeff(apply_coeff(CoeffOp::Nabla2, f), g),
                      inner2_coeff(f, apply_coeff(CoeffOp::Nabla2, g)), 1e-10));
        REQUIRE(close(inner2_coeff(apply_coeff(CoeffOp::EulerPlusM2, f), g),
                      -inner2_coeff(f, apply_coeff(CoeffOp::EulerPlusM2, g)), 1e-10));
    }
}

TEST_CASE("fourier: group relations and the spectral form") {
    std::mt19937_64 rng(5150);
    for (int t = 0; t < 20; ++t) {
        auto f = testgen::random_expansion(rng, 3, 1, 6, 3, 5);
        auto f4 = f;
        for (int i = 0; i < 4; ++i) f4 = apply_coeff(CoeffOp::FourierPlus, f4);
        auto fid = apply_coeff(CoeffOp::FourierMinus, apply_coeff(CoeffOp::FourierPlus, f));
        for (const auto& [key, v] : f.coeffs()) {
            REQUIRE(close(f4.coeffs().at(key), v, 0.0));
            REQUIRE(close(fid.coeffs().at(key), v, 0.0));
        }
    }
    // exp(-i pi M/4) exp(i pi (2j+k+M/2)/2) = exp(i (2j+k) pi/2)
    for (long M : {1L, 3L}) {
        for (long j = 0; j <= 20; ++j)
            for (long k = 0; k <= 20; ++k) {
                std::complex<double> lhs =
                    std::exp(std::complex<double>(0, -M_PI * M / 4.0)) *
                    std::exp(std::complex<double>(0, M_PI * (2.0 * j + k + 0.5 * M) / 2.0));
                std::complex<double> rhs = std::exp(std::complex<double>(0, M_PI * (2.0 * j + k) / 2.0));
                REQUIRE(close(lhs, rhs));
            }
    }
}

TEST_CASE("parseval") {
    // basis pairs give exactly zero residual (phases are exact units)
    auto a = HermiteExpansion::unit(3, 1, 2, 1, 1);
    auto b = HermiteExpansion::unit(3, 1, 1, 1, 1);
    REQUIRE(parseval_check(a, b) == 0.0);
    REQUIRE(parseval_check(a, a) == 0.0);
    std::mt19937_64 rng(2026);
    for (int t = 0; t < 50; ++t) {
        auto f = testgen::random_expansion(rng, 3, 1, 6, 3, 6);
        auto g = testgen::random_expansion(rng, 3, 1, 6, 3, 6);
        REQUIRE(parseval_check(f, g) < 1e-12);
    }
}

TEST_CASE("schwartz norms: spherical representation") {
    for (long j = 0; j <= 8; ++j)
        for (long k = 0; k <= 8; ++k)
            for (long r = 0; r <= 4; ++r) {
                auto f = HermiteExpansion::unit(3, 1, j, k, 1);
                REQUIRE(schwartz_norm(f, r) ==
                        Approx(std::pow(2.0 * j + k + 1, static_cast<double>(r))).epsilon(1e-12));
            }
    std::mt19937_64 rng(11);
    for (int t = 0; t < 10; ++t) {
        auto f = testgen::random_expansion(rng, 3, 1, 4, 2, 5);
        REQUIRE(schwartz_norm(f, 0) == Approx(norm0(f)).epsilon(1e-12));
        // monotone in r
        REQUIRE(schwartz_norm(f, 2) >= schwartz_norm(f, 1));
    }
}

TEST_CASE("schwartz norms: star variant stays within the polynomial-factor slack") {
    AlphaTable tab(3, 1);
    std::mt19937_64 rng(8675309);
    const long shift = (1 + 3) / 2;  // floor((n+3)/2), n = 1
    for (int t = 0; t < 10; ++t) {
        auto f = testgen::random_expansion(rng, 3, 1, 4, 2, 5);
        for (long r = 0; r <= 2; ++r) {
            double sph = schwartz_norm(f, r);
            double star_up = schwartz_norm_star(tab, f, r + shift);
            double star = schwartz_norm_star(tab, f, r);
            double sph_up = schwartz_norm(f, r + shift);
            REQUIRE(sph <= 1e3 * star_up);
            REQUIRE(star <= 1e3 * sph_up);
        }
    }
}

TEST_CASE("heisenberg inequality") {
    // Gaussian saturates
    auto g = HermiteExpansion::unit(3, 1, 0, 0, 1);
    auto res = heisenberg_check(g);
    REQUIRE(res.saturated);
    REQUIRE(res.lhs == Approx(0.5).margin(1e-12));
    // phi_{1,0,1} at M = 1
    auto f = HermiteExpansion::unit(3, 1, 1, 0, 1);
    auto r2 = heisenberg_check(f);
    REQUIRE(r2.lhs == Approx(2.5).margin(1e-10));
    REQUIRE(r2.rhs == Approx(0.5).margin(1e-12));
    std::mt19937_64 rng(31415);
    for (int t = 0; t < 50; ++t) {
        auto h = testgen::random_expansion(rng, 3, 1, 5, 3, 6);
        auto rr = heisenberg_check(h);
        REQUIRE(rr.lhs >= rr.rhs - 1e-10);
    }
}

TEST_CASE("divergence demo") {
    AlphaTable tab(3, 1);
    auto vals = divergence_demo(tab, 1000);
    REQUIRE(vals.size() == 1000);
    // v_1 = beta_{1,0,0,0,0}^2 + beta_{1,0,0,0,1}^2 = 3 + 2
    REQUIRE(vals[0] == Approx(5.0).margin(1e-10));
    // strictly increasing and above the harmonic-number lower bound 2 H_r
    double hr = 0.0;
    for (long r = 1; r <= 1000; ++r) {
        hr += 1.0 / static_cast<double>(r);
        if (r > 1) REQUIRE(vals[r - 1] > vals[r - 2]);
        REQUIRE(vals[r - 1] >= 2.0 * hr);
    }
    // S_i = beta_{i,0,0,0,0}^2 + beta_{i,0,0,0,1}^2 = (2i+1) + 2i, so the
    // partial sums grow like 4 ln r; check the decade gap
    double gap = vals[999] - vals[99];
    REQUIRE(gap == Approx(4.0 * std::log(10.0)).epsilon(0.1));
}

TEST_CASE("expansion json round trip and dimension guards") {
    std::mt19937_64 rng(5);
    auto f = testgen::random_expansion(rng, 3, 1, 4, 2, 5);
    auto back = expansion_from_json(to_json(f));
    REQUIRE(back.coeffs().size() == f.coeffs().size());
    for (const auto& [key, v] : f.coeffs()) REQUIRE(close(back.coeffs().at(key), v, 0.0));
    REQUIRE_THROWS_AS(HermiteExpansion(2, 1), NonPositiveSuperDimension);
    HermiteExpansion g(3, 1);
    REQUIRE_THROWS_AS(g.set(0, 1, 6, 1.0), IndexOutOfRange);  // dim H_1 = 5
}
