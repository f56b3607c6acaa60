#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace superspace;

TEST_CASE("alpha: base cases and closed values") {
    AlphaTable tab(3, 1);
    REQUIRE(tab.alpha(0, 0, 0, 0, 0) == Approx(1.0).margin(1e-15));
    REQUIRE(tab.alpha(1, 0, 0, 0, 0) == Approx(std::sqrt(3.0)).margin(1e-14));
    REQUIRE(tab.alpha_sq_s0(1, 0, 0, 0) == Rational(3));
    // zero outside the summation window s <= j + k
    REQUIRE(tab.alpha(0, 0, 3, 0, 1) == 0.0);
    REQUIRE_THROWS_AS(tab.alpha(0, 0, 0, 2, 0), IndexConstraintViolated);
    REQUIRE_THROWS_AS(AlphaTable(2, 1), NonPositiveSuperDimension);
}

TEST_CASE("recursion vs oracle, both dimensions") {
    for (auto [m, n] : {std::pair{3, 1}, {5, 2}}) {
        AlphaTable tab(m, n);
        long jmax = (m == 3) ? 6 : 4;
        long pmax = (m == 3) ? 3 : 2;
        for (long j = 0; j <= jmax; ++j)
            for (long p = 0; p <= pmax; ++p)
                for (long q = 0; q <= n; ++q)
                    for (long k = 0; k <= n - q; ++k)
                        for (long s = 0; s <= std::min<long>(n - q, j + k); ++s) {
                            double a = tab.alpha(j, k, p, q, s);
                            double o = tab.alpha_oracle(j, k, p, q, s);
                            REQUIRE(a == Approx(o).margin(1e-9));
                        }
    }
}

TEST_CASE("s = 0 closed form matches the recursion") {
    AlphaTable tab(3, 1);
    for (long j = 0; j <= 10; ++j)
        for (long q = 0; q <= 1; ++q)
            for (long k = 0; k <= 1 - q; ++k)
                for (long p = 0; p <= 4; ++p)
                    REQUIRE(tab.alpha(j, k, p, q, 0) ==
                            Approx(tab.alpha_s0_closed(j, k, p, q)).margin(1e-12));
}

TEST_CASE("exact squared oracle equals the exact squared recursion chain") {
    AlphaTable tab(3, 1);
    for (long j = 0; j <= 6; ++j)
        for (long p = 0; p <= 2; ++p)
            for (long q = 0; q <= 1; ++q)
                for (long k = 0; k <= 1 - q; ++k) {
                    Rational chain = tab.alpha_sq_s0(j, k, p, q);
                    if (k % 2 != 0) chain = -chain;  // seed sign (-1)^k
                    REQUIRE(tab.alpha_sq_oracle(j, k, p, q, 0) == chain);
                }
}

TEST_CASE("hermitian transfer: |alpha_{i,0,0,0,0}|^2 exact") {
    for (auto [m, n] : {std::pair{3, 1}, {5, 2}}) {
        AlphaTable tab(m, n);
        const long M = m - 2 * n;
        for (long i = 0; i <= 20; ++i) {
            Rational expect = pochhammer(HalfInt::halves(m), static_cast<unsigned long>(i)) /
                              pochhammer(HalfInt::halves(M), static_cast<unsigned long>(i));
            REQUIRE(tab.alpha_sq_s0(i, 0, 0, 0) == expect);
            double a = tab.alpha(i, 0, 0, 0, 0);
            REQUIRE(a * a == Approx(expect.to_double()).epsilon(1e-12));
        }
    }
}

TEST_CASE("beta relation") {
    AlphaTable tab(3, 1);
    REQUIRE(tab.beta(1, 0, 0, 0, 0) == Approx(std::sqrt(3.0)).margin(1e-14));
    // beta_{i,0,p,q,k} = (-1)^k alpha_{i-k,k,p,q,0}
    for (long i = 0; i <= 5; ++i)
        for (long k = 0; k <= std::min<long>(1, i); ++k) {
            double sign = (k % 2 != 0) ? -1.0 : 1.0;
            REQUIRE(tab.beta(i, 0, 0, 0, k) ==
                    Approx(sign * tab.alpha(i - k, k, 0, 0, 0)).margin(1e-13));
        }
    // vanishes outside the expansion's summation range
    REQUIRE(tab.beta(1, 0, 0, 0, 2) == 0.0);
    REQUIRE(tab.beta(0, 0, 0, 1, 1) == 0.0);
}

TEST_CASE("kronecker inversion of the two expansions") {
    for (auto [m, n] : {std::pair{3, 1}, {5, 2}}) {
        AlphaTable tab(m, n);
        for (long q = 0; q <= n; ++q)
            for (long k = 0; k <= n - q; ++k)
                for (long kp = 0; kp <= n - q; ++kp)
                    for (long j = 0; j + k <= 8; ++j)
                        for (long p = 0; p <= 2; ++p) {
                            double sum = 0.0;
                            for (long s = 0; s <= std::min<long>(n - q, j + k); ++s)
                                sum += tab.alpha(j, k, p, q, s) * tab.beta(j + k - s, s, p, q, kp);
                            REQUIRE(sum == Approx(k == kp ? 1.0 : 0.0).margin(1e-10));
                        }
    }
}

TEST_CASE("alpha is real: oracle numerators have no imaginary part") {
    AlphaTable tab(3, 1);
    for (long j = 0; j <= 3; ++j)
        for (long s = 0; s <= 1; ++s) {
            Rational sq = tab.alpha_sq_oracle(j, 0, 1, 1, s);
            (void)sq;  // throws if the square is not a real rational
        }
    SUCCEED();
}

TEST_CASE("alpha is independent of the multiplicity labels (l, t)") {
    // compute the oracle by hand for every (l, t) of a sector with
    // multiplicities and compare
    const int m = 3, n = 1;
    auto oracle_at = [&](long j, long kp, long p, long q, long s, long l, long t) {
        long K = 2 * kp + p + q;
        auto labels = super_labels(m, n, static_cast<int>(K));
        long idx = 0;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i].kp == kp && labels[i].p == p && labels[i].q == q &&
                labels[i].l == l && labels[i].t == t)
                idx = static_cast<long>(i) + 1;
        REQUIRE(idx > 0);
        HermiteFunction fs = hermite_super(m, n, j, K, idx);
        HermiteFunction fp = hermite_product(m, n, j + kp - s, p, l, s, q, t);
        double num = to_float(inner1_factored(fs.factored, fp.factored)).real();
        return num / std::sqrt(to_float(fs.norm2 * fp.norm2).real());
    };
    for (long j = 0; j <= 2; ++j) {
        // (kp=0, p=1, q=0): three bosonic multiplicities
        double base = oracle_at(j, 0, 1, 0, 0, 1, 1);
        for (long l = 2; l <= 3; ++l)
            REQUIRE(oracle_at(j, 0, 1, 0, 0, l, 1) == Approx(base).margin(1e-12));
        // (kp=0, p=0, q=1): two fermionic multiplicities (s = 0 only, since
        // s <= n - q)
        double b2 = oracle_at(j, 0, 0, 1, 0, 1, 1);
        REQUIRE(oracle_at(j, 0, 0, 1, 0, 1, 2) == Approx(b2).margin(1e-12));
    }
}

TEST_CASE("convert_expansion round trips") {
    AlphaTable tab(3, 1);
    // singleton
    SphericalCoeffs sc;
    sc[SphericalKey{0, 0, 0, 0, 1, 1}] = 1.0;
    ProductCoeffs pc = convert_to_product(tab, sc);
    REQUIRE(pc.size() == 1);
    SphericalCoeffs back = convert_to_spherical(tab, pc);
    REQUIRE(back.size() == 1);
    REQUIRE(std::abs(back.begin()->second - 1.0) < 1e-12);

    // random supports with j + k <= 8: round trip within 1e-10
    std::mt19937_64 rng(13579);
    std::uniform_real_distribution<double> cd(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        SphericalCoeffs f;
        for (int t = 0; t < 6; ++t) {
            long q = static_cast<long>(rng() % 2);
            long k = (q == 0) ? static_cast<long>(rng() % 2) : 0;
            long j = static_cast<long>(rng() % (9 - k));
            long p = static_cast<long>(rng() % 3);
            f[SphericalKey{j, k, p, q, 1, 1}] += std::complex<double>(cd(rng), cd(rng));
        }
        SphericalCoeffs rt = convert_to_spherical(tab, convert_to_product(tab, f));
        for (const auto& [key, v] : f) {
            auto it = rt.find(key);
            REQUIRE(it != rt.end());
            REQUIRE(std::abs(it->second - v) < 1e-10);
            rt.erase(it);
        }
        for (const auto& [key, v] : rt) REQUIRE(std::abs(v) < 1e-10);
    }

    // explicit expansion of phi^b_{1,0,1} phi^f_{0,0,1}
    ProductCoeffs one;
    one[ProductKey{1, 0, 1, 0, 0, 1}] = 1.0;
    SphericalCoeffs sph = convert_to_spherical(tab, one);
    REQUIRE(sph.size() == 2);
    for (const auto& [key, v] : sph) {
        double expect = tab.beta(1, 0, 0, 0, key.k);
        REQUIRE(v.real() == Approx(expect).margin(1e-12));
    }
}

TEST_CASE("bound report: stabilization and slices") {
    AlphaTable tab(3, 1);
    BoundReport rep = bound_report(tab, 30, 30);
    REQUIRE(std::isfinite(rep.max_growth_ratio));
    REQUIRE(std::isfinite(rep.max_energy_ratio));
    // the energy-bound maximum is attained early
    REQUIRE(rep.argmax_j_energy <= 15);
    // partial maxima are nondecreasing and eventually flat
    for (std::size_t j = 1; j < rep.partial_max_energy_by_j.size(); ++j)
        REQUIRE(rep.partial_max_energy_by_j[j] >= rep.partial_max_energy_by_j[j - 1]);
    REQUIRE(rep.partial_max_energy_by_j[30] == rep.partial_max_energy_by_j[15]);

    // q = n slice: only k = s = 0 contributes and the ratio stays bounded
    double worst = 0.0;
    for (long j = 1; j <= 30; ++j)
        for (long p = 0; p <= 10; ++p) {
            double a = std::fabs(tab.alpha(j, 0, p, 1, 0));
            worst = std::max(worst, a / std::sqrt(std::pow(static_cast<double>(j), 2.0)));
        }
    REQUIRE(worst < 10.0);
    REQUIRE_THROWS_AS(bound_report(tab, 0, 5), IndexConstraintViolated);
}
