#pragma once

// Shared generators for property-style tests: seeded, deterministic.

#include <random>

#include "superspace/superspace.hpp"

namespace testgen {

using namespace superspace;

inline Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 9);
    return Rational(num(rng), den(rng));
}

inline GaussianRational random_gaussian(std::mt19937_64& rng, bool complex_part = true) {
    Rational re = random_rational(rng);
    Rational im = complex_part ? random_rational(rng) : Rational(0);
    return GaussianRational(re, im);
}

inline GrassmannElement random_grassmann(std::mt19937_64& rng, int n, int max_terms = 6) {
    GrassmannElement f(n);
    std::uniform_int_distribution<FermionicMask> mask(0, (FermionicMask(1) << (2 * n)) - 1);
    std::uniform_int_distribution<int> count(1, max_terms);
    int c = count(rng);
    for (int i = 0; i < c; ++i) f.add_term(mask(rng), random_gaussian(rng));
    return f;
}

inline SuperPolynomial random_superpoly(std::mt19937_64& rng, int m, int n, unsigned max_degree,
                                        int max_terms = 8, bool complex_part = true) {
    SuperPolynomial f(m, n);
    std::uniform_int_distribution<int> count(1, max_terms);
    std::uniform_int_distribution<unsigned> deg(0, max_degree);
    int c = count(rng);
    for (int t = 0; t < c; ++t) {
        unsigned d = deg(rng);
        TermKey key;
        key.bos.assign(m, 0);
        // random split of d across bosonic exponents and a fermionic mask
        std::uniform_int_distribution<int> pick(0, m + 2 * n - 1);
        for (unsigned u = 0; u < d; ++u) {
            int slot = pick(rng);
            if (slot < m) {
                key.bos[slot] += 1;
            } else {
                FermionicMask bit = FermionicMask(1) << (slot - m);
                if (key.mask & bit) {
                    if (m > 0) key.bos[u % m] += 1;
                } else {
                    key.mask |= bit;
                }
            }
        }
        f.add_term(std::move(key), random_gaussian(rng, complex_part));
    }
    return f;
}

inline HermiteExpansion random_expansion(std::mt19937_64& rng, int m, int n, long j_max,
                                         long k_max, int terms) {
    HermiteExpansion f(m, n);
    std::uniform_int_distribution<long> jd(0, j_max), kd(0, k_max);
    std::uniform_real_distribution<double> cd(-1.0, 1.0);
    for (int t = 0; t < terms; ++t) {
        long j = jd(rng), k = kd(rng);
        std::uniform_int_distribution<long> ld(1, dim_super_harmonics(m, n, static_cast<int>(k)));
        f.add(j, k, ld(rng), {cd(rng), cd(rng)});
    }
    return f;
}

}  // namespace testgen
