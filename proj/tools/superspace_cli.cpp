// Command-line front end: exact superspace computations and verification
// suites with machine-readable (JSON/CSV) output.
//
// Exit codes: 0 success, 2 validation/usage error, 1 internal failure.
// All randomness comes from --seed; fixed flags give byte-identical output.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "superspace/io_json.hpp"
#include "superspace/parallel.hpp"

using namespace superspace;

namespace {

struct Options {
    int m = 3;
    int n = 1;
    long jmax = 4;
    long kmax = 2;
    long pmax = 4;
    int count = 3;
    int grid = 2000;
    double rmax = 12.0;
    unsigned long seed = 1;
    std::string format = "json";
    std::string out;
    std::string potential = "oscillator";
    std::string coeffs;
    long terms = 100;
    std::string suite = "all";
};

void write_output(const Options& opt, const std::string& text) {
    if (opt.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(opt.out, std::ios::binary);
    if (!f) throw Error("cannot open output file: " + opt.out);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

void require_positive_superdim(const Options& opt) {
    if (opt.m - 2 * opt.n <= 0)
        throw NonPositiveSuperDimension("M = m - 2n = " + std::to_string(opt.m - 2 * opt.n) +
                                        " but this command requires M > 0");
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

RadialPotential load_potential(const Options& opt) {
    if (opt.potential == "oscillator") return RadialPotential::oscillator();
    std::ifstream f(opt.potential);
    if (!f) throw ParseError("cannot open potential file: " + opt.potential);
    json j;
    f >> j;
    return potential_from_json(j);
}

SuperPolynomial random_poly(std::mt19937_64& rng, int m, int n, unsigned max_degree) {
    SuperPolynomial f(m, n);
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 9);
    std::uniform_int_distribution<int> pick(0, m + 2 * n - 1);
    std::uniform_int_distribution<unsigned> deg(0, max_degree);
    for (int t = 0; t < 6; ++t) {
        TermKey key;
        key.bos.assign(m, 0);
        unsigned d = deg(rng);
        for (unsigned u = 0; u < d; ++u) {
            int slot = pick(rng);
            if (slot < m)
                key.bos[slot] += 1;
            else
                key.mask |= FermionicMask(1) << (slot - m);
        }
        f.add_term(std::move(key),
                   GaussianRational(Rational(num(rng), den(rng)), Rational(num(rng), den(rng))));
    }
    return f;
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

struct SuiteResult {
    std::string name;
    bool pass = true;
    long checks = 0;
    std::string detail;

    void check(bool ok, const std::string& what) {
        ++checks;
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

SuiteResult run_sl2(const Options& opt) {
    SuiteResult r{"sl2"};
    std::mt19937_64 rng(opt.seed);
    for (auto [m, n] : {std::pair{3, 1}, {5, 2}}) {
        for (int t = 0; t < 50; ++t) {
            SuperPolynomial f = random_poly(rng, m, n, 6);
            SuperPolynomial comm =
                laplacian(SuperPolynomial::R2(m, n) * f) -
                SuperPolynomial::R2(m, n) * laplacian(f);
            SuperPolynomial rhs =
                (euler(f) * GaussianRational(Rational(2)) +
                 f * GaussianRational(Rational(m - 2 * n))) *
                GaussianRational(Rational(2));
            r.check(comm == rhs, "commutator identity failed");
        }
    }
    for (auto [m, n] : {std::pair{3, 1}, {4, 1}, {5, 2}, {7, 3}}) {
        r.check(laplacian(SuperPolynomial::R2(m, n)) ==
                    SuperPolynomial::scalar(m, n, GaussianRational(Rational(2 * (m - 2 * n)))),
                "laplacian(R^2) != 2M");
    }
    return r;
}

SuiteResult run_integrate(const Options& opt) {
    SuiteResult r{"integrate"};
    const int m = opt.m, n = opt.n;
    const long M = m - 2 * n;
    for (unsigned d = 0; d <= 6; ++d) {
        for (const TermKey& key : detail::monomials_of_degree(m, n, static_cast<int>(d))) {
            SuperPolynomial P = SuperPolynomial::monomial(m, n, key, GaussianRational(1));
            PiScaled lhs = gaussian_integral(P);
            PiScaled rhs = PiScaled(GaussianRational(Rational(1, 2))) *
                           gamma_half(HalfInt::halves(d + M)) * pizzetti(P);
            r.check(lhs == rhs, "dimensional continuation failed at degree " + std::to_string(d));
            if (!lhs.is_zero()) r.check(lhs.half_pi_exp() == M, "pi-power invariant failed");
        }
    }
    return r;
}

SuiteResult run_gram(const Options& opt) {
    SuiteResult r{"gram"};
    require_positive_superdim(opt);
    std::vector<HermiteFunction> fam;
    for (long K = 0; K <= 3; ++K)
        for (long j = 0; j <= 4; ++j)
            for (long l = 1; l <= dim_super_harmonics(opt.m, opt.n, static_cast<int>(K)); ++l)
                fam.push_back(hermite_super(opt.m, opt.n, j, K, l));
    for (const auto& f : fam) r.check(f.norm2 == f.closed_norm2, "normalization mismatch");
    std::vector<char> offdiag_zero(fam.size(), 1);
    parallel_for(fam.size(), [&](std::size_t a) {
        for (std::size_t b = a + 1; b < fam.size(); ++b)
            if (!inner2_factored(fam[a].factored, fam[b].factored).is_zero()) offdiag_zero[a] = 0;
    });
    for (std::size_t a = 0; a < fam.size(); ++a)
        r.check(offdiag_zero[a] == 1, "off-diagonal Gram entry nonzero");
    return r;
}

SuiteResult run_alpha(const Options& opt) {
    SuiteResult r{"alpha"};
    require_positive_superdim(opt);
    AlphaTable tab(opt.m, opt.n);
    for (long j = 0; j <= 10; ++j)
        for (long p = 0; p <= 6; ++p)
            for (long q = 0; q <= opt.n; ++q)
                for (long k = 0; k <= opt.n - q; ++k)
                    for (long s = 0; s <= std::min<long>(opt.n - q, j + k); ++s) {
                        double a = tab.alpha(j, k, p, q, s);
                        double o = tab.alpha_oracle(j, k, p, q, s);
                        r.check(std::fabs(a - o) < 1e-9, "recursion vs oracle at j=" +
                                                             std::to_string(j));
                    }
    const long M = opt.m - 2 * opt.n;
    for (long i = 0; i <= 20; ++i) {
        Rational expect = pochhammer(HalfInt::halves(opt.m), static_cast<unsigned long>(i)) /
                          pochhammer(HalfInt::halves(M), static_cast<unsigned long>(i));
        r.check(tab.alpha_sq_s0(i, 0, 0, 0) == expect, "hermitian transfer value");
    }
    return r;
}

SuiteResult run_bound(const Options& opt) {
    SuiteResult r{"bound"};
    require_positive_superdim(opt);
    AlphaTable tab(opt.m, opt.n);
    BoundReport rep = bound_report(tab, 30, 30);
    r.check(std::isfinite(rep.max_energy_ratio), "energy ratio not finite");
    r.check(rep.argmax_j_energy <= 15, "energy-bound maximum attained late");
    r.check(rep.partial_max_energy_by_j[30] == rep.partial_max_energy_by_j[15],
            "partial maxima not stabilized");
    return r;
}

SuiteResult run_fourier(const Options& opt) {
    SuiteResult r{"fourier"};
    require_positive_superdim(opt);
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> cd(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        HermiteExpansion f(opt.m, opt.n);
        for (int u = 0; u < 5; ++u) {
            long k = static_cast<long>(rng() % 3);
            f.add(static_cast<long>(rng() % 6), k,
                  1 + static_cast<long>(rng() % dim_super_harmonics(opt.m, opt.n,
                                                                    static_cast<int>(k))),
                  {cd(rng), cd(rng)});
        }
        HermiteExpansion f4 = f;
        for (int i = 0; i < 4; ++i) f4 = apply_coeff(CoeffOp::FourierPlus, f4);
        HermiteExpansion fid = apply_coeff(CoeffOp::FourierMinus,
                                           apply_coeff(CoeffOp::FourierPlus, f));
        for (const auto& [key, v] : f.coeffs()) {
            r.check(f4.coeffs().count(key) && f4.coeffs().at(key) == v, "F^4 != id");
            r.check(fid.coeffs().count(key) && fid.coeffs().at(key) == v, "F- F+ != id");
        }
    }
    const long M = opt.m - 2 * opt.n;
    for (long j = 0; j <= 20; ++j)
        for (long k = 0; k <= 20; ++k) {
            std::complex<double> lhs = std::exp(std::complex<double>(0, -M_PI * M / 4.0)) *
                                       std::exp(std::complex<double>(0, M_PI * (2.0 * j + k + 0.5 * M) / 2.0));
            std::complex<double> rhs =
                std::exp(std::complex<double>(0, M_PI * (2.0 * j + k) / 2.0));
            r.check(std::abs(lhs - rhs) < 1e-12, "spectral Fourier form");
        }
    return r;
}

SuiteResult run_parseval(const Options& opt) {
    SuiteResult r{"parseval"};
    require_positive_superdim(opt);
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> cd(-1.0, 1.0);
    auto rand_exp = [&] {
        HermiteExpansion f(opt.m, opt.n);
        for (int u = 0; u < 6; ++u) {
            long k = static_cast<long>(rng() % 4);
            f.add(static_cast<long>(rng() % 7), k,
                  1 + static_cast<long>(rng() % dim_super_harmonics(opt.m, opt.n,
                                                                    static_cast<int>(k))),
                  {cd(rng), cd(rng)});
        }
        return f;
    };
    for (int t = 0; t < 50; ++t) {
        HermiteExpansion f = rand_exp(), g = rand_exp();
        r.check(parseval_check(f, g) < 1e-12, "parseval residual too large");
    }
    return r;
}

SuiteResult run_casimir(const Options& opt) {
    SuiteResult r{"casimir"};
    require_positive_superdim(opt);
    const long M = opt.m - 2 * opt.n;
    for (long k = 0; k <= 5; ++k) {
        r.check(casimir_eigenvalue(M, k) == casimir_eigenvalue_via_lb(M, k),
                "casimir eigenvalue routes disagree");
        for (long j = 0; j <= 5; ++j) {
            HermiteExpansion e = HermiteExpansion::unit(opt.m, opt.n, j, k, 1);
            HermiteExpansion ce = apply_coeff(CoeffOp::Casimir, e);
            r.check(std::abs(ce.coeffs().begin()->second -
                             std::complex<double>(casimir_eigenvalue(M, k).to_double(), 0.0)) == 0.0,
                    "casimir action");
        }
    }
    return r;
}

SuiteResult run_oscillator(const Options& opt) {
    SuiteResult r{"oscillator"};
    for (int M : {1, 3}) {
        for (int k : {0, 1, 2}) {
            RadialProblem p;
            p.M = M;
            p.k = k;
            p.N = opt.grid;
            p.r_max = opt.rmax;
            SpectrumResult res = radial_solve(p, 4);
            for (int j = 0; j <= 3; ++j)
                r.check(std::fabs(res.eigenvalues[j] - (2.0 * j + k + 0.5 * M)) < 1e-4,
                        "oscillator eigenvalue M=" + std::to_string(M));
        }
    }
    // raw second-order error drops at least quadratically under doubling
    RadialProblem p;
    p.M = 3;
    p.k = 1;
    double e250, e500;
    {
        p.N = 250;
        e250 = std::fabs(radial_solve(p, 2).eigenvalues_raw[1] - 4.5);
        p.N = 500;
        e500 = std::fabs(radial_solve(p, 2).eigenvalues_raw[1] - 4.5);
    }
    r.check(e250 / e500 > 3.5, "grid doubling order");
    return r;
}

SuiteResult run_heisenberg(const Options& opt) {
    SuiteResult r{"heisenberg"};
    require_positive_superdim(opt);
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> cd(-1.0, 1.0);
    HermiteExpansion g = HermiteExpansion::unit(opt.m, opt.n, 0, 0, 1);
    auto sat = heisenberg_check(g);
    r.check(sat.saturated, "gaussian does not saturate");
    for (int t = 0; t < 50; ++t) {
        HermiteExpansion f(opt.m, opt.n);
        for (int u = 0; u < 6; ++u) {
            long k = static_cast<long>(rng() % 4);
            f.add(static_cast<long>(rng() % 6), k,
                  1 + static_cast<long>(rng() % dim_super_harmonics(opt.m, opt.n,
                                                                    static_cast<int>(k))),
                  {cd(rng), cd(rng)});
        }
        auto res = heisenberg_check(f);
        r.check(res.lhs >= res.rhs - 1e-10, "heisenberg inequality violated");
    }
    return r;
}

SuiteResult run_divergence(const Options& opt) {
    SuiteResult r{"divergence"};
    require_positive_superdim(opt);
    AlphaTable tab(opt.m, opt.n);
    auto vals = divergence_demo(tab, 10000);
    const long M = opt.m - 2 * opt.n;
    double bound_const = to_float(gamma_half(HalfInt::halves(M)) *
                                  gamma_half(HalfInt::halves(opt.m)).inverse())
                             .real();
    double hr = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        hr += 1.0 / static_cast<double>(i + 1);
        if (i > 0) r.check(vals[i] > vals[i - 1], "partial sums not increasing");
        r.check(vals[i] >= bound_const * hr, "lower bound violated");
    }
    return r;
}

SuiteResult run_dims(const Options& opt) {
    SuiteResult r{"dims"};
    for (int k = 0; k <= 6; ++k)
        r.check(dim_super_harmonics(opt.m, opt.n, k) ==
                    super_harmonics_kernel_dim_exact(opt.m, opt.n, k),
                "dimension formula vs kernel rank at k=" + std::to_string(k));
    return r;
}

SuiteResult run_norms(const Options& opt) {
    SuiteResult r{"norms"};
    require_positive_superdim(opt);
    for (long j = 0; j <= 8; ++j)
        for (long k = 0; k <= 8; ++k)
            for (long rr = 0; rr <= 4; ++rr) {
                HermiteExpansion f = HermiteExpansion::unit(opt.m, opt.n, j, k, 1);
                double expect = std::pow(2.0 * j + k + 1, static_cast<double>(rr));
                r.check(std::fabs(schwartz_norm(f, rr) - expect) <= 1e-12 * expect,
                        "norm representation");
            }
    return r;
}

std::vector<SuiteResult> run_suites(const Options& opt) {
    std::vector<SuiteResult> results;
    auto want = [&](const std::string& s) { return opt.suite == "all" || opt.suite == s; };
    if (want("sl2")) results.push_back(run_sl2(opt));
    if (want("integrate")) results.push_back(run_integrate(opt));
    if (want("gram")) results.push_back(run_gram(opt));
    if (want("alpha")) results.push_back(run_alpha(opt));
    if (want("bound")) results.push_back(run_bound(opt));
    if (want("fourier")) results.push_back(run_fourier(opt));
    if (want("parseval")) results.push_back(run_parseval(opt));
    if (want("casimir")) results.push_back(run_casimir(opt));
    if (want("oscillator")) results.push_back(run_oscillator(opt));
    if (want("heisenberg")) results.push_back(run_heisenberg(opt));
    if (want("divergence")) results.push_back(run_divergence(opt));
    if (want("dims")) results.push_back(run_dims(opt));
    if (want("norms")) results.push_back(run_norms(opt));
    if (results.empty()) throw ParseError("unknown suite: " + opt.suite);
    return results;
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

int cmd_verify(const Options& opt) {
    auto results = run_suites(opt);
    json rep;
    rep["schema"] = "superspace/1";
    rep["command"] = "verify";
    rep["m"] = opt.m;
    rep["n"] = opt.n;
    rep["seed"] = opt.seed;
    bool all_pass = true;
    json suites = json::array();
    for (const auto& r : results) {
        suites.push_back(json{{"suite", r.name},
                              {"pass", r.pass},
                              {"checks", r.checks},
                              {"detail", r.detail}});
        all_pass = all_pass && r.pass;
    }
    rep["suites"] = suites;
    rep["pass"] = all_pass;
    write_output(opt, rep.dump(2));
    return all_pass ? 0 : 1;
}

int cmd_gram(const Options& opt) {
    require_positive_superdim(opt);
    std::vector<HermiteFunction> fam;
    for (long K = 0; K <= opt.kmax; ++K)
        for (long j = 0; j <= opt.jmax; ++j)
            for (long l = 1; l <= dim_super_harmonics(opt.m, opt.n, static_cast<int>(K)); ++l)
                fam.push_back(hermite_super(opt.m, opt.n, j, K, l));
    std::vector<double> offdiag(fam.size(), 0.0);
    parallel_for(fam.size(), [&](std::size_t a) {
        double worst = 0.0;
        for (std::size_t b = 0; b < fam.size(); ++b) {
            if (a == b) continue;
            PiScaled v = inner2_factored(fam[a].factored, fam[b].factored);
            if (!v.is_zero()) worst = std::max(worst, std::abs(to_float(v)));
        }
        offdiag[a] = worst;
    });
    if (opt.format == "csv") {
        std::ostringstream os;
        os << "j,k,l,norm2,closed_norm2,normalized,max_offdiag\n";
        for (std::size_t i = 0; i < fam.size(); ++i) {
            const auto& f = fam[i];
            double n2 = to_float(f.norm2).real();
            os << f.label.j << ',' << f.label.k << ',' << f.label.l << ',' << fmt_double(n2)
               << ',' << fmt_double(to_float(f.closed_norm2).real()) << ','
               << fmt_double(n2 / to_float(f.closed_norm2).real()) << ','
               << fmt_double(offdiag[i]) << '\n';
        }
        write_output(opt, os.str());
    } else {
        json rep;
        rep["schema"] = "superspace/1";
        rep["command"] = "gram";
        json rows = json::array();
        double worst = 0.0;
        bool exact = true;
        for (std::size_t i = 0; i < fam.size(); ++i) {
            const auto& f = fam[i];
            exact = exact && (f.norm2 == f.closed_norm2);
            worst = std::max(worst, offdiag[i]);
            rows.push_back(json{{"j", f.label.j},
                                {"k", f.label.k},
                                {"l", f.label.l},
                                {"norm2", to_float(f.norm2).real()}});
        }
        rep["functions"] = rows;
        rep["max_offdiag"] = worst;
        rep["norms_match_closed_forms"] = exact;
        write_output(opt, rep.dump(2));
    }
    return 0;
}

int cmd_alpha_table(const Options& opt) {
    require_positive_superdim(opt);
    AlphaTable tab(opt.m, opt.n);
    std::ostringstream os;
    double worst = 0.0;
    if (opt.format == "csv") os << "j,k,p,q,s,alpha,provenance,oracle,delta\n";
    json rows = json::array();
    for (long j = 0; j <= opt.jmax; ++j)
        for (long q = 0; q <= opt.n; ++q)
            for (long k = 0; k <= opt.n - q; ++k)
                for (long s = 0; s <= std::min<long>(opt.n - q, j + k); ++s)
                    for (long p = 0; p <= opt.pmax; ++p) {
                        double a = tab.alpha(j, k, p, q, s);
                        double o = tab.alpha_oracle(j, k, p, q, s);
                        worst = std::max(worst, std::fabs(a - o));
                        const char* prov = (j == 0) ? "closed_form" : "recursion";
                        if (opt.format == "csv") {
                            os << j << ',' << k << ',' << p << ',' << q << ',' << s << ','
                               << fmt_double(a) << ',' << prov << ',' << fmt_double(o) << ','
                               << fmt_double(a - o) << '\n';
                        } else {
                            rows.push_back(json{{"j", j}, {"k", k}, {"p", p}, {"q", q},
                                                {"s", s}, {"alpha", a}, {"provenance", prov},
                                                {"oracle", o}});
                        }
                    }
    if (opt.format == "csv") {
        write_output(opt, os.str());
    } else {
        json rep;
        rep["schema"] = "superspace/1";
        rep["command"] = "alpha-table";
        rep["entries"] = rows;
        rep["max_oracle_deviation"] = worst;
        write_output(opt, rep.dump(2));
    }
    return worst < 1e-9 ? 0 : 1;
}

int cmd_bound_check(const Options& opt) {
    require_positive_superdim(opt);
    AlphaTable tab(opt.m, opt.n);
    BoundReport rep = bound_report(tab, opt.jmax, opt.pmax);
    json out;
    out["schema"] = "superspace/1";
    out["command"] = "bound-check";
    out["j_max"] = opt.jmax;
    out["p_max"] = opt.pmax;
    out["max_growth_ratio"] = rep.max_growth_ratio;
    out["argmax_j_growth"] = rep.argmax_j_growth;
    out["max_energy_ratio"] = rep.max_energy_ratio;
    out["argmax_j_energy"] = rep.argmax_j_energy;
    out["partial_max_energy_by_j"] = rep.partial_max_energy_by_j;
    write_output(opt, out.dump(2));
    return 0;
}

int cmd_spectrum(const Options& opt) {
    require_positive_superdim(opt);
    RadialPotential V = load_potential(opt);
    std::ostringstream os;
    os << "k,j,E,multiplicity,residual\n";
    json rows = json::array();
    for (int k = 0; k <= opt.kmax; ++k) {
        RadialProblem p;
        p.M = opt.m - 2 * opt.n;
        p.k = k;
        p.V = V;
        p.N = opt.grid;
        p.r_max = opt.rmax;
        SpectrumResult res = radial_solve(p, opt.count);
        long mult = dim_super_harmonics(opt.m, opt.n, k);
        for (int j = 0; j < opt.count; ++j) {
            os << k << ',' << j << ',' << fmt_double(res.eigenvalues[j]) << ',' << mult << ','
               << fmt_double(res.residuals[j]) << '\n';
            rows.push_back(json{{"k", k}, {"j", j}, {"E", res.eigenvalues[j]},
                                {"multiplicity", mult}, {"residual", res.residuals[j]}});
        }
    }
    if (opt.format == "csv") {
        write_output(opt, os.str());
    } else {
        json rep;
        rep["schema"] = "superspace/1";
        rep["command"] = "spectrum";
        rep["levels"] = rows;
        write_output(opt, rep.dump(2));
    }
    return 0;
}

/// Expansion from the --coeffs flag: inline JSON or @path.
HermiteExpansion expansion_from_flag(const Options& opt) {
    std::string text = opt.coeffs;
    if (!text.empty() && text[0] == '@') {
        std::ifstream f(text.substr(1));
        if (!f) throw ParseError("cannot open coefficients file: " + text.substr(1));
        std::ostringstream os;
        os << f.rdbuf();
        text = os.str();
    }
    return expansion_from_json(json::parse(text));
}

int cmd_heisenberg(const Options& opt) {
    require_positive_superdim(opt);
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> cd(-1.0, 1.0);
    std::ostringstream os;
    os << "trial,lhs,rhs,saturated\n";
    json rows = json::array();
    bool ok = true;
    int trials = opt.coeffs.empty() ? opt.count : 1;
    for (int t = 0; t < trials; ++t) {
        HermiteExpansion f(opt.m, opt.n);
        if (!opt.coeffs.empty()) {
            f = expansion_from_flag(opt);
        } else {
            for (long u = 0; u < opt.terms; ++u) {
                long k = static_cast<long>(rng() % 4);
                f.add(static_cast<long>(rng() % 6), k,
                      1 + static_cast<long>(rng() % dim_super_harmonics(opt.m, opt.n,
                                                                        static_cast<int>(k))),
                      {cd(rng), cd(rng)});
            }
        }
        auto res = heisenberg_check(f);
        ok = ok && (res.lhs >= res.rhs - 1e-10);
        os << t << ',' << fmt_double(res.lhs) << ',' << fmt_double(res.rhs) << ','
           << (res.saturated ? 1 : 0) << '\n';
        rows.push_back(json{{"trial", t}, {"lhs", res.lhs}, {"rhs", res.rhs},
                            {"saturated", res.saturated}});
    }
    if (opt.format == "csv") {
        write_output(opt, os.str());
    } else {
        json rep;
        rep["schema"] = "superspace/1";
        rep["command"] = "heisenberg";
        rep["trials"] = rows;
        rep["pass"] = ok;
        write_output(opt, rep.dump(2));
    }
    return ok ? 0 : 1;
}

int cmd_fourier(const Options& opt) {
    json rep;
    rep["schema"] = "superspace/1";
    rep["command"] = "fourier";
    if (!opt.coeffs.empty()) {
        // transform an explicit expansion and report it with phases applied
        HermiteExpansion f = expansion_from_flag(opt);
        rep["input"] = to_json(f);
        rep["transformed"] = to_json(apply_coeff(CoeffOp::FourierPlus, f));
        rep["parseval_residual"] = parseval_check(f, f);
        rep["pass"] = true;
        write_output(opt, rep.dump(2));
        return 0;
    }
    Options o = opt;
    o.suite = "fourier";
    SuiteResult r = run_fourier(o);
    rep["checks"] = r.checks;
    rep["pass"] = r.pass;
    rep["detail"] = r.detail;
    write_output(opt, rep.dump(2));
    return r.pass ? 0 : 1;
}

int cmd_divergence(const Options& opt) {
    require_positive_superdim(opt);
    AlphaTable tab(opt.m, opt.n);
    auto vals = divergence_demo(tab, opt.terms);
    if (opt.format == "csv") {
        std::ostringstream os;
        os << "r,partial\n";
        for (std::size_t i = 0; i < vals.size(); ++i)
            os << (i + 1) << ',' << fmt_double(vals[i]) << '\n';
        write_output(opt, os.str());
    } else {
        json rep;
        rep["schema"] = "superspace/1";
        rep["command"] = "divergence-demo";
        rep["partials"] = vals;
        write_output(opt, rep.dump(2));
    }
    return 0;
}

int cmd_dims(const Options& opt) {
    std::ostringstream os;
    os << "k,dim_formula,dim_kernel\n";
    json rows = json::array();
    bool ok = true;
    for (int k = 0; k <= opt.kmax; ++k) {
        long f = dim_super_harmonics(opt.m, opt.n, k);
        long o = super_harmonics_kernel_dim_exact(opt.m, opt.n, k);
        ok = ok && (f == o);
        os << k << ',' << f << ',' << o << '\n';
        rows.push_back(json{{"k", k}, {"formula", f}, {"kernel", o}});
    }
    if (opt.format == "csv") {
        write_output(opt, os.str());
    } else {
        json rep;
        rep["schema"] = "superspace/1";
        rep["command"] = "dims";
        rep["rows"] = rows;
        rep["pass"] = ok;
        write_output(opt, rep.dump(2));
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"exact harmonic analysis on superspace R^(m|2n)"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--m", opt.m, "bosonic dimension");
        sub->add_option("--n", opt.n, "half the fermionic dimension");
        sub->add_option("--jmax", opt.jmax, "max radial index");
        sub->add_option("--kmax", opt.kmax, "max harmonic degree");
        sub->add_option("--pmax", opt.pmax, "max bosonic harmonic degree");
        sub->add_option("--count", opt.count, "levels per sector / trials");
        sub->add_option("--grid", opt.grid, "radial grid points");
        sub->add_option("--rmax", opt.rmax, "radial box size");
        sub->add_option("--seed", opt.seed, "random seed");
        sub->add_option("--format", opt.format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", opt.out, "output path (default stdout)");
        sub->add_option("--potential", opt.potential, "oscillator or a JSON file");
        sub->add_option("--coeffs", opt.coeffs, "inline JSON coefficients");
        sub->add_option("--terms", opt.terms, "series length / terms per trial");
        sub->add_option("--suite", opt.suite, "verify suite name or 'all'");
    };

    std::map<std::string, std::function<int(const Options&)>> dispatch{
        {"gram", cmd_gram},
        {"alpha-table", cmd_alpha_table},
        {"bound-check", cmd_bound_check},
        {"spectrum", cmd_spectrum},
        {"heisenberg", cmd_heisenberg},
        {"fourier", cmd_fourier},
        {"divergence-demo", cmd_divergence},
        {"verify", cmd_verify},
        {"dims", cmd_dims},
    };
    for (auto& [name, fn] : dispatch) add_common(app.add_subcommand(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        for (auto& [name, fn] : dispatch)
            if (app.get_subcommand(name)->parsed()) return fn(opt);
        std::cerr << "usage error: no subcommand\n";
        return 2;
    } catch (const NonPositiveSuperDimension& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const IndexConstraintViolated& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
