#pragma once

// Orthosymplectically invariant Schroedinger problems: the sector-k radial
// eigenproblem in effective dimension M on L_2(R+, r^(M+2k-1) dr), lifting of
// radial spectra to coefficient-space expansions, and the essential
// self-adjointness criterion.
//
// Discretization: Liouville form (psi = r^((M+2k-1)/2) f) with second-order
// central differences on a uniform grid, which keeps the matrix symmetric
// tridiagonal; eigenvalues are refined by one Richardson step (a second
// solve at half resolution), giving fourth-order accurate values while the
// stencil itself stays second order.

#include <cmath>
#include <functional>
#include <vector>

#include "superspace/spectral.hpp"

namespace superspace {

/// Radial potential V as a function of u = r^2: either polynomial
/// coefficients in u or a table interpolated linearly.
struct RadialPotential {
    enum class Kind { PolyInU, Table };
    Kind kind = Kind::PolyInU;
    std::vector<double> coeffs;  // c0 + c1 u + c2 u^2 + ...
    std::vector<double> u;       // table knots (ascending)
    std::vector<double> v;

    static RadialPotential poly_in_u(std::vector<double> c) {
        RadialPotential p;
        p.kind = Kind::PolyInU;
        p.coeffs = std::move(c);
        return p;
    }

    static RadialPotential oscillator() { return poly_in_u({0.0, 0.5}); }

    static RadialPotential table(std::vector<double> uu, std::vector<double> vv) {
        if (uu.size() != vv.size() || uu.size() < 2)
            throw ParseError("RadialPotential: table needs matched u/v with >= 2 knots");
        RadialPotential p;
        p.kind = Kind::Table;
        p.u = std::move(uu);
        p.v = std::move(vv);
        return p;
    }

    double operator()(double uu) const {
        if (kind == Kind::PolyInU) {
            double acc = 0.0;
            for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * uu + coeffs[i];
            return acc;
        }
        if (uu <= u.front()) return v.front();
        if (uu >= u.back()) return v.back();
        auto it = std::upper_bound(u.begin(), u.end(), uu);
        std::size_t hi = static_cast<std::size_t>(it - u.begin());
        double w = (uu - u[hi - 1]) / (u[hi] - u[hi - 1]);
        return (1.0 - w) * v[hi - 1] + w * v[hi];
    }
};

struct RadialProblem {
    int M = 1;  // effective dimension m - 2n
    int k = 0;  // spherical harmonic sector
    RadialPotential V = RadialPotential::oscillator();
    double r_max = 12.0;
    int N = 2000;
};

struct SpectrumResult {
    std::vector<double> eigenvalues;      // Richardson-refined
    std::vector<double> eigenvalues_raw;  // plain fine-grid values
    std::vector<std::vector<double>> profiles;  // fine-grid psi, l2-normalized (sum psi^2 h = 1)
    std::vector<double> grid;                   // r at the profile nodes
    std::vector<double> residuals;              // ||T psi - E psi|| / ||psi|| (fine grid)
    double h = 0.0;
    bool neumann_at_zero = false;
    long multiplicity = 1;  // dim H_k, filled by lift_spectrum / callers with (m, n)
};

namespace detail {

struct Tridiag {
    std::vector<double> d;  // diagonal
    std::vector<double> e;  // off-diagonal (size N-1)
};

/// Number of eigenvalues strictly below x (Sturm count via LDL^T).
inline int sturm_count(const Tridiag& T, double x) {
    int cnt = 0;
    double t = T.d[0] - x;
    if (t < 0) ++cnt;
    for (std::size_t i = 1; i < T.d.size(); ++i) {
        double q = t == 0.0 ? 1e-300 : t;
        t = T.d[i] - x - T.e[i - 1] * T.e[i - 1] / q;
        if (t < 0) ++cnt;
    }
    return cnt;
}

inline double bisect_eigenvalue(const Tridiag& T, int index, double lo, double hi) {
    for (int it = 0; it < 140 && hi - lo > 1e-14 * (1.0 + std::fabs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (sturm_count(T, mid) >= index + 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// Inverse iteration for the eigenvector at a converged eigenvalue, using a
/// partial-pivot LU of the tridiagonal (T - lambda I) with second-diagonal
/// fill-in.
inline std::vector<double> inverse_iteration(const Tridiag& T, double lambda) {
    const std::size_t N = T.d.size();
    std::vector<double> A(N), B(N > 1 ? N - 1 : 0, 0.0), C(N > 2 ? N - 2 : 0, 0.0);
    std::vector<double> L(N > 1 ? N - 1 : 0, 0.0);
    std::vector<char> piv(N > 1 ? N - 1 : 0, 0);
    for (std::size_t i = 0; i < N; ++i) A[i] = T.d[i] - lambda;
    for (std::size_t i = 0; i + 1 < N; ++i) B[i] = T.e[i];
    for (std::size_t i = 0; i + 1 < N; ++i) {
        double sub = T.e[i];  // entry (i+1, i) before elimination
        if (std::fabs(A[i]) >= std::fabs(sub)) {
            if (A[i] == 0.0) A[i] = 1e-300;
            double mlt = sub / A[i];
            L[i] = mlt;
            piv[i] = 0;
            A[i + 1] -= mlt * B[i];
            if (i + 1 < B.size() && i < C.size()) B[i + 1] -= mlt * C[i];
        } else {
            // swap rows i and i+1
            double Ai = A[i], Bi = B[i], Ci = (i < C.size()) ? C[i] : 0.0;
            double Bi1 = (i + 1 < B.size()) ? B[i + 1] : 0.0;
            A[i] = sub;
            B[i] = A[i + 1];
            if (i < C.size()) C[i] = Bi1;
            double mlt = Ai / sub;
            L[i] = mlt;
            piv[i] = 1;
            A[i + 1] = Bi - mlt * A[i + 1];
            if (i + 1 < B.size()) B[i + 1] = Ci - mlt * Bi1;
        }
    }
    std::vector<double> x(N, 1.0 / std::sqrt(static_cast<double>(N)));
    for (int sweep = 0; sweep < 3; ++sweep) {
        std::vector<double> y = x;
        for (std::size_t i = 0; i + 1 < N; ++i) {
            if (piv[i]) std::swap(y[i], y[i + 1]);
            y[i + 1] -= L[i] * y[i];
        }
        for (std::size_t i = N; i-- > 0;) {
            double s = y[i];
            if (i + 1 < N) s -= B[i] * y[i + 1];
            if (i + 2 < N) s -= C[i] * y[i + 2];
            y[i] = s / (A[i] == 0.0 ? 1e-300 : A[i]);
        }
        double nrm = 0.0;
        for (double v : y) nrm += v * v;
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < N; ++i) x[i] = y[i] / nrm;
    }
    return x;
}

inline double residual(const Tridiag& T, const std::vector<double>& x, double lambda) {
    const std::size_t N = T.d.size();
    double rr = 0.0, xx = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        double v = (T.d[i] - lambda) * x[i];
        if (i > 0) v += T.e[i - 1] * x[i - 1];
        if (i + 1 < N) v += T.e[i] * x[i + 1];
        rr += v * v;
        xx += x[i] * x[i];
    }
    return std::sqrt(rr / xx);
}

/// Assemble the Liouville-form matrix for a radial problem at resolution N.
inline Tridiag assemble_radial(const RadialProblem& p, int N, bool neumann, double* h_out) {
    Tridiag T;
    double nu = static_cast<double>(p.M + 2 * p.k - 1);
    double cent = nu * (nu - 2.0) / 8.0;
    double h = neumann ? p.r_max / N : p.r_max / (N + 1);
    T.d.resize(N);
    T.e.assign(N - 1, -0.5 / (h * h));
    for (int i = 0; i < N; ++i) {
        double r = neumann ? (i + 0.5) * h : (i + 1) * h;
        T.d[i] = 1.0 / (h * h) + p.V(r * r) + cent / (r * r);
    }
    if (neumann) T.d[0] -= 0.5 / (h * h);  // even mirror across r = 0
    if (h_out) *h_out = h;
    return T;
}

inline std::vector<double> lowest_eigenvalues(const Tridiag& T, int count) {
    // Gershgorin interval
    double lo = T.d[0], hi = T.d[0];
    for (std::size_t i = 0; i < T.d.size(); ++i) {
        double w = 0.0;
        if (i > 0) w += std::fabs(T.e[i - 1]);
        if (i + 1 < T.d.size()) w += std::fabs(T.e[i]);
        lo = std::min(lo, T.d[i] - w);
        hi = std::max(hi, T.d[i] + w);
    }
    std::vector<double> out;
    for (int idx = 0; idx < count; ++idx) out.push_back(bisect_eigenvalue(T, idx, lo, hi));
    return out;
}

}  // namespace detail

/// Lowest `count` eigenpairs of the sector-k radial operator
/// -1/2 d^2/dr^2 - ((M+2k-1)/2r) d/dr + V(r^2) on L_2(R+, r^(M+2k-1) dr),
/// Dirichlet at r_max.  The Liouville transform makes the natural condition
/// at 0 a Dirichlet condition except for M + 2k = 1, which is an even
/// (Neumann) reflection.
inline SpectrumResult radial_solve(const RadialProblem& p, int count) {
    if (p.M < 1) throw NonPositiveSuperDimension("radial_solve: M >= 1 required");
    if (p.N < 16 || p.r_max <= 0.0) throw GridTooCoarse("radial_solve: need N >= 16, r_max > 0");
    if (count < 1) throw IndexOutOfRange("radial_solve: count >= 1");
    bool neumann = (p.M + 2 * p.k - 1) == 0;

    SpectrumResult res;
    res.neumann_at_zero = neumann;
    detail::Tridiag fine = detail::assemble_radial(p, p.N, neumann, &res.h);
    detail::Tridiag coarse = detail::assemble_radial(p, p.N / 2, neumann, nullptr);

    res.eigenvalues_raw = detail::lowest_eigenvalues(fine, count);
    std::vector<double> raw_coarse = detail::lowest_eigenvalues(coarse, count);
    for (int i = 0; i < count; ++i)
        res.eigenvalues.push_back((4.0 * res.eigenvalues_raw[i] - raw_coarse[i]) / 3.0);

    res.grid.resize(p.N);
    for (int i = 0; i < p.N; ++i) res.grid[i] = neumann ? (i + 0.5) * res.h : (i + 1) * res.h;
    for (int i = 0; i < count; ++i) {
        std::vector<double> psi = detail::inverse_iteration(fine, res.eigenvalues_raw[i]);
        double rs = detail::residual(fine, psi, res.eigenvalues_raw[i]);
        if (rs > 1e-8)
            throw GridTooCoarse("radial_solve: eigenpair residual " + std::to_string(rs));
        res.residuals.push_back(rs);
        // normalize sum psi^2 h = 1 and fix sign (first node positive)
        double nrm = 0.0;
        for (double v : psi) nrm += v * v;
        nrm = std::sqrt(nrm * res.h);
        double sgn = psi[0] < 0 ? -1.0 : 1.0;
        for (double& v : psi) v = v * sgn / nrm;
        res.profiles.push_back(std::move(psi));
    }
    return res;
}

struct LiftedState {
    double energy = 0.0;
    long k = 0;
    long multiplicity = 1;
    double projection_tail = 0.0;  // 1 - sum of squared Laguerre coefficients
    HermiteExpansion expansion;    // representative l = 1 coefficients
};

/// Project radial eigenfunctions onto the Laguerre radial basis of sector k
/// and reinterpret the coefficients as a_{j,k,l} (same profile for every l).
inline std::vector<LiftedState> lift_spectrum(const SpectrumResult& res, int m, int n, int k,
                                              int j_max = -1) {
    const long M = static_cast<long>(m) - 2 * n;
    if (M <= 0) throw NonPositiveSuperDimension("lift_spectrum: requires M > 0");
    long mult = dim_super_harmonics(m, n, k);
    double nu = static_cast<double>(M + 2 * k - 1);
    if (j_max < 0) j_max = static_cast<int>(res.eigenvalues.size()) + 40;

    // transformed orthonormal radial basis: ehat_j(r) = e_j(r) r^(nu/2) with
    // e_j = L_j^(M/2+k-1)(r^2) exp(-r^2/2) / zeta^M_{j,k}; evaluated through
    // the stable orthonormal recurrence (note 1/zeta^2 = 2 j!/Gamma(j+k+M/2))
    double alpha = 0.5 * M + k - 1.0;
    std::vector<std::vector<double>> ehat(j_max + 1, std::vector<double>(res.grid.size()));
    for (std::size_t i = 0; i < res.grid.size(); ++i) {
        double r = res.grid[i];
        std::vector<double> l = laguerre_orthonormal(j_max, alpha, r * r);
        double w = std::sqrt(2.0) * std::pow(r, 0.5 * nu);
        for (int j = 0; j <= j_max; ++j) ehat[j][i] = w * l[j];
    }

    std::vector<LiftedState> out;
    for (std::size_t s = 0; s < res.profiles.size(); ++s) {
        LiftedState st{res.eigenvalues[s], k, mult, 0.0, HermiteExpansion(m, n)};
        double mass = 0.0;
        for (int j = 0; j <= j_max; ++j) {
            double a = 0.0;
            for (std::size_t i = 0; i < res.grid.size(); ++i)
                a += res.profiles[s][i] * ehat[j][i];
            a *= res.h;
            if (std::fabs(a) > 1e-14) st.expansion.set(j, k, 1, a);
            mass += a * a;
        }
        st.projection_tail = std::fabs(1.0 - mass);
        if (st.projection_tail > 1e-6)
            throw BasisProjectionIncomplete("lift_spectrum: tail mass " +
                                            std::to_string(st.projection_tail));
        out.push_back(std::move(st));
    }
    return out;
}

struct SelfAdjointness {
    bool criterion_holds = false;
    double worst_margin = 0.0;
};

/// Samples V(u) + ((M-1)(M-3) - 3) / (8u) >= 0 on a log-spaced grid in
/// (0, u0].  A failed criterion is inconclusive, not a disproof.
inline SelfAdjointness self_adjointness_check(const std::function<double(double)>& V, int M,
                                              double u0, int samples = 64) {
    if (u0 <= 0.0 || samples < 2) throw IndexOutOfRange("self_adjointness_check: bad arguments");
    double c = (static_cast<double>(M - 1) * (M - 3) - 3.0) / 8.0;
    SelfAdjointness res;
    res.worst_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        double u = u0 * std::pow(1e-10, static_cast<double>(i) / (samples - 1));
        double margin = V(u) + c / u;
        res.worst_margin = std::min(res.worst_margin, margin);
    }
    res.criterion_holds = res.worst_margin >= 0.0;
    return res;
}

}  // namespace superspace
