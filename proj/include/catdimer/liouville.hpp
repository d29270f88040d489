#ifndef CATDIMER_LIOUVILLE_HPP
#define CATDIMER_LIOUVILLE_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "model.hpp"

namespace catdimer {

using SpMat = Eigen::SparseMatrix<cxd>;
using Triplet = Eigen::Triplet<cxd>;

/*
 * Vectorization is column-stacking throughout: vec(rho)[c*D + r] = rho(r,c),
 * so vec(A X B) = (B^T kron A) vec(X).  The Lindblad generator is
 *   L = -i (I kron H - H^T kron I)
 *       + sum_k r_k [ conj(C) kron C - 1/2 I kron (C^dag C) - 1/2 (C^dag C)^T kron I ]
 * with kron(P,Q)[p*D+q, p'*D+q'] = P(p,p') Q(q,q').
 */
struct Liouvillian
{
    SpMat m;
    Dims dims;
    std::vector<std::pair<double, Operator>> jumps;

    int hilbert_dim() const { return dims.total(); }
};

namespace detail {

// kron(P, Q) appended to triplets, skipping exact zeros of the dense factors.
inline void kron_into(std::vector<Triplet>& trips, const Mat& p, const Mat& q, cxd scale)
{
    const int dp = static_cast<int>(p.rows());
    const int dq = static_cast<int>(q.rows());
    for (int pi = 0; pi < dp; ++pi)
        for (int pj = 0; pj < dp; ++pj) {
            cxd pv = p(pi, pj);
            if (pv == 0.0) continue;
            for (int qi = 0; qi < dq; ++qi)
                for (int qj = 0; qj < dq; ++qj) {
                    cxd qv = q(qi, qj);
                    if (qv == 0.0) continue;
                    trips.emplace_back(pi * dq + qi, pj * dq + qj, scale * pv * qv);
                }
        }
}

} // namespace detail

inline Vec vec(const Mat& rho)
{
    const int d = static_cast<int>(rho.rows());
    Vec v(d * d);
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) v(c * d + r) = rho(r, c);
    return v;
}

inline Mat unvec(const Vec& v)
{
    const int d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    Mat rho(d, d);
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) rho(r, c) = v(c * d + r);
    return rho;
}

inline Liouvillian build_liouvillian(const Operator& h, const std::vector<std::pair<double, Operator>>& collapse)
{
    const int d = h.dims.total();
    if (h.m.rows() != d) throw DimensionMismatch("hamiltonian size vs dims");
    for (const auto& [rate, c] : collapse)
        require_same_dims(c.dims, h.dims, "build_liouvillian collapse operator");

    std::vector<Triplet> trips;
    const Mat eye = Mat::Identity(d, d);
    const cxd mi(0.0, -1.0);
    detail::kron_into(trips, eye, h.m, mi);
    detail::kron_into(trips, h.m.transpose(), eye, -mi);
    for (const auto& [rate, c] : collapse) {
        if (rate == 0.0) continue;
        Mat cc = c.m.adjoint() * c.m;
        detail::kron_into(trips, c.m.conjugate(), c.m, rate);
        detail::kron_into(trips, eye, cc, -0.5 * rate);
        detail::kron_into(trips, cc.transpose(), eye, -0.5 * rate);
    }
    SpMat L(d * d, d * d);
    L.setFromTriplets(trips.begin(), trips.end());
    L.makeCompressed();
    return {std::move(L), h.dims, collapse};
}

inline double liouvillian_norm(const Liouvillian& L)
{
    // max absolute row sum
    const SpMat lt = SpMat(L.m.transpose());
    double best = 0.0;
    for (int k = 0; k < lt.outerSize(); ++k) {
        double s = 0.0;
        for (SpMat::InnerIterator it(lt, k); it; ++it) s += std::abs(it.value());
        best = std::max(best, s);
    }
    return best;
}

// ||vec(I)^dag L||, the trace-preservation residual; < 1e-10 for any CPTP build.
inline double trace_functional_residual(const Liouvillian& L)
{
    const int d = L.hilbert_dim();
    Vec tr = Vec::Zero(d * d);
    for (int i = 0; i < d; ++i) tr(i * d + i) = 1.0;
    Vec r = L.m.adjoint() * tr;
    return r.norm();
}

namespace detail {

inline Mat hermitize_normalize(Mat rho)
{
    rho = 0.5 * (rho + rho.adjoint().eval());
    cxd t = rho.trace();
    if (std::abs(t) < 1e-300) throw SolverFailure("steady-state candidate has zero trace");
    return rho / t;
}

// Solve the rank-completed system: L with one row replaced by the trace
// constraint, RHS = e_row.
inline Mat trace_replaced_solve(const Liouvillian& L, int replaced_diag_index)
{
    const int d = L.hilbert_dim();
    const int n = d * d;
    const int row = replaced_diag_index * d + replaced_diag_index;
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(L.m.nonZeros()) + static_cast<std::size_t>(d));
    for (int k = 0; k < L.m.outerSize(); ++k)
        for (SpMat::InnerIterator it(L.m, k); it; ++it)
            if (it.row() != row) trips.emplace_back(it.row(), it.col(), it.value());
    for (int i = 0; i < d; ++i) trips.emplace_back(row, i * d + i, cxd(1.0, 0.0));
    SpMat A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();

    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SolverFailure("sparse LU factorization failed");
    Vec rhs = Vec::Zero(n);
    rhs(row) = 1.0;
    Vec x = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw SolverFailure("sparse LU solve failed");
    return unvec(x);
}

} // namespace detail

struct SteadyStateOptions
{
    double rel_residual_tol = 1e-10;
    double uniqueness_fidelity_tol = 1e-6;
    double psd_slack = 1e-8;
    bool check_uniqueness = true;
};

// Uhlmann fidelity (Tr sqrt(sqrt(r1) r2 sqrt(r1)))^2, clamped to [0,1].
inline double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2)
{
    require_same_dims(rho1.dims, rho2.dims, "fidelity");
    Eigen::SelfAdjointEigenSolver<Mat> es1(rho1.m);
    if (es1.info() != Eigen::Success) throw SolverFailure("fidelity: eigendecomposition failed");
    if (es1.eigenvalues().minCoeff() < -1e-8 )
        throw NonPSDInput("fidelity: rho1 min eigenvalue " + std::to_string(es1.eigenvalues().minCoeff()));
    Eigen::VectorXd ev = es1.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Mat sq = es1.eigenvectors() * ev.asDiagonal() * es1.eigenvectors().adjoint();
    Mat inner = sq * rho2.m * sq;
    inner = 0.5 * (inner + inner.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Mat> es2(inner, Eigen::EigenvaluesOnly);
    if (es2.eigenvalues().minCoeff() < -1e-8)
        throw NonPSDInput("fidelity: rho2 min eigenvalue produced negative inner spectrum");
    double s = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::clamp(s * s, 0.0, 1.0);
}

inline DensityMatrix steady_state_numeric(const Liouvillian& L, const SteadyStateOptions& opt = {})
{
    const int d = L.hilbert_dim();
    Mat rho = detail::hermitize_normalize(detail::trace_replaced_solve(L, 0));

    double lnorm = liouvillian_norm(L);
    double res = (L.m * vec(rho)).norm();
    if (res > opt.rel_residual_tol * std::max(lnorm, 1.0)) {
        // retry from a different replaced row before declaring failure; the
        // first diagonal element may sit in a numerically bad pivot position
        Mat rho2 = detail::hermitize_normalize(detail::trace_replaced_solve(L, d / 2));
        double res2 = (L.m * vec(rho2)).norm();
        if (res2 > opt.rel_residual_tol * std::max(lnorm, 1.0))
            throw NonUniqueSteadyState("trace-replaced solves do not satisfy L rho = 0 (residuals " +
                                       std::to_string(res) + ", " + std::to_string(res2) +
                                       "); null space likely not one-dimensional");
        rho = rho2;
        res = res2;
    }

    if (opt.check_uniqueness) {
        // Hilbert-Schmidt comparison of two independent particular solutions;
        // deliberately not Uhlmann fidelity, since a degenerate null space can
        // hand back slightly non-positive candidates.
        Mat rho2 = detail::hermitize_normalize(detail::trace_replaced_solve(L, 1 % d));
        double res2 = (L.m * vec(rho2)).norm();
        if (res2 <= opt.rel_residual_tol * std::max(lnorm, 1.0) * 1e3) {
            double dist = (rho / rho.norm() - rho2 / rho2.norm()).norm();
            if (dist > opt.uniqueness_fidelity_tol)
                throw NonUniqueSteadyState("independent solves disagree, distance " + std::to_string(dist));
        }
    }

    Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -opt.psd_slack)
        // a Hermitian unit-trace solution with tiny residual but a genuinely
        // negative eigenvalue means the null space holds non-physical
        // elements, i.e. it is not one-dimensional
        throw NonUniqueSteadyState("steady-state candidate has negative eigenvalue " +
                                   std::to_string(es.eigenvalues().minCoeff()) +
                                   "; degenerate steady-state manifold suspected");
    return {rho, L.dims};
}

// ---------------------------------------------------------------------------
// Time evolution: Krylov (Arnoldi) action of exp(t L) with adaptive substeps.
// ---------------------------------------------------------------------------

namespace detail {

inline Vec expmv(const SpMat& A, Vec v, double t, double tol = 1e-9, int m_max = 40)
{
    if (t == 0.0 || v.norm() == 0.0) return v;
    const int n = static_cast<int>(v.size());
    const int m = std::min(m_max, n - 1);
    // max absolute row sum; the substep must keep tau*||A|| moderate or the
    // small exponential exp(tau H_k) underflows and the error estimate with it
    double anorm = 0.0;
    {
        Eigen::VectorXd rs = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < A.outerSize(); ++k)
            for (SpMat::InnerIterator it(A, k); it; ++it) rs(it.row()) += std::abs(it.value());
        anorm = std::max(rs.maxCoeff(), 1e-300);
    }
    const double tau_cap = 100.0 / anorm;
    double t_done = 0.0;
    double tau = std::min(t, 10.0 / anorm);
    int guard = 0;
    while (t_done < t) {
        if (++guard > 1000000) throw SolverFailure("expmv substep limit exceeded");
        tau = std::min({tau, t - t_done, tau_cap});
        double beta = v.norm();
        Eigen::MatrixXcd V(n, m + 1);
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 2, m + 1);
        V.col(0) = v / beta;
        int k = 0;
        bool breakdown = false;
        for (; k < m; ++k) {
            Vec w = A * V.col(k);
            for (int j = 0; j <= k; ++j) {
                cxd hij = V.col(j).dot(w);
                H(j, k) = hij;
                w -= hij * V.col(j);
            }
            // one reorthogonalization pass
            for (int j = 0; j <= k; ++j) {
                cxd corr = V.col(j).dot(w);
                H(j, k) += corr;
                w -= corr * V.col(j);
            }
            double hn = w.norm();
            H(k + 1, k) = hn;
            if (hn < 1e-14) {
                breakdown = true;
                ++k;
                break;
            }
            V.col(k + 1) = w / hn;
        }
        Eigen::MatrixXcd Hk = H.topLeftCorner(k, k);
        Eigen::MatrixXcd E = (tau * Hk).exp();
        Vec y = beta * (V.leftCols(k) * E.col(0));
        double err = breakdown ? 0.0
                               : std::abs(H(k, k - 1)) * std::abs(E(k - 1, 0)) * beta * tau;
        if (err <= tol * std::max(1.0, y.norm()) || breakdown) {
            v = y;
            t_done += tau;
            if (err < 0.1 * tol * std::max(1.0, y.norm())) tau *= 1.8;
        } else {
            tau *= 0.5;
            if (tau < 1e-14 * std::abs(t)) throw SolverFailure("expmv step size underflow");
        }
    }
    return v;
}

} // namespace detail

struct EvolveOptions
{
    double tol = 1e-9;
    double boundary_tol = 1e-6;   // TruncationError threshold on top-level population
    bool check_truncation = true;
};

double truncation_worst(const DensityMatrix&); // defined below

inline std::vector<DensityMatrix> evolve(const DensityMatrix& rho0, const Liouvillian& L,
                                         const std::vector<double>& times, const EvolveOptions& opt = {})
{
    require_same_dims(rho0.dims, L.dims, "evolve");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0) throw SolverFailure("evolve times must be >= 0");
        if (i > 0 && times[i] < times[i - 1]) throw SolverFailure("evolve times must be ascending");
    }
    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    Vec v = vec(rho0.m);
    double t_now = 0.0;
    for (double t : times) {
        v = detail::expmv(L.m, v, t - t_now);
        t_now = t;
        Mat rho = unvec(v);
        rho = 0.5 * (rho + rho.adjoint().eval());
        DensityMatrix dm{rho, L.dims};
        if (opt.check_truncation && truncation_worst(dm) > opt.boundary_tol)
            throw TruncationError("boundary-level population during evolve at t=" + std::to_string(t));
        out.push_back(dm);
        v = vec(rho);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Slow spectrum: block inverse iteration + Rayleigh-Ritz near zero.
// ---------------------------------------------------------------------------

struct SpectralGapResult
{
    double gap = 0.0;              // -max{Re mu : |mu| > zero_tol}
    int zero_modes = 0;            // eigenvalues with |mu| < zero_tol
    double zero_tol = 0.0;
    std::vector<cxd> slow_eigenvalues;
};

inline SpectralGapResult spectral_gap(const Liouvillian& L, int n_eigs = 8, int iters = 25,
                                      unsigned seed = 7)
{
    const int n = static_cast<int>(L.m.rows());
    const int k = std::min(n_eigs, n);
    const double scale = liouvillian_norm(L);
    const double sigma = 1e-9 * std::max(scale, 1.0);
    const double zero_tol = 1e-8 * std::max(scale, 1.0);

    SpMat A = L.m;
    for (int i = 0; i < n; ++i) A.coeffRef(i, i) -= sigma;
    A.makeCompressed();
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SolverFailure("spectral_gap: shifted LU failed");

    std::mt19937 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXcd Y(n, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < n; ++i) Y(i, j) = cxd(nd(rng), nd(rng));

    for (int it = 0; it < iters; ++it) {
        Eigen::MatrixXcd Z(n, k);
        for (int j = 0; j < k; ++j) Z.col(j) = lu.solve(Y.col(j));
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
        Y = qr.householderQ() * Eigen::MatrixXcd::Identity(n, k);
    }
    // Rayleigh-Ritz on L restricted to the converged subspace
    Eigen::MatrixXcd B = Y.adjoint() * (L.m * Y);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(B);
    if (es.info() != Eigen::Success) throw SolverFailure("spectral_gap: dense eigensolve failed");

    SpectralGapResult res;
    res.zero_tol = zero_tol;
    std::vector<cxd> eigs(es.eigenvalues().data(), es.eigenvalues().data() + k);
    std::sort(eigs.begin(), eigs.end(), [](cxd a, cxd b) { return std::abs(a) < std::abs(b); });
    res.slow_eigenvalues = eigs;
    double worst_re = 0.0;
    bool found = false;
    for (cxd mu : eigs) {
        if (std::abs(mu) < zero_tol) {
            ++res.zero_modes;
        } else if (!found || mu.real() > worst_re) {
            worst_re = found ? std::max(worst_re, mu.real()) : mu.real();
            found = true;
        }
    }
    if (!found) throw SolverFailure("spectral_gap: no nonzero slow eigenvalue resolved");
    res.gap = -worst_re;
    return res;
}

// ---------------------------------------------------------------------------
// Truncation diagnostics
// ---------------------------------------------------------------------------

struct TruncationReport
{
    std::vector<double> top_two_population; // per mode
    double tol = 0.0;
    bool pass = true;
};

namespace detail {

inline std::vector<double> mode_populations_top_two(const Mat& rho, const Dims& dims)
{
    std::vector<double> out;
    if (dims.modes() == 1) {
        const int d = dims.n_max(0);
        out.push_back(std::abs(rho(d - 1, d - 1)) + std::abs(rho(d - 2, d - 2)));
    } else {
        const int nl = dims.n_max(0), nr = dims.n_max(1);
        double wl = 0.0, wr = 0.0;
        for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nr; ++j) {
                double p = std::abs(rho(i * nr + j, i * nr + j));
                if (i >= nl - 2) wl += p;
                if (j >= nr - 2) wr += p;
            }
        out.push_back(wl);
        out.push_back(wr);
    }
    return out;
}

} // namespace detail

inline TruncationReport truncation_check(const DensityMatrix& rho, double tol = 1e-8)
{
    TruncationReport r;
    r.tol = tol;
    r.top_two_population = detail::mode_populations_top_two(rho.m, rho.dims);
    for (double w : r.top_two_population)
        if (w > tol) r.pass = false;
    return r;
}

inline TruncationReport truncation_check(const PureState& psi, double tol = 1e-8)
{
    Mat rho = psi.a * psi.a.adjoint();
    return truncation_check(DensityMatrix{rho, psi.dims}, tol);
}

inline double truncation_worst(const DensityMatrix& rho)
{
    auto pops = detail::mode_populations_top_two(rho.m, rho.dims);
    return *std::max_element(pops.begin(), pops.end());
}

// Sign of the Liouvillian spectral gap as an empirical stability probe for a
// parameter set (positive gap = relaxing towards a unique attractor).
inline double stability_probe(const ABParams& p, const Dims& dims)
{
    Liouvillian L = build_liouvillian(hamiltonian_h2_cd(p.to_cd(), dims), collapse_ops(p, Basis::cd, dims));
    return spectral_gap(L).gap;
}

// ---------------------------------------------------------------------------
// Debug dump: little-endian COO triplets.  Not a stability-guaranteed format.
// Layout: magic "CDLV", u32 version=1, u64 rows, u64 cols, u64 nnz, then nnz
// records of (u64 row, u64 col, f64 re, f64 im).
// ---------------------------------------------------------------------------

inline void dump_sparse(const SpMat& m, const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SolverFailure("cannot open dump file " + path);
    const char magic[4] = {'C', 'D', 'L', 'V'};
    f.write(magic, 4);
    std::uint32_t version = 1;
    f.write(reinterpret_cast<const char*>(&version), 4);
    std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
    std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
    std::uint64_t nnz = static_cast<std::uint64_t>(m.nonZeros());
    f.write(reinterpret_cast<const char*>(&rows), 8);
    f.write(reinterpret_cast<const char*>(&cols), 8);
    f.write(reinterpret_cast<const char*>(&nnz), 8);
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it) {
            std::uint64_t r = static_cast<std::uint64_t>(it.row());
            std::uint64_t c = static_cast<std::uint64_t>(it.col());
            double re = it.value().real(), im = it.value().imag();
            f.write(reinterpret_cast<const char*>(&r), 8);
            f.write(reinterpret_cast<const char*>(&c), 8);
            f.write(reinterpret_cast<const char*>(&re), 8);
            f.write(reinterpret_cast<const char*>(&im), 8);
        }
}

} // namespace catdimer

#endif // CATDIMER_LIOUVILLE_HPP
