#ifndef CATDIMER_TOMOGRAPHY_HPP
#define CATDIMER_TOMOGRAPHY_HPP

#include "liouville.hpp"

namespace catdimer {

/*
 * Sampled W(x,p) in quadrature units x = sqrt(2) Re(alpha), p = sqrt(2) Im(alpha).
 * Normalized so that the Riemann sum over a large enough grid is 1; the
 * vacuum peak is 1/pi in this convention.
 */
struct WignerMap
{
    Eigen::VectorXd x;
    Eigen::VectorXd p;
    Eigen::MatrixXd w; // w(i,j) = W(x(i), p(j))
    bool normalized = true;

    double dx() const { return x.size() > 1 ? x(1) - x(0) : 0.0; }
    double dp() const { return p.size() > 1 ? p(1) - p(0) : 0.0; }
};

struct WignerGrid
{
    double x_min, x_max;
    double p_min, p_max;
    int nx = 161;
    int np = 161;
};

// Default grid: +-(2 |sqrt(2) alpha_bar| + 3), 161 points per axis; this
// resolves the pi/(2|alpha'|) fringe period with >= 8 points.
inline WignerGrid default_wigner_grid(cxd alpha_bar)
{
    double r = 2.0 * std::sqrt(2.0) * std::abs(alpha_bar) + 3.0;
    return {-r, r, -r, r, 161, 161};
}

// Displaced-parity value (2/pi) Tr[D(-alpha) rho D(alpha) P]; this is the
// Wigner function in d^2alpha units.  Evaluated through the exact Laguerre
// form of the matrix elements of D(2 alpha) P, so the only truncation in play
// is the support of rho itself.
inline double wigner_point_alpha(const Mat& rho, cxd alpha)
{
    const int n = static_cast<int>(rho.rows());
    const cxd beta = 2.0 * alpha;
    const double xb = std::norm(beta);
    const double pref = std::exp(-0.5 * xb);

    // log sqrt(k!) table
    static thread_local std::vector<double> half_lgamma;
    if (static_cast<int>(half_lgamma.size()) < n + 1) {
        half_lgamma.resize(static_cast<std::size_t>(n + 1));
        for (int k = 0; k <= n; ++k) half_lgamma[static_cast<std::size_t>(k)] = 0.5 * std::lgamma(k + 1.0);
    }

    // D_{m,k}(beta) for m >= k:  sqrt(k!/m!) beta^{m-k} e^{-|b|^2/2} L_k^{(m-k)}(|b|^2)
    //               for m <  k:  sqrt(m!/k!) (-conj(beta))^{k-m} e^{-|b|^2/2} L_m^{(k-m)}(|b|^2)
    // Accumulate sum_{k} (-1)^k sum_m rho(k, m)... trace over Tr[rho D(2a) P]:
    //   = sum_{k,m} rho(m, k)... we need Tr[rho D P] = sum_{k,m} rho(k,m) [D P](m,k)
    //   = sum_{k,m} rho(k,m) D(m,k) (-1)^k.
    cxd acc = 0.0;
    for (int a = 0; a < n; ++a) { // a = |m-k| offset
        // upper branch m = k + a, lower branch uses (-conj(beta))^a
        cxd bp = (a == 0) ? cxd(1.0, 0.0) : std::pow(beta, a);
        cxd bm = (a == 0) ? cxd(1.0, 0.0) : std::pow(-std::conj(beta), a);
        // Laguerre recurrence in k for L_k^{(a)}(xb)
        double lkm1 = 0.0;
        double lk = 1.0; // L_0^{(a)} = 1
        for (int k = 0; k + a < n; ++k) {
            int m = k + a;
            double fac = std::exp(half_lgamma[static_cast<std::size_t>(k)] -
                                  half_lgamma[static_cast<std::size_t>(m)]) * pref * lk;
            double parity_k = (k % 2 == 0) ? 1.0 : -1.0;
            double parity_m = (m % 2 == 0) ? 1.0 : -1.0;
            // D(m,k): rho(k,m) contribution with (-1)^k
            acc += rho(k, m) * (fac * parity_k) * bp;
            if (a > 0) {
                // D(k,m) for k < m uses the lower branch; contributes with (-1)^m
                acc += rho(m, k) * (fac * parity_m) * bm;
            }
            // advance L_{k+1}^{(a)} = ((2k+1+a-x) L_k - (k+a) L_{k-1}) / (k+1)
            double lkp1 = ((2.0 * k + 1.0 + a - xb) * lk - (k + a) * lkm1) / (k + 1.0);
            lkm1 = lk;
            lk = lkp1;
        }
    }
    return (2.0 / M_PI) * acc.real();
}

inline WignerMap wigner(const DensityMatrix& rho, const WignerGrid& grid)
{
    if (rho.dims.modes() != 1)
        throw DimensionMismatch("wigner expects a single-mode state; reduce two-mode states first");
    WignerMap map;
    map.x = Eigen::VectorXd::LinSpaced(grid.nx, grid.x_min, grid.x_max);
    map.p = Eigen::VectorXd::LinSpaced(grid.np, grid.p_min, grid.p_max);
    map.w.resize(grid.nx, grid.np);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.np; ++j) {
            cxd alpha = cxd(map.x(i), map.p(j)) * inv_sqrt2;
            // factor 1/2 converts from d^2alpha to dx dp units
            map.w(i, j) = 0.5 * wigner_point_alpha(rho.m, alpha);
        }
    return map;
}

inline WignerMap wigner(const PureState& psi, const WignerGrid& grid)
{
    Mat rho = psi.a * psi.a.adjoint();
    return wigner(DensityMatrix{rho, psi.dims}, grid);
}

struct WignerNegativity
{
    double min_value = 0.0;
    double negative_volume = 0.0;
};

inline WignerNegativity wigner_negativity(const WignerMap& map)
{
    WignerNegativity r;
    r.min_value = map.w.minCoeff();
    double cell = map.dx() * map.dp();
    for (int i = 0; i < map.w.rows(); ++i)
        for (int j = 0; j < map.w.cols(); ++j)
            if (map.w(i, j) < 0.0) r.negative_volume += -map.w(i, j) * cell;
    return r;
}

inline double wigner_integral(const WignerMap& map)
{
    return map.w.sum() * map.dx() * map.dp();
}

// |<psi1|psi2>|^2
inline double fidelity_pure(const PureState& psi1, const PureState& psi2)
{
    require_same_dims(psi1.dims, psi2.dims, "fidelity_pure");
    return std::norm(psi1.a.dot(psi2.a));
}

inline double fidelity(const PureState& psi, const DensityMatrix& rho)
{
    require_same_dims(psi.dims, rho.dims, "fidelity");
    return std::clamp(psi.a.dot(rho.m * psi.a).real(), 0.0, 1.0);
}

// Partial trace over the discarded mode; keep = 0 retains the left factor.
inline DensityMatrix reduced_density(const DensityMatrix& rho, int keep)
{
    if (rho.dims.modes() != 2) throw DimensionMismatch("reduced_density expects a two-mode state");
    if (keep != 0 && keep != 1) throw DimensionMismatch("keep must be 0 or 1");
    const int nl = rho.dims.n_max(0), nr = rho.dims.n_max(1);
    if (keep == 0) {
        Mat out = Mat::Zero(nl, nl);
        for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nl; ++j)
                for (int k = 0; k < nr; ++k) out(i, j) += rho.m(i * nr + k, j * nr + k);
        return {out, Dims::single(nl)};
    }
    Mat out = Mat::Zero(nr, nr);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nr; ++j)
            for (int k = 0; k < nl; ++k) out(i, j) += rho.m(k * nr + i, k * nr + j);
    return {out, Dims::single(nr)};
}

inline DensityMatrix reduced_density(const PureState& psi, int keep)
{
    Mat rho = psi.a * psi.a.adjoint();
    return reduced_density(DensityMatrix{rho, psi.dims}, keep);
}

struct Observables
{
    double n_left = 0.0;
    double n_right = 0.0;
    double joint_parity = 0.0;
    double purity = 0.0;
};

inline Observables observables(const DensityMatrix& rho)
{
    Observables o;
    o.purity = (rho.m * rho.m).trace().real();
    if (rho.dims.modes() == 1) {
        o.n_left = expectation(rho, number_op(rho.dims)).real();
        o.joint_parity = expectation(rho, parity(rho.dims)).real();
        return o;
    }
    Dims dl = Dims::single(rho.dims.n_max(0));
    Dims dr = Dims::single(rho.dims.n_max(1));
    o.n_left = expectation(rho, embed(number_op(dl), 0, rho.dims)).real();
    o.n_right = expectation(rho, embed(number_op(dr), 1, rho.dims)).real();
    Operator pj = embed(parity(dl), 0, rho.dims);
    Operator pr = embed(parity(dr), 1, rho.dims);
    o.joint_parity = (pj.m * pr.m * rho.m).trace().real();
    return o;
}

inline Observables observables(const PureState& psi)
{
    Mat rho = psi.a * psi.a.adjoint();
    return observables(DensityMatrix{rho, psi.dims});
}

} // namespace catdimer

#endif // CATDIMER_TOMOGRAPHY_HPP
