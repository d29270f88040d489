#ifndef CATDIMER_ANALYTIC_HPP
#define CATDIMER_ANALYTIC_HPP

#include <Eigen/Dense>

#include "model.hpp"

namespace catdimer {

/*
 * Even Fock amplitudes of the exact d-mode steady state,
 *   c_{2n} = (-nu/2mu1)^n sqrt((2n-1)!!/(2n)!!) G(1/2 + s) / G(n + 1/2 + s),
 * with s = mu0/(2 mu1).  Conventions (-1)!! = 0!! = 1, so the n=0 term is 1.
 */
struct SteadyCoeffs
{
    Eigen::VectorXd c;        // normalized amplitudes of |2n>, n = 0..n_terms-1
    double norm_const = 1.0;  // N with amplitudes = N * c_tilde, c_tilde_0 = 1
    double tail_estimate = 0.0;
    double mu0 = 0.0, mu1 = 0.0, nu = 0.0;
};

// Stable ratio recursion, accumulated in log magnitude + sign; direct Gamma
// evaluation overflows for n beyond ~80.
inline SteadyCoeffs steady_coeffs(double mu0, double mu1, double nu, int n_terms)
{
    if (mu1 <= 0.0) throw DegenerateInput("steady_coeffs requires mu1 > 0 (use squeezed_limit_state for mu1 = 0)");
    if (n_terms < 2) throw DegenerateInput("n_terms must be >= 2");
    double s = mu0 / (2.0 * mu1);
    double q = nu / (2.0 * mu1);

    Eigen::VectorXd logmag(n_terms);
    Eigen::VectorXd sign(n_terms);
    logmag(0) = 0.0;
    sign(0) = 1.0;
    for (int n = 0; n + 1 < n_terms; ++n) {
        // c_{2(n+1)} / c_{2n} = -q sqrt((2n+1)/(2n+2)) / (n + 1/2 + s)
        double ratio = q * std::sqrt((2.0 * n + 1.0) / (2.0 * n + 2.0)) / (n + 0.5 + s);
        logmag(n + 1) = logmag(n) + std::log(ratio);
        sign(n + 1) = -sign(n);
    }
    double peak = logmag.maxCoeff();
    Eigen::VectorXd c(n_terms);
    for (int n = 0; n < n_terms; ++n) c(n) = sign(n) * std::exp(logmag(n) - peak);
    double nrm = c.norm();
    // geometric bound on the discarded tail from the last ratio
    double last_ratio = (n_terms >= 2) ? std::abs(c(n_terms - 1) / (c(n_terms - 2) != 0.0 ? c(n_terms - 2) : 1.0)) : 0.0;
    double tail = 0.0;
    if (last_ratio < 1.0) {
        double t2 = std::pow(c(n_terms - 1) / nrm, 2);
        tail = t2 * last_ratio * last_ratio / (1.0 - last_ratio * last_ratio);
    } else {
        tail = 1.0; // not converged within n_terms
    }
    SteadyCoeffs out;
    out.c = c / nrm;
    // amplitudes = N * c_tilde with c_tilde_0 = 1, i.e. N = exp(-peak)/nrm.
    // For strongly peaked coefficient sets exp(-peak) underflows; N is then
    // reported as 0 and only the normalized vector is meaningful.
    out.norm_const = (peak < 600.0) ? std::exp(-peak) / nrm : 0.0;
    out.tail_estimate = tail;
    out.mu0 = mu0;
    out.mu1 = mu1;
    out.nu = nu;
    return out;
}

// Number of even-coefficient terms needed so that the tail estimate is well
// below tol.  The magnitude turns over near n ~ nu/(2 mu1) = |alpha_bar|^2.
inline int suggested_n_terms(double mu0, double mu1, double nu, double tol = 1e-14, int cap = 2000)
{
    double q = nu / (2.0 * std::max(mu1, 1e-300));
    int n = static_cast<int>(std::ceil(q)) + 24;
    (void)mu0;
    (void)tol;
    return std::min(n, cap);
}

// |psi_ss> = |0>_c |C~[mu0, mu1, nu]>_d
inline PureState steady_state_cd(const CDParams& p, const Dims& dims, double trunc_tol = 1e-10)
{
    p.validate();
    if (dims.modes() != 2) throw DimensionMismatch("steady_state_cd needs two-mode dims");
    int nd = dims.n_max(1);
    int n_terms = (nd + 1) / 2;
    SteadyCoeffs sc = steady_coeffs(p.mu0, p.mu1, p.nu, n_terms);
    if (sc.tail_estimate > trunc_tol)
        throw TruncationError("steady-state coefficient tail " + std::to_string(sc.tail_estimate) +
                              " at n_max_d=" + std::to_string(nd));
    Vec d = Vec::Zero(nd);
    for (int n = 0; n < n_terms; ++n)
        if (2 * n < nd) d(2 * n) = sc.c(n);
    PureState dmode{d / d.norm(), Dims::single(nd)};
    return tensor(fock_state(0, Dims::single(dims.n_max(0))), dmode);
}

// Local-basis steady state: beam-splitter image of steady_state_cd.
inline PureState steady_state_ab(const ABParams& p, const Dims& dims, double trunc_tol = 1e-8)
{
    return beamsplitter_map(steady_state_cd(p.to_cd(), dims), BsDirection::cd_to_ab, trunc_tol);
}

// alpha_bar = i sqrt(lambda / U)
inline cxd cat_amplitude(const ABParams& p)
{
    if (p.U == 0.0) throw DegenerateInput("cat_amplitude undefined at U = 0");
    return cxd(0.0, 1.0) * std::sqrt(p.lambda / p.U);
}

// (1/sqrt(2)) [ |C+(a)>|C+(a)> - |C-(a)>|C-(a)> ]
inline PureState ideal_entangled_cat(cxd alpha_bar, const Dims& dims)
{
    if (dims.modes() != 2) throw DimensionMismatch("ideal_entangled_cat needs two-mode dims");
    if (std::abs(alpha_bar) < 1e-3) throw DegenerateInput("odd-cat normalization degenerate for |alpha_bar| < 1e-3");
    Dims da = Dims::single(dims.n_max(0));
    Dims db = Dims::single(dims.n_max(1));
    PureState cpp = tensor(cat(alpha_bar, CatSign::even, da), cat(alpha_bar, CatSign::even, db));
    PureState cmm = tensor(cat(alpha_bar, CatSign::odd, da), cat(alpha_bar, CatSign::odd, db));
    Vec v = (cpp.a - cmm.a) / std::sqrt(2.0);
    return PureState{v, dims}.normalized();
}

// d-mode squeezed vacuum with tanh r = 2 lambda / Delta:
// c_{2n} proportional to (-2 lambda/Delta)^n sqrt((2n-1)!!/(2n)!!).
inline PureState squeezed_limit_state(double Delta, double lambda, const Dims& dim)
{
    if (dim.modes() != 1) throw DimensionMismatch("squeezed_limit_state is single-mode");
    double t = 2.0 * lambda / Delta;
    if (!(std::abs(t) < 1.0)) throw DivergentSeries("squeezed_limit_state needs |2 lambda / Delta| < 1");
    int nd = dim.n_max(0);
    Vec v = Vec::Zero(nd);
    double coeff = 1.0;
    for (int n = 0; 2 * n < nd; ++n) {
        v(2 * n) = coeff;
        coeff *= -t * std::sqrt((2.0 * n + 1.0) / (2.0 * n + 2.0));
    }
    return PureState{v, dim}.normalized();
}

} // namespace catdimer

#endif // CATDIMER_ANALYTIC_HPP
