#ifndef CATDIMER_MODEL_HPP
#define CATDIMER_MODEL_HPP

#include <utility>
#include <vector>

#include "fock.hpp"

namespace catdimer {

/*
 * Parameters in the delocalized (c,d) picture: coupling scale Lambda, the
 * jump-operator coefficients mu0, mu1, nu, and the damping rate gamma of the
 * c mode.
 */
struct CDParams
{
    double Lambda = 1.0;
    double mu0 = 0.0;
    double mu1 = 1.0;
    double nu = 0.0;
    double gamma = 0.0;

    void validate() const
    {
        if (Lambda <= 0.0) throw DegenerateInput("Lambda must be > 0");
        if (mu1 < 0.0 || nu < 0.0 || gamma < 0.0)
            throw DegenerateInput("mu1, nu, gamma must be >= 0");
        if (mu0 == 0.0) log_warn("mu0 = 0: degenerate two-dark-state regime");
    }
};

/*
 * Parameters in the local (a,b) picture: detuning Delta, parametric drive
 * lambda, Kerr strength U, correlated loss gamma, local loss kappa per
 * cavity.  All rates share one frequency unit (the library is unit-agnostic;
 * the CLI defaults to U = 1).
 */
struct ABParams
{
    double Delta = 0.0;
    double lambda = 0.0;
    double U = 1.0;
    double gamma = 0.0;
    double kappa = 0.0;

    // Canonical gauge Lambda = U, so mu1 = 1, mu0 = Delta/U, nu = 2 lambda/U.
    CDParams to_cd() const
    {
        if (U <= 0.0) throw DegenerateInput("ABParams::to_cd requires U > 0 (Lambda = U gauge)");
        if (kappa < 0.0) throw DegenerateInput("kappa must be >= 0");
        return {U, Delta / U, 1.0, 2.0 * lambda / U, gamma};
    }
};

inline ABParams to_ab(const CDParams& p, double kappa = 0.0)
{
    p.validate();
    return {p.Lambda * p.mu0, p.Lambda * p.nu / 2.0, p.Lambda * p.mu1, p.gamma, kappa};
}

// Dimensionless relative mismatches of cavity b.  Zero triple reproduces the
// matched Hamiltonian exactly.
struct MismatchParams
{
    double dDelta = 0.0;
    double dLambda = 0.0;
    double dU = 0.0;
};

// ---------------------------------------------------------------------------
// Jump operators
// ---------------------------------------------------------------------------

// mu d + nu d^dag
inline Operator jump_z_squeezed(double mu, double nu, const Dims& dim)
{
    Operator a = annihilation(dim);
    return {mu * a.m + nu * a.m.adjoint(), dim};
}

// (mu0 + mu1 d^dag d) d + nu d^dag
inline Operator jump_z_cat(double mu0, double mu1, double nu, const Dims& dim)
{
    Operator a = annihilation(dim);
    Operator n = number_op(dim);
    return {(mu0 * Mat::Identity(n.m.rows(), n.m.cols()) + mu1 * n.m) * a.m + nu * a.m.adjoint(), dim};
}

// ---------------------------------------------------------------------------
// Hamiltonians
// ---------------------------------------------------------------------------

// Lambda (c^dag z_cat + z_cat^dag c), z_cat acting on mode d.
inline Operator hamiltonian_h1(const CDParams& p, const Dims& dims)
{
    p.validate();
    if (dims.modes() != 2) throw DimensionMismatch("hamiltonian_h1 needs two-mode dims");
    Operator c = embed(annihilation(Dims::single(dims.n_max(0))), 0, dims);
    Operator z = embed(jump_z_cat(p.mu0, p.mu1, p.nu, Dims::single(dims.n_max(1))), 1, dims);
    Mat h = p.Lambda * (c.m.adjoint() * z.m);
    return {h + h.adjoint().eval(), dims};
}

// H1 + (Lambda mu1 c^dag (c^dag c) d + h.c.)
inline Operator hamiltonian_h2_cd(const CDParams& p, const Dims& dims)
{
    Operator h1 = hamiltonian_h1(p, dims);
    Operator c = embed(annihilation(Dims::single(dims.n_max(0))), 0, dims);
    Operator d = embed(annihilation(Dims::single(dims.n_max(1))), 1, dims);
    Mat extra = p.Lambda * p.mu1 * (c.m.adjoint() * (c.m.adjoint() * c.m) * d.m);
    return {h1.m + extra + extra.adjoint().eval(), dims};
}

// Delta n_a + lambda (a^dag a^dag + h.c.) + U a^dag a^dag a a, minus the same
// for mode b.
inline Operator hamiltonian_h2_ab(const ABParams& p, const Dims& dims)
{
    if (dims.modes() != 2) throw DimensionMismatch("hamiltonian_h2_ab needs two-mode dims");
    if (dims.n_max(0) != dims.n_max(1))
        throw DimensionMismatch("hamiltonian_h2_ab requires equal n_max per mode");
    Operator a = embed(annihilation(Dims::single(dims.n_max(0))), 0, dims);
    Operator b = embed(annihilation(Dims::single(dims.n_max(1))), 1, dims);
    auto one_mode = [](const Mat& op, double Delta, double lambda, double U) {
        Mat ad = op.adjoint();
        Mat h = Delta * (ad * op) + U * (ad * ad * op * op);
        Mat drive = lambda * (ad * ad);
        return Mat(h + drive + drive.adjoint().eval());
    };
    Mat h = one_mode(a.m, p.Delta, p.lambda, p.U) - one_mode(b.m, p.Delta, p.lambda, p.U);
    return {h, dims};
}

// Mismatched-cavity Hamiltonian: cavity b coefficients scaled by (1 + dX).
inline Operator hamiltonian_mismatch(const ABParams& p, const MismatchParams& m, const Dims& dims)
{
    if (dims.modes() != 2) throw DimensionMismatch("hamiltonian_mismatch needs two-mode dims");
    if (dims.n_max(0) != dims.n_max(1))
        throw DimensionMismatch("hamiltonian_mismatch requires equal n_max per mode");
    Operator a = embed(annihilation(Dims::single(dims.n_max(0))), 0, dims);
    Operator b = embed(annihilation(Dims::single(dims.n_max(1))), 1, dims);
    Mat ad = a.m.adjoint(), bd = b.m.adjoint();
    Mat h = p.Delta * (ad * a.m - (1.0 + m.dDelta) * (bd * b.m));
    Mat drive = p.lambda * (ad * ad - (1.0 + m.dLambda) * (bd * bd));
    h += drive + drive.adjoint().eval();
    h += p.U * (ad * ad * a.m * a.m - (1.0 + m.dU) * (bd * bd * b.m * b.m));
    return {h, dims};
}

// ---------------------------------------------------------------------------
// Collapse operators
// ---------------------------------------------------------------------------

enum class Basis { ab, cd };

// ab basis: (gamma, a+b), (kappa, a), (kappa, b).
// cd basis: a+b = sqrt(2) c, stored rate-absorbed as (2 gamma, c); the local
// kappa losses are invariant under the 50/50 rotation, giving (kappa, c),
// (kappa, d).  Zero-rate entries are dropped.
inline std::vector<std::pair<double, Operator>> collapse_ops(const ABParams& p, Basis basis, const Dims& dims)
{
    if (dims.modes() != 2) throw DimensionMismatch("collapse_ops needs two-mode dims");
    if (p.gamma < 0.0 || p.kappa < 0.0) throw DegenerateInput("rates must be >= 0");
    Operator left = embed(annihilation(Dims::single(dims.n_max(0))), 0, dims);
    Operator right = embed(annihilation(Dims::single(dims.n_max(1))), 1, dims);
    std::vector<std::pair<double, Operator>> out;
    if (basis == Basis::ab) {
        if (p.gamma > 0.0) out.push_back({p.gamma, Operator{left.m + right.m, dims}});
        if (p.kappa > 0.0) {
            out.push_back({p.kappa, left});
            out.push_back({p.kappa, right});
        }
    } else {
        if (p.gamma > 0.0) out.push_back({2.0 * p.gamma, left});
        if (p.kappa > 0.0) {
            out.push_back({p.kappa, left});
            out.push_back({p.kappa, right});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Transmon straddling-regime Kerr calculator
// ---------------------------------------------------------------------------

struct EffectiveKerr
{
    double u_eff = 0.0;
    bool repulsive = false;   // u_eff > 0
    bool straddling = false;  // delta + U_qb < 0 with delta > 0
};

// U_eff = g^4 U_qb / (2 delta^3 (delta + U_qb/2))
inline EffectiveKerr transmon_effective_kerr(double g, double delta, double u_qb)
{
    if (delta == 0.0) throw SingularParameter("delta = 0");
    if (delta + u_qb / 2.0 == 0.0) throw SingularParameter("delta + U_qb/2 = 0");
    EffectiveKerr r;
    r.u_eff = std::pow(g, 4) * u_qb / (2.0 * std::pow(delta, 3) * (delta + u_qb / 2.0));
    r.repulsive = r.u_eff > 0.0;
    r.straddling = (delta > 0.0) && (delta + u_qb < 0.0);
    return r;
}

} // namespace catdimer

#endif // CATDIMER_MODEL_HPP
