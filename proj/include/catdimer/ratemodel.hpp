#ifndef CATDIMER_RATEMODEL_HPP
#define CATDIMER_RATEMODEL_HPP

#include "analytic.hpp"
#include "tomography.hpp"

namespace catdimer {

/*
 * Orthonormal four-state basis of the two-mode cat manifold, in the local
 * (a,b) picture.  States 1 and 3 have odd joint parity, 2 and 4 even; the
 * even sector is rotated by theta so that state 2 is the exact dark state of
 * the correlated dissipator.
 */
struct CatManifold
{
    PureState s1, s2, s3, s4;
    cxd alpha_bar;
    double theta = 0.0;
    // Expanding the dark state over the normalized cat products gives
    // tan(theta) = e^{-2|alpha_bar|^2} exactly, so sin(theta) ~ the same.
    double sin_theta_asymptotic = 0.0;

    Dims dims() const { return s1.dims; }
};

inline CatManifold cat_basis(cxd alpha_bar, const Dims& dims)
{
    if (std::abs(alpha_bar) < 0.5)
        throw DegenerateInput("cat manifold ill-conditioned for |alpha_bar| < 0.5");
    if (dims.modes() != 2 || dims.n_max(0) != dims.n_max(1))
        throw DimensionMismatch("cat_basis needs two-mode dims with equal n_max");
    Dims dm = Dims::single(dims.n_max(0));
    PureState cp = cat(alpha_bar, CatSign::even, dm);
    PureState cm = cat(alpha_bar, CatSign::odd, dm);

    auto mix = [](const PureState& l1, const PureState& r1, const PureState& l2,
                  const PureState& r2, double sgn) {
        PureState t1 = tensor(l1, r1);
        PureState t2 = tensor(l2, r2);
        Vec v = (t1.a + sgn * t2.a) / std::sqrt(2.0);
        return PureState{v, t1.dims};
    };
    PureState s2t = mix(cp, cp, cm, cm, -1.0); // |2~>
    PureState s4t = mix(cp, cp, cm, cm, +1.0); // |4~>
    PureState s1 = mix(cp, cm, cm, cp, -1.0);
    PureState s3 = mix(cp, cm, cm, cp, +1.0);

    // Exact theta from the dark direction: the even-sector dark state is the
    // beam-splitter image of |0>_c C+(sqrt(2) alpha_bar)_d.
    PureState dark_cd = tensor(fock_state(0, dm), cat(std::sqrt(2.0) * alpha_bar, CatSign::even, dm));
    PureState dark_ab = beamsplitter_map(dark_cd, BsDirection::cd_to_ab);
    cxd o2 = overlap(s2t, dark_ab);
    cxd o4 = overlap(s4t, dark_ab);
    // strip the common phase; the in-plane components are relatively real
    cxd phase = (std::abs(o2) > std::abs(o4)) ? o2 / std::abs(o2) : o4 / std::abs(o4);
    double c = (o2 / phase).real();
    double s = (o4 / phase).real();
    double theta = std::atan2(s, c);

    CatManifold m;
    m.alpha_bar = alpha_bar;
    m.theta = theta;
    m.sin_theta_asymptotic = std::exp(-2.0 * std::norm(alpha_bar));
    m.s1 = s1;
    m.s3 = s3;
    m.s2 = PureState{std::cos(theta) * s2t.a + std::sin(theta) * s4t.a, dims};
    m.s4 = PureState{-std::sin(theta) * s2t.a + std::cos(theta) * s4t.a, dims};
    return m;
}

struct RateSet
{
    double delta_tilde = 0.0; // coherent 1<->3 tunneling amplitude
    double gamma_23 = 0.0;
    double gamma_43 = 0.0;
    double gamma_34 = 0.0;
    double gamma_delta = 0.0; // effective incoherent tunneling 1 -> {3,4}
    double gamma_rel = 0.0;
};

inline double gamma_rel_formula(double gamma_delta, double gamma_23)
{
    double a = 2.0 * gamma_delta;
    return 0.5 * (a + gamma_23 - std::sqrt(a * a + gamma_23 * gamma_23));
}

// Large-|alpha_bar| asymptotics.  Gamma_43 = 4 |alpha_bar|^2 gamma is the
// non-exponential bright-manifold rate consistent with both displayed forms
// of Gamma_Delta.
inline RateSet asymptotic_rates(cxd alpha_bar, double Delta, double gamma)
{
    if (gamma <= 0.0) throw DegenerateInput("asymptotic_rates requires gamma > 0");
    double a2 = std::norm(alpha_bar);
    RateSet r;
    r.delta_tilde = -4.0 * a2 * std::exp(-2.0 * a2) * Delta;
    r.gamma_23 = 16.0 * a2 * std::exp(-4.0 * a2) * gamma;
    r.gamma_43 = 4.0 * a2 * gamma;
    r.gamma_34 = 0.0; // no closed form quoted; extracted numerically only
    r.gamma_delta = 4.0 * r.delta_tilde * r.delta_tilde / (r.gamma_23 + r.gamma_43);
    r.gamma_rel = gamma_rel_formula(r.gamma_delta, r.gamma_23);
    return r;
}

// gamma maximizing Gamma_rel at fixed Delta is sqrt(2) Delta; a golden-section
// argmax of the closed formula cross-checks to 1%.
inline double optimal_gamma(cxd alpha_bar, double Delta)
{
    if (Delta <= 0.0) throw DegenerateInput("optimal_gamma requires Delta > 0");
    auto f = [&](double g) { return asymptotic_rates(alpha_bar, Delta, g).gamma_rel; };
    double lo = Delta / 10.0, hi = 10.0 * Delta;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    double numeric = 0.5 * (a + b);
    double closed = std::sqrt(2.0) * Delta;
    if (std::abs(numeric - closed) > 0.01 * closed)
        log_warn("optimal_gamma: numeric argmax " + std::to_string(numeric) +
                 " deviates from sqrt(2) Delta by more than 1%");
    return closed;
}

struct ProjectedRates
{
    RateSet numeric;
    RateSet asymptotic;
    double dark1_outflow = 0.0; // dissipator outflow from state 1 (units of gamma)
    double dark2_outflow = 0.0;
    double leakage_3 = 0.0; // fraction of outflow from 3 leaving the manifold
    double leakage_4 = 0.0;
    double max_parity_violation = 0.0; // |<even|a+b|even>| style elements
};

/*
 * Hilbert-Schmidt projection of the full master equation onto the 16-dim
 * operator space of the cat manifold.  Population-transfer rates are the
 * Tr[E_ii L(E_jj)] elements; the coherent tunneling amplitude is <1|H|3>.
 */
inline ProjectedRates projected_rates(const ABParams& p, const Dims& dims, double leakage_tol = 0.10)
{
    CatManifold man = cat_basis(cat_amplitude(p), dims);
    Operator h = hamiltonian_h2_ab(p, dims);
    auto jumps = collapse_ops(p, Basis::ab, dims);

    const PureState* st[4] = {&man.s1, &man.s2, &man.s3, &man.s4};
    auto lindblad_apply = [&](const Mat& x) {
        Mat out = cxd(0.0, -1.0) * (h.m * x - x * h.m);
        for (const auto& [rate, c] : jumps) {
            Mat cc = c.m.adjoint() * c.m;
            out += rate * (c.m * x * c.m.adjoint() - 0.5 * (cc * x + x * cc));
        }
        return out;
    };

    // population-transfer matrix T(i,j) = Tr[E_ii L(E_jj)]
    Eigen::Matrix4d T;
    double outflow[4];
    for (int j = 0; j < 4; ++j) {
        Mat e = st[j]->a * st[j]->a.adjoint();
        Mat le = lindblad_apply(e);
        for (int i = 0; i < 4; ++i) T(i, j) = (st[i]->a.adjoint() * le * st[i]->a)(0, 0).real();
        outflow[j] = -T(j, j);
    }

    ProjectedRates r;
    r.numeric.delta_tilde = (st[0]->a.adjoint() * h.m * st[2]->a)(0, 0).real();
    r.numeric.gamma_23 = std::max(T(1, 2), 0.0);
    r.numeric.gamma_43 = std::max(T(3, 2), 0.0);
    r.numeric.gamma_34 = std::max(T(2, 3), 0.0);
    double denom = r.numeric.gamma_23 + r.numeric.gamma_43;
    r.numeric.gamma_delta = denom > 0.0 ? 4.0 * r.numeric.delta_tilde * r.numeric.delta_tilde / denom : 0.0;
    r.numeric.gamma_rel = gamma_rel_formula(r.numeric.gamma_delta, r.numeric.gamma_23);
    r.asymptotic = asymptotic_rates(man.alpha_bar, p.Delta, p.gamma);

    r.dark1_outflow = outflow[0];
    r.dark2_outflow = outflow[1];
    auto leakage = [&](int j) {
        if (outflow[j] <= 0.0) return 0.0;
        double in_manifold = 0.0;
        for (int i = 0; i < 4; ++i)
            if (i != j) in_manifold += std::max(T(i, j), 0.0);
        return std::max(0.0, 1.0 - in_manifold / outflow[j]);
    };
    r.leakage_3 = leakage(2);
    r.leakage_4 = leakage(3);

    // parity selection: jump matrix elements between equal-parity states
    double viol = 0.0;
    for (const auto& [rate, c] : jumps) {
        (void)rate;
        int par[4] = {1, 0, 1, 0}; // 1 = odd joint parity
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (par[i] == par[j])
                    viol = std::max(viol, std::abs((st[i]->a.adjoint() * c.m * st[j]->a)(0, 0)));
    }
    r.max_parity_violation = viol;

    if (r.leakage_3 > leakage_tol || r.leakage_4 > leakage_tol)
        throw ManifoldLeakage("projected dissipator loses " +
                              std::to_string(std::max(r.leakage_3, r.leakage_4)) +
                              " of bright-state outflow to states outside the manifold");
    return r;
}

} // namespace catdimer

#endif // CATDIMER_RATEMODEL_HPP
