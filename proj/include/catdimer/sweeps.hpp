#ifndef CATDIMER_SWEEPS_HPP
#define CATDIMER_SWEEPS_HPP

#include <atomic>
#include <functional>
#include <limits>
#include <thread>

#include "analytic.hpp"
#include "config.hpp"
#include "liouville.hpp"
#include "ratemodel.hpp"
#include "tomography.hpp"

namespace catdimer {

enum class SweepScale { linear, log };

struct SweepAxis
{
    std::string name; // delta, lambda, u, gamma, kappa, d_delta, d_lambda, d_u
    double min = 0.0;
    double max = 0.0;
    int count = 2;
    SweepScale scale = SweepScale::linear;

    std::vector<double> values() const
    {
        if (count < 2) throw ConfigError("sweep count must be >= 2");
        if (!Config::is_known(name) || name == "nmax_a" || name == "nmax_b")
            throw ConfigError("invalid sweep axis '" + name + "'");
        std::vector<double> v(static_cast<std::size_t>(count));
        if (scale == SweepScale::log) {
            if (min <= 0.0 || max <= 0.0) throw ConfigError("log sweep needs positive bounds");
            double l0 = std::log10(min), l1 = std::log10(max);
            for (int i = 0; i < count; ++i)
                v[static_cast<std::size_t>(i)] = std::pow(10.0, l0 + (l1 - l0) * i / (count - 1));
        } else {
            for (int i = 0; i < count; ++i)
                v[static_cast<std::size_t>(i)] = min + (max - min) * i / (count - 1);
        }
        return v;
    }
};

struct SweepConfig
{
    ABParams params;
    MismatchParams mismatch;
    SweepAxis axis;
    int nmax_a = 0; // 0 = auto from cat amplitude
    int nmax_b = 0;
    int workers = 0; // 0 = hardware concurrency
    bool numeric = false;
    bool with_wigner = false;
};

// Ordered parallel map over sweep points.
template <typename T>
std::vector<T> parallel_map(const std::vector<double>& xs, int workers,
                            const std::function<T(double)>& fn)
{
    int nw = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    nw = std::min<int>(nw, static_cast<int>(xs.size()));
    std::vector<T> out(xs.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= xs.size()) break;
                    out[i] = fn(xs[i]);
                }
            } catch (...) {
                errs[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

inline ABParams with_axis_value(ABParams p, MismatchParams& m, const std::string& axis, double v)
{
    if (axis == "delta") p.Delta = v;
    else if (axis == "lambda") p.lambda = v;
    else if (axis == "u") p.U = v;
    else if (axis == "gamma") p.gamma = v;
    else if (axis == "kappa") p.kappa = v;
    else if (axis == "d_delta") m.dDelta = v;
    else if (axis == "d_lambda") m.dLambda = v;
    else if (axis == "d_u") m.dU = v;
    else throw ConfigError("invalid sweep axis '" + axis + "'");
    return p;
}

inline int auto_nmax_d(const ABParams& p) { return recommended_n_max(cat_amplitude(p)); }

// ---------------------------------------------------------------------------
// Sweep kernels (one row per sweep point); the CLI serializes these to CSV.
// ---------------------------------------------------------------------------

struct SteadySweepRow
{
    double delta_over_u;
    double f_cat;
    double f_squeezed;
    double n_d_mean;
    double parity;
    double f_numeric_vs_analytic = -1.0; // -1 when --numeric not requested
};

inline SteadySweepRow steady_sweep_point(ABParams p, const SweepConfig& cfg)
{
    int nd = cfg.nmax_b > 0 ? cfg.nmax_b : auto_nmax_d(p);
    int nc = cfg.nmax_a > 0 ? cfg.nmax_a : 8;
    Dims dims = Dims::two(nc, nd);
    CDParams cd = p.to_cd();
    PureState ss = steady_state_cd(cd, dims);
    PureState d_mode{ss.a.segment(0, nd), Dims::single(nd)}; // c factor is |0>
    d_mode = d_mode.normalized();

    SteadySweepRow row{};
    row.delta_over_u = p.Delta / p.U;
    cxd abar = cat_amplitude(p);
    row.f_cat = fidelity_pure(d_mode, cat(std::sqrt(2.0) * abar, CatSign::even, Dims::single(nd)));
    if (2.0 * p.lambda / p.Delta < 1.0)
        row.f_squeezed = fidelity_pure(d_mode, squeezed_limit_state(p.Delta, p.lambda, Dims::single(nd)));
    else
        row.f_squeezed = std::numeric_limits<double>::quiet_NaN();
    row.n_d_mean = expectation(d_mode, number_op(Dims::single(nd))).real();
    row.parity = expectation(d_mode, parity(Dims::single(nd))).real();

    if (cfg.numeric) {
        Liouvillian L = build_liouvillian(hamiltonian_h2_cd(cd, dims), collapse_ops(p, Basis::cd, dims));
        DensityMatrix rho = steady_state_numeric(L);
        row.f_numeric_vs_analytic = fidelity(ss, rho);
    }
    return row;
}

struct LossSweepRow
{
    double kappa_over_u;
    double f_vs_exact;
    double f_vs_ideal_cat;
    double purity;
    double min_wigner = std::numeric_limits<double>::quiet_NaN();
};

// Ideal entangled-cat comparison state expressed in possibly-asymmetric cd
// dims: built in equal dims, rotated ab->cd, then truncated down.
inline PureState ideal_cat_in_cd(cxd abar, const Dims& cd_dims)
{
    int n_eq = std::max(cd_dims.n_max(0), cd_dims.n_max(1));
    Dims eq = Dims::two(n_eq, n_eq);
    PureState cat_ab = ideal_entangled_cat(abar, eq);
    PureState cat_cd = beamsplitter_map(cat_ab, BsDirection::ab_to_cd);
    Vec v(cd_dims.total());
    int nc = cd_dims.n_max(0), nd = cd_dims.n_max(1);
    double dropped = 1.0;
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nd; ++j) {
            v(i * nd + j) = cat_cd.a(i * n_eq + j);
            dropped -= std::norm(v(i * nd + j));
        }
    // the dropped mass bounds the fidelity error of the comparison, so a
    // loose 1e-4 suffices for sweep-level tolerances
    if (dropped > 1e-4)
        throw TruncationError("ideal cat loses " + std::to_string(dropped) + " when truncated to cd dims");
    return PureState{v, cd_dims}.normalized();
}

inline LossSweepRow loss_sweep_point(ABParams p, const SweepConfig& cfg)
{
    int nd = cfg.nmax_b > 0 ? cfg.nmax_b : auto_nmax_d(p);
    int nc = cfg.nmax_a > 0 ? cfg.nmax_a : 8;
    Dims dims = Dims::two(nc, nd);
    CDParams cd = p.to_cd();
    Liouvillian L = build_liouvillian(hamiltonian_h2_cd(cd, dims), collapse_ops(p, Basis::cd, dims));
    // sweep points sit far from the degenerate Delta = 0 manifold; skip the
    // second factorization of the uniqueness probe
    SteadyStateOptions opt;
    opt.check_uniqueness = false;
    DensityMatrix rho = steady_state_numeric(L, opt);
    PureState exact = steady_state_cd(cd, dims);
    PureState ideal = ideal_cat_in_cd(cat_amplitude(p), dims);

    LossSweepRow row{};
    row.kappa_over_u = p.kappa / p.U;
    row.f_vs_exact = fidelity(exact, rho);
    row.f_vs_ideal_cat = fidelity(ideal, rho);
    row.purity = observables(rho).purity;
    if (cfg.with_wigner) {
        DensityMatrix rd = reduced_density(rho, 1);
        WignerMap map = wigner(rd, default_wigner_grid(cat_amplitude(p)));
        row.min_wigner = wigner_negativity(map).min_value;
    }
    return row;
}

struct MismatchSweepRow
{
    double mismatch_value;
    double f_vs_exact;
};

// Lossless comparison state in small equal local-basis dims.  The
// delocalized d mode needs roughly twice the per-cavity truncation, so the
// state is built at full cd truncation, rotated, then cut down.
inline PureState exact_ab_truncated(const ABParams& p, const Dims& ab_dims, double drop_tol = 1e-5)
{
    int n_eq = std::max(std::max(ab_dims.n_max(0), ab_dims.n_max(1)), auto_nmax_d(p));
    PureState full = steady_state_ab(p, Dims::two(n_eq, n_eq));
    int nl = ab_dims.n_max(0), nr = ab_dims.n_max(1);
    Vec v(ab_dims.total());
    double dropped = 1.0;
    for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nr; ++j) {
            v(i * nr + j) = full.a(i * n_eq + j);
            dropped -= std::norm(v(i * nr + j));
        }
    if (dropped > drop_tol)
        throw TruncationError("local-basis steady state loses " + std::to_string(dropped) +
                              " when truncated to per-cavity n_max " + std::to_string(nl));
    return PureState{v, ab_dims}.normalized();
}

inline MismatchSweepRow mismatch_sweep_point(const ABParams& p, const MismatchParams& m,
                                             double value, const SweepConfig& cfg)
{
    // the local-basis Liouvillian factorizes far less sparsely than the
    // delocalized one, so the default truncation stays lean; per-cavity
    // occupation is ~|alpha_bar|^2 and the neglected mass enters fidelity
    // only linearly
    int n = cfg.nmax_a > 0 ? cfg.nmax_a : std::max(12, static_cast<int>(std::ceil(2.0 * std::norm(cat_amplitude(p)))) + 8);
    Dims dims = Dims::two(n, n);
    Liouvillian L = build_liouvillian(hamiltonian_mismatch(p, m, dims), collapse_ops(p, Basis::ab, dims));
    SteadyStateOptions opt;
    opt.check_uniqueness = false;
    DensityMatrix rho = steady_state_numeric(L, opt);
    PureState exact = exact_ab_truncated(p, dims);
    return {value, fidelity(exact, rho)};
}

} // namespace catdimer

#endif // CATDIMER_SWEEPS_HPP
