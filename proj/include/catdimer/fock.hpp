#ifndef CATDIMER_FOCK_HPP
#define CATDIMER_FOCK_HPP

#include <cmath>
#include <complex>
#include <cstdlib>
#include <iostream>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "errors.hpp"

namespace catdimer {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline bool log_enabled()
{
    static const bool on = [] {
        const char* v = std::getenv("CATDIMER_LOG");
        return v != nullptr && std::string(v) != "quiet" && std::string(v) != "0";
    }();
    return on;
}

inline void log_warn(const std::string& msg)
{
    if (log_enabled()) std::cerr << "[catdimer] warning: " << msg << "\n";
}

/*
 * Truncation descriptor for a one- or two-mode Fock space.  The left tensor
 * factor is always mode a (or c); this ordering is fixed everywhere and is
 * never inferred from matrix sizes.
 */
class Dims
{
public:
    static Dims single(int n_max)
    {
        check(n_max);
        Dims d;
        d.m_n = {n_max};
        return d;
    }

    static Dims two(int n_max_left, int n_max_right)
    {
        check(n_max_left);
        check(n_max_right);
        Dims d;
        d.m_n = {n_max_left, n_max_right};
        return d;
    }

    int modes() const { return static_cast<int>(m_n.size()); }
    int n_max(int mode) const { return m_n.at(static_cast<std::size_t>(mode)); }

    int total() const
    {
        int t = 1;
        for (int n : m_n) t *= n;
        return t;
    }

    bool operator==(const Dims& o) const { return m_n == o.m_n; }
    bool operator!=(const Dims& o) const { return !(*this == o); }

private:
    static void check(int n_max)
    {
        if (n_max < 2) throw DimensionMismatch("n_max must be >= 2, got " + std::to_string(n_max));
    }

    std::vector<int> m_n;
};

struct Operator
{
    Mat m;
    Dims dims;
};

struct PureState
{
    Vec a;
    Dims dims;

    double norm() const { return a.norm(); }

    PureState normalized() const
    {
        double n = a.norm();
        if (n == 0.0) throw DegenerateInput("cannot normalize zero state");
        return {a / n, dims};
    }
};

struct DensityMatrix
{
    Mat m;
    Dims dims;

    double trace_real() const { return m.trace().real(); }
};

inline void require_same_dims(const Dims& x, const Dims& y, const char* where)
{
    if (x != y) throw DimensionMismatch(where);
}

// ---------------------------------------------------------------------------
// Single-mode operators
// ---------------------------------------------------------------------------

inline Operator identity(const Dims& dims)
{
    return {Mat::Identity(dims.total(), dims.total()), dims};
}

inline Operator annihilation(const Dims& dim)
{
    if (dim.modes() != 1) throw DimensionMismatch("annihilation expects a single-mode dim");
    int n = dim.n_max(0);
    Mat a = Mat::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return {a, dim};
}

inline Operator creation(const Dims& dim)
{
    Operator a = annihilation(dim);
    return {a.m.adjoint(), dim};
}

inline Operator number_op(const Dims& dim)
{
    if (dim.modes() != 1) throw DimensionMismatch("number_op expects a single-mode dim");
    int n = dim.n_max(0);
    Mat nd = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) nd(k, k) = static_cast<double>(k);
    return {nd, dim};
}

// Diagonal (-1)^n photon-number parity.
inline Operator parity(const Dims& dim)
{
    if (dim.modes() != 1) throw DimensionMismatch("parity expects a single-mode dim");
    int n = dim.n_max(0);
    Mat p = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
    return {p, dim};
}

// exp(alpha a^dag - alpha^* a).  Unitary up to truncation; a warning is
// emitted when ||D^dag D - 1|| exceeds 1e-8.
inline Operator displacement(cxd alpha, const Dims& dim)
{
    Operator a = annihilation(dim);
    Mat g = alpha * a.m.adjoint() - std::conj(alpha) * a.m;
    Mat d = g.exp();
    double dev = (d.adjoint() * d - Mat::Identity(d.rows(), d.cols())).norm();
    if (dev > 1e-8)
        log_warn("displacement(|alpha|=" + std::to_string(std::abs(alpha)) +
                 ") unitarity deviation " + std::to_string(dev));
    return {d, dim};
}

// ---------------------------------------------------------------------------
// Canonical states
// ---------------------------------------------------------------------------

inline PureState fock_state(int n, const Dims& dim)
{
    if (dim.modes() != 1 || n < 0 || n >= dim.n_max(0))
        throw DimensionMismatch("fock_state index out of range");
    Vec v = Vec::Zero(dim.n_max(0));
    v(n) = 1.0;
    return {v, dim};
}

inline double coherent_tail_mass(cxd alpha, int n_max)
{
    // Poisson tail sum_{n >= n_max} e^{-|a|^2} |a|^{2n} / n!
    double x = std::norm(alpha);
    double logterm = -x; // log of n=0 term
    double tail = 0.0;
    for (int n = 0; n < n_max + 2000; ++n) {
        if (n >= n_max) {
            tail += std::exp(logterm);
            if (n > x && std::exp(logterm) < 1e-18 * (tail + 1e-300)) break;
        }
        logterm += std::log(x) - std::log(static_cast<double>(n + 1));
    }
    return tail;
}

inline PureState coherent(cxd alpha, const Dims& dim, double tail_tol = 1e-10, bool override_tail = false)
{
    if (dim.modes() != 1) throw DimensionMismatch("coherent expects a single-mode dim");
    int n = dim.n_max(0);
    if (!override_tail && alpha != 0.0) {
        double tail = coherent_tail_mass(alpha, n);
        if (tail > tail_tol)
            throw TruncationError("coherent tail mass " + std::to_string(tail) + " at n_max=" + std::to_string(n));
    }
    Vec v(n);
    // amplitudes via log recursion: c_n = e^{-|a|^2/2} a^n / sqrt(n!)
    cxd c = std::exp(-0.5 * std::norm(alpha));
    for (int k = 0; k < n; ++k) {
        v(k) = c;
        c *= alpha / std::sqrt(static_cast<double>(k + 1));
    }
    double nn = v.norm();
    return {v / nn, dim};
}

enum class CatSign { even, odd };

// (|alpha> +/- |-alpha>) / sqrt(2 (1 +/- e^{-2|alpha|^2}))
inline PureState cat(cxd alpha, CatSign sign, const Dims& dim, double tail_tol = 1e-10)
{
    if (sign == CatSign::odd && std::abs(alpha) < 1e-12)
        throw DegenerateInput("odd cat undefined at alpha=0");
    PureState p = coherent(alpha, dim, tail_tol);
    PureState mth = coherent(-alpha, dim, tail_tol);
    Vec v = (sign == CatSign::even) ? Vec(p.a + mth.a) : Vec(p.a - mth.a);
    // kill the exact zeros in the opposite parity sector (they are already
    // zero analytically; rounding leaves ~1e-17 residue)
    for (int k = 0; k < v.size(); ++k) {
        bool keep = (sign == CatSign::even) ? (k % 2 == 0) : (k % 2 == 1);
        if (!keep) v(k) = 0.0;
    }
    double n = v.norm();
    if (n < 1e-12) throw DegenerateInput("cat normalization degenerate");
    return {v / n, dim};
}

// ---------------------------------------------------------------------------
// Two-mode embedding and products
// ---------------------------------------------------------------------------

// Kronecker embedding; mode 0 is the left factor.
inline Operator embed(const Operator& op, int which, const Dims& dims)
{
    if (dims.modes() != 2) throw DimensionMismatch("embed target must be two-mode");
    if (op.dims.modes() != 1) throw DimensionMismatch("embed source must be single-mode");
    if (which != 0 && which != 1) throw DimensionMismatch("mode index must be 0 or 1");
    if (op.dims.n_max(0) != dims.n_max(which))
        throw DimensionMismatch("embed slot size does not match operator");
    int nl = dims.n_max(0), nr = dims.n_max(1);
    Mat out = Mat::Zero(nl * nr, nl * nr);
    if (which == 0) {
        for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nl; ++j) {
                cxd v = op.m(i, j);
                if (v == 0.0) continue;
                for (int k = 0; k < nr; ++k) out(i * nr + k, j * nr + k) = v;
            }
    } else {
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nr; ++j) {
                cxd v = op.m(i, j);
                if (v == 0.0) continue;
                for (int k = 0; k < nl; ++k) out(k * nr + i, k * nr + j) = v;
            }
    }
    return {out, dims};
}

inline PureState tensor(const PureState& left, const PureState& right)
{
    if (left.dims.modes() != 1 || right.dims.modes() != 1)
        throw DimensionMismatch("tensor expects single-mode states");
    int nl = left.dims.n_max(0), nr = right.dims.n_max(0);
    Vec v(nl * nr);
    for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nr; ++j) v(i * nr + j) = left.a(i) * right.a(j);
    return {v, Dims::two(nl, nr)};
}

// ---------------------------------------------------------------------------
// 50/50 beam splitter between the local (a,b) and delocalized (c,d) pictures:
// a = (c+d)/sqrt(2), b = (c-d)/sqrt(2).
// ---------------------------------------------------------------------------

enum class BsDirection { ab_to_cd, cd_to_ab };

// Unitary W with W^dag (mode0) W = (mode0+mode1)/sqrt(2) and
// W^dag (mode1) W = (mode0-mode1)/sqrt(2):  W = P_1 exp(pi/4 (A^dag B - B^dag A)),
// P_1 the parity of the right mode.  The generator conserves total photon
// number, so W is exact on every complete total-N block of the truncation.
inline Operator beamsplitter_unitary(const Dims& dims)
{
    if (dims.modes() != 2) throw DimensionMismatch("beamsplitter needs a two-mode dims");
    if (dims.n_max(0) != dims.n_max(1))
        throw DimensionMismatch("beamsplitter requires equal n_max per mode");
    Operator a1 = embed(annihilation(Dims::single(dims.n_max(0))), 0, dims);
    Operator a2 = embed(annihilation(Dims::single(dims.n_max(1))), 1, dims);
    Mat g = (M_PI / 4.0) * (a1.m.adjoint() * a2.m - a2.m.adjoint() * a1.m);
    Mat r = g.exp();
    Operator p2 = embed(parity(Dims::single(dims.n_max(1))), 1, dims);
    return {p2.m * r, dims};
}

namespace detail {

inline void check_state_truncation_two_mode(const Vec& v, const Dims& dims, double tol, const char* where)
{
    int nl = dims.n_max(0), nr = dims.n_max(1);
    double w = 0.0;
    for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nr; ++j)
            if (i >= nl - 2 || j >= nr - 2) w += std::norm(v(i * nr + j));
    if (w > tol) throw TruncationError(std::string(where) + ": top-two-level weight " + std::to_string(w));
}

} // namespace detail

inline PureState beamsplitter_map(const PureState& psi, BsDirection dir, double trunc_tol = 1e-8)
{
    Operator w = beamsplitter_unitary(psi.dims);
    Vec out = (dir == BsDirection::cd_to_ab) ? Vec(w.m.adjoint() * psi.a) : Vec(w.m * psi.a);
    detail::check_state_truncation_two_mode(out, psi.dims, trunc_tol, "beamsplitter_map");
    return {out, psi.dims};
}

inline Operator beamsplitter_map(const Operator& op, BsDirection dir)
{
    Operator w = beamsplitter_unitary(op.dims);
    Mat out = (dir == BsDirection::cd_to_ab) ? Mat(w.m.adjoint() * op.m * w.m)
                                             : Mat(w.m * op.m * w.m.adjoint());
    return {out, op.dims};
}

inline DensityMatrix beamsplitter_map(const DensityMatrix& rho, BsDirection dir)
{
    Operator w = beamsplitter_unitary(rho.dims);
    Mat out = (dir == BsDirection::cd_to_ab) ? Mat(w.m.adjoint() * rho.m * w.m)
                                             : Mat(w.m * rho.m * w.m.adjoint());
    return {out, rho.dims};
}

// Default truncation recommended for a cat amplitude alpha_bar:
// ceil(4 |alpha_bar|^2) + 16 (the d mode holds ~2|alpha_bar|^2 photons; the
// margin keeps the steady-coefficient tail below 1e-10).
inline int recommended_n_max(cxd alpha_bar)
{
    return static_cast<int>(std::ceil(4.0 * std::norm(alpha_bar))) + 16;
}

inline cxd expectation(const PureState& psi, const Operator& op)
{
    require_same_dims(psi.dims, op.dims, "expectation");
    return psi.a.dot(op.m * psi.a); // Eigen dot conjugates the first argument
}

inline cxd expectation(const DensityMatrix& rho, const Operator& op)
{
    require_same_dims(rho.dims, op.dims, "expectation");
    return (op.m * rho.m).trace();
}

inline cxd overlap(const PureState& x, const PureState& y)
{
    require_same_dims(x.dims, y.dims, "overlap");
    return x.a.dot(y.a);
}

} // namespace catdimer

#endif // CATDIMER_FOCK_HPP
