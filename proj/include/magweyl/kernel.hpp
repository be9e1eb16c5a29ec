#ifndef MAGWEYL_KERNEL_HPP
#define MAGWEYL_KERNEL_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "magweyl/common.hpp"
#include "magweyl/field.hpp"
#include "magweyl/fourier.hpp"
#include "magweyl/grid.hpp"
#include "magweyl/linalg.hpp"
#include "magweyl/symbol.hpp"

namespace magweyl {

// Discretized integral kernel over the position grid. As an operator it acts
// with the quadrature weight folded in: (K f)(x) = h^d sum_y K[x,y] f(y).
struct KernelMatrix {
    PhaseSpaceGrid grid;
    MatrixXcd m;

    KernelMatrix() = default;
    explicit KernelMatrix(const PhaseSpaceGrid& g)
        : grid(g), m(MatrixXcd::Zero(g.npos(), g.npos())) {}

    static KernelMatrix identity(const PhaseSpaceGrid& g) {
        KernelMatrix K(g);
        K.m = MatrixXcd::Identity(g.npos(), g.npos()) / g.pos.cell();
        return K;
    }

    StateVector apply(const StateVector& f) const {
        if (f.grid != grid.pos) throw std::invalid_argument("KernelMatrix::apply: grid mismatch");
        StateVector out(grid.pos);
        Eigen::Map<const VectorXcd> fv(f.values.data(), f.size());
        VectorXcd ov = grid.pos.cell() * (m * fv);
        for (std::int64_t i = 0; i < out.size(); ++i) out.values[i] = ov(i);
        return out;
    }

    // L^2(grid) operator norm estimate (power iteration on K^H K).
    double op_norm(int iters = 200, double tol = 1e-10) const {
        return grid.pos.cell() * power_iteration_norm(m, iters, tol);
    }
    double frobenius() const { return m.norm(); }
    double hermiticity() const { return hermiticity_defect(m); }
};

// Operator composition: kernel of Op(F) Op(G) is h^d * K_F K_G.
inline KernelMatrix compose(const KernelMatrix& a, const KernelMatrix& b) {
    if (a.grid != b.grid) throw std::invalid_argument("compose: grid mismatch");
    KernelMatrix out(a.grid);
    out.m = a.grid.pos.cell() * (a.m * b.m);
    return out;
}

inline KernelMatrix operator+(const KernelMatrix& a, const KernelMatrix& b) {
    KernelMatrix out(a.grid);
    out.m = a.m + b.m;
    return out;
}
inline KernelMatrix operator-(const KernelMatrix& a, const KernelMatrix& b) {
    KernelMatrix out(a.grid);
    out.m = a.m - b.m;
    return out;
}
inline KernelMatrix operator*(double c, const KernelMatrix& a) {
    KernelMatrix out(a.grid);
    out.m = c * a.m;
    return out;
}

// ---------------------------------------------------------------------------
// MagneticSetup: grid + field + gauge + the cached Lambda^A(x, y) phase table
// (one-time immutable build, reused by every assembly for this gauge).
// ---------------------------------------------------------------------------
struct MagneticSetup {
    PhaseSpaceGrid grid;
    MagneticField B;
    VectorPotential A;
    MatrixXcd lambda;  // N x N unit-modulus phases

    bool zero_field() const { return B.is_zero() && A.gauge == VectorPotential::Gauge::transversal; }
};

namespace detail {

// Gamma^A(x,y) for the cached table. Constant-field transversal circulation has
// the closed form (1/2) sum_{j<k} B_jk (x_j y_k - x_k y_j) (the GL quadrature
// is exact for it, this just skips the nodes); a gauge term df integrates to
// f(y) - f(x) exactly.
inline double gamma_for_table(const MagneticSetup& s, const Point& x, const Point& y) {
    const MagneticField& B = s.B;
    double g = 0.0;
    if (B.is_zero()) {
        g = 0.0;
    } else if (B.kind == MagneticField::Kind::constant) {
        for (int j = 0; j < B.d; ++j)
            for (int k = j + 1; k < B.d; ++k)
                g += 0.5 * B.const_values[MagneticField::tri_index(B.d, j, k)] *
                     (x[j] * y[k] - x[k] * y[j]);
    } else {
        g = circulation(VectorPotential::transversal(B), x, y);
    }
    if (s.A.gauge == VectorPotential::Gauge::transversal_plus_df)
        g += s.A.f.eval(y.data()) - s.A.f.eval(x.data());
    return g;
}

}  // namespace detail

inline MagneticSetup make_setup(const PhaseSpaceGrid& grid, const MagneticField& B,
                                const VectorPotential& A) {
    if (B.d != grid.d()) throw std::invalid_argument("make_setup: dimension mismatch");
    MagneticSetup s;
    s.grid = grid;
    s.B = B;
    s.A = A;
    const std::int64_t N = grid.npos();
    s.lambda.resize(N, N);
    if (s.zero_field()) {
        s.lambda.setOnes();
        return s;
    }
    const int d = grid.d();
    parallel_for(0, N, [&](std::int64_t col) {
        Point y = grid.pos.point_of(col);
        Point x(d);
        for (std::int64_t row = 0; row < N; ++row) {
            grid.pos.point_of(row, x.data());
            const double g = detail::gamma_for_table(s, x, y);
            s.lambda(row, col) = cplx(std::cos(g), -std::sin(g));
        }
    });
    return s;
}

inline MagneticSetup make_setup(const PhaseSpaceGrid& grid, const MagneticField& B) {
    return make_setup(grid, B, VectorPotential::transversal(B));
}
inline MagneticSetup make_zero_setup(const PhaseSpaceGrid& grid) {
    return make_setup(grid, MagneticField::zero_field(grid.d()));
}

// ---------------------------------------------------------------------------
// Symbol <-> kernel pipeline, K_F^A = Lambda^A Y (1 (x) F_*) F realized as an
// exactly invertible Fourier factorization:
//   S1  position slots x -> q          (q_l = (l - n/2) pi/L)
//   S2  momentum slots xi -> v         (v_k = (k - n/2) h, one period)
//   S3  shear exp(+i q.v/2)            (Weyl midpoint, taken in phases)
//   S4  position slots q -> x
//   S5  relabel G[x, v] onto kernel entries (x_i, x_j): the true offset
//       j - i = (k - n/2) + c n wraps anti-periodically (sign (-1)^c) and
//       shifts the position row by c n/2 (half period), both exact properties
//       of the discrete transforms.
// The inverse runs the stages backwards; wrapped kernel diagonals provide
// duplicate readings of one G cell (averaged) and leave |w| shadow cells per
// column unconstrained (their midpoints fall outside the box). Those are
// filled by a ridge-regularized trigonometric extension of the known part of
// the column: exact for x-independent symbols (the constant mode is in the
// fit space) and boundary-tail accurate for the decaying corpus.
// ---------------------------------------------------------------------------
namespace detail {

struct RelabelEntry {
    std::int64_t gcell;  // flat index into G work array [pos-block, mom-block]
    double sign;
};

// per-axis relabel arithmetic
inline void relabel_axis(int n, int i, int j, int& iprime, int& k, int& sign) {
    const int w = j - i;
    const int base = w + n / 2;
    int kk = base % n;
    if (kk < 0) kk += n;
    const int c = (base - kk) / n;  // -1, 0, or 1
    k = kk;
    iprime = (i + c * (n / 2)) % n;
    if (iprime < 0) iprime += n;
    sign = (c == 0) ? 1 : -1;
}

inline RelabelEntry relabel(const PhaseSpaceGrid& g, std::int64_t row, std::int64_t col) {
    const int n = g.n(), d = g.d();
    int idx_i[4], idx_j[4];
    g.pos.unflatten(row, idx_i);
    g.pos.unflatten(col, idx_j);
    std::int64_t posf = 0, momf = 0;
    double sign = 1.0;
    for (int a = 0; a < d; ++a) {
        int ip, k, s;
        relabel_axis(n, idx_i[a], idx_j[a], ip, k, s);
        posf = posf * n + ip;
        momf = momf * n + k;
        sign *= s;
    }
    return {posf * g.npos() + momf, sign};
}

// axis-level reachability of a G cell component: row i', momentum index k
inline bool axis_reached(int n, int iprime, int k) {
    const int w0 = k - n / 2;
    if (w0 == 0) return true;
    return (w0 < 0) ? (iprime >= -w0) : (iprime < n - w0);
}

// Ridge-regularized trig extension used to fill shadow rows of one column.
// Modes are e^{i q_l x_i}; factorizations are cached per (n, k).
struct ShadowFill {
    int n = 0;
    MatrixXcd V;  // V(i, l) = exp(i q_l x_i)
    std::vector<Eigen::PartialPivLU<MatrixXcd>> lu;  // per momentum index k

    explicit ShadowFill(int n_) : n(n_) {
        V.resize(n, n);
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) {
                const double ph = (2.0 * pi / n) * (l - n / 2.0) * (i + 0.5 - n / 2.0);
                V(i, l) = cplx(std::cos(ph), std::sin(ph));
            }
        const double lam = 1e-10 * n;
        lu.resize(n);
        for (int k = 0; k < n; ++k) {
            if (k - n / 2 == 0) continue;
            MatrixXcd A = MatrixXcd::Zero(n, n);
            for (int i = 0; i < n; ++i)
                if (axis_reached(n, i, k)) A += V.row(i).adjoint() * V.row(i);
            A += lam * MatrixXcd::Identity(n, n);
            lu[k] = Eigen::PartialPivLU<MatrixXcd>(A);
        }
    }

    // data: column of length n with reached rows valid; writes shadow rows.
    void fill_column(cplx* data, std::int64_t stride, int k) const {
        VectorXcd b = VectorXcd::Zero(n);
        for (int i = 0; i < n; ++i)
            if (axis_reached(n, i, k)) b += V.row(i).adjoint() * data[i * stride];
        VectorXcd ghat = lu[k].solve(b);
        for (int i = 0; i < n; ++i)
            if (!axis_reached(n, i, k)) data[i * stride] = V.row(i) * ghat;
    }
};

inline const ShadowFill& shadow_fill(int n) {
    static std::map<int, ShadowFill>* cache = new std::map<int, ShadowFill>;
    static std::mutex* mtx = new std::mutex;
    std::lock_guard<std::mutex> lock(*mtx);
    auto it = cache->find(n);
    if (it == cache->end()) it = cache->emplace(n, ShadowFill(n)).first;
    return it->second;
}

inline void shear_multiply(std::vector<cplx>& work, const PhaseSpaceGrid& g, int conj_sign) {
    const int n = g.n(), d = g.d();
    // per-axis table exp(i pi (l - n/2)(k - n/2) / n)
    std::vector<cplx> table(std::size_t(n) * n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k) {
            const double ph = conj_sign * (pi / n) * (l - n / 2.0) * (k - n / 2.0);
            table[std::size_t(l) * n + k] = cplx(std::cos(ph), std::sin(ph));
        }
    const std::int64_t np = g.npos();
    parallel_for(0, np, [&](std::int64_t lp) {
        int lidx[4];
        g.pos.unflatten(lp, lidx);
        int midx[4];
        for (std::int64_t mp = 0; mp < np; ++mp) {
            g.pos.unflatten(mp, midx);
            cplx ph(1.0, 0.0);
            for (int a = 0; a < d; ++a) ph *= table[std::size_t(lidx[a]) * n + midx[a]];
            work[lp * np + mp] *= ph;
        }
    });
}

}  // namespace detail

inline KernelMatrix kernel_from_symbol(const Symbol& F, const MagneticSetup& s) {
    if (F.grid != s.grid) throw std::invalid_argument("kernel_from_symbol: grid mismatch");
    const PhaseSpaceGrid& g = s.grid;
    const int n = g.n(), d = g.d();
    std::vector<cplx> work = F.values;

    const OffsetDftPlan& fwd = dft_plan(n, -1, int_offset(n), half_offset(n));
    const OffsetDftPlan& bwd = dft_plan(n, +1, half_offset(n), int_offset(n));
    for (int a = 0; a < d; ++a) apply_axis(work, n, 2 * d, a, fwd);           // S1
    for (int a = 0; a < d; ++a) apply_axis(work, n, 2 * d, d + a, fwd);       // S2
    detail::shear_multiply(work, g, +1);                                      // S3
    for (int a = 0; a < d; ++a) apply_axis(work, n, 2 * d, a, bwd);           // S4

    const double scale = std::pow(1.0 / (2.0 * n * g.L()), d);
    KernelMatrix K(g);
    const std::int64_t N = g.npos();
    const bool trivial = s.zero_field();
    parallel_for(0, N, [&](std::int64_t col) {
        for (std::int64_t row = 0; row < N; ++row) {
            const detail::RelabelEntry e = detail::relabel(g, row, col);
            const cplx lam = trivial ? cplx(1.0) : s.lambda(row, col);
            K.m(row, col) = lam * (e.sign * scale) * work[e.gcell];
        }
    });
    return K;
}

// alias with the quantization's name: Op^A(F) packaged with matvec semantics
inline KernelMatrix assemble_operator(const Symbol& F, const MagneticSetup& s) {
    return kernel_from_symbol(F, s);
}

inline Symbol symbol_from_kernel(const KernelMatrix& K, const MagneticSetup& s,
                                 double order = 0.0) {
    if (K.grid != s.grid) throw std::invalid_argument("symbol_from_kernel: grid mismatch");
    const PhaseSpaceGrid& g = s.grid;
    const int n = g.n(), d = g.d();
    const std::int64_t N = g.npos();

    std::vector<cplx> sums(g.nsymbol(), cplx(0.0));
    std::vector<int> counts(g.nsymbol(), 0);
    const bool trivial = s.zero_field();
    for (std::int64_t col = 0; col < N; ++col) {
        for (std::int64_t row = 0; row < N; ++row) {
            const detail::RelabelEntry e = detail::relabel(g, row, col);
            const cplx lam = trivial ? cplx(1.0) : s.lambda(row, col);
            sums[e.gcell] += e.sign * (K.m(row, col) / lam);
            counts[e.gcell] += 1;
        }
    }
    std::vector<cplx> work(g.nsymbol());
    for (std::int64_t c = 0; c < g.nsymbol(); ++c)
        work[c] = counts[c] ? sums[c] / double(counts[c]) : cplx(0.0);

    // Sequential per-axis shadow fill: pass `a` completes cells shadowed along
    // position axis a whose later axes are fully reached (earlier axes are
    // already complete after their pass).
    const detail::ShadowFill& filler = detail::shadow_fill(n);
    std::int64_t pos_strides[4], mom_strides[4];
    {
        std::int64_t s = g.npos();
        for (int a = 0; a < d; ++a) {
            s /= n;
            pos_strides[a] = s * g.npos();
        }
        s = g.npos();
        for (int a = 0; a < d; ++a) {
            s /= n;
            mom_strides[a] = s;
        }
    }
    for (int a = 0; a < d; ++a) {
        // iterate over all columns along position axis a
        const std::int64_t ncols = g.nsymbol() / n;
        parallel_for(0, ncols, [&](std::int64_t colid) {
            // decompose colid over the remaining 2d-1 axes (pos axes except a,
            // then all momentum axes), row-major
            std::int64_t rem = colid;
            int ip[4] = {0, 0, 0, 0}, kk[4] = {0, 0, 0, 0};
            for (int b = d - 1; b >= 0; --b) {
                kk[b] = int(rem % n);
                rem /= n;
            }
            for (int b = d - 1; b >= 0; --b) {
                if (b == a) continue;
                ip[b] = int(rem % n);
                rem /= n;
            }
            if (kk[a] - n / 2 == 0) return;  // no shadow in this axis
            for (int b = a + 1; b < d; ++b)
                if (!detail::axis_reached(n, ip[b], kk[b])) return;  // later pass
            std::int64_t base = 0;
            for (int b = 0; b < d; ++b) {
                if (b != a) base += ip[b] * pos_strides[b];
                base += kk[b] * mom_strides[b];
            }
            filler.fill_column(work.data() + base, pos_strides[a], kk[a]);
        });
    }

    // inverse stages: S4^-1 on position slots, shear^-1, S2^-1 and S1^-1
    const OffsetDftPlan& inv_s4 = dft_plan(n, -1, int_offset(n), half_offset(n));
    const OffsetDftPlan& inv_s12 = dft_plan(n, +1, half_offset(n), int_offset(n));
    for (int a = 0; a < d; ++a) apply_axis(work, n, 2 * d, a, inv_s4);
    detail::shear_multiply(work, g, -1);
    for (int a = 0; a < d; ++a) apply_axis(work, n, 2 * d, d + a, inv_s12);
    for (int a = 0; a < d; ++a) apply_axis(work, n, 2 * d, a, inv_s12);

    const double scale = std::pow(2.0 * n * g.L() / (double(n) * n * n), d);
    Symbol F(g, order);
    for (std::int64_t i = 0; i < F.size(); ++i) F.values[i] = scale * work[i];
    return F;
}

// ---------------------------------------------------------------------------
// Weyl systems
// ---------------------------------------------------------------------------
namespace detail {
inline std::vector<int> lattice_shift(const BoxGrid& g, const Point& x) {
    std::vector<int> s(g.d);
    for (int a = 0; a < g.d; ++a) {
        const double r = x[a] / g.h();
        s[a] = int(std::lround(r));
        if (std::abs(r - s[a]) > 1e-9)
            throw std::invalid_argument("weyl_system: x must be an integer multiple of h per axis");
    }
    return s;
}
}  // namespace detail

// (W(x,xi) f)(z) = e^{-i<xi,x>/2} e^{-i<xi,z>} f(z + x); out-of-box samples
// are zero (truncation).
inline StateVector weyl_system(const Point& x, const Point& xi, const StateVector& f) {
    const BoxGrid& g = f.grid;
    const std::vector<int> shift = detail::lattice_shift(g, x);
    double phx = 0.0;
    for (int a = 0; a < g.d; ++a) phx += xi[a] * x[a];
    const cplx half_phase(std::cos(0.5 * phx), -std::sin(0.5 * phx));
    StateVector out(g);
    int idx[4];
    std::vector<double> z(g.d);
    for (std::int64_t i = 0; i < g.npoints(); ++i) {
        g.unflatten(i, idx);
        bool ok = true;
        std::int64_t src = 0;
        for (int a = 0; a < g.d; ++a) {
            const int j = idx[a] + shift[a];
            if (j < 0 || j >= g.n) {
                ok = false;
                break;
            }
            src = src * g.n + j;
        }
        if (!ok) continue;
        g.point_of(i, z.data());
        double phz = 0.0;
        for (int a = 0; a < g.d; ++a) phz += xi[a] * z[a];
        out.values[i] = half_phase * cplx(std::cos(phz), -std::sin(phz)) * f.values[src];
    }
    return out;
}

// W^A(x,xi) f = Lambda^A(Q, Q+x) W(x,xi) f
inline StateVector magnetic_weyl_system(const VectorPotential& A, const Point& x, const Point& xi,
                                        const StateVector& f) {
    StateVector out = weyl_system(x, xi, f);
    const BoxGrid& g = f.grid;
    std::vector<double> z(g.d);
    Point zp(g.d), zx(g.d);
    for (std::int64_t i = 0; i < g.npoints(); ++i) {
        if (out.values[i] == cplx(0.0)) continue;
        g.point_of(i, z.data());
        for (int a = 0; a < g.d; ++a) {
            zp[a] = z[a];
            zx[a] = z[a] + x[a];
        }
        out.values[i] *= phase_lambda(A, zp, zx);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gauge conjugation, Schur-Holmgren bound, diamagnetic check
// ---------------------------------------------------------------------------
inline KernelMatrix gauge_conjugate(const KernelMatrix& K, const Poly& f) {
    const PhaseSpaceGrid& g = K.grid;
    const std::int64_t N = g.npos();
    VectorXcd phase(N);
    std::vector<double> x(g.d());
    for (std::int64_t i = 0; i < N; ++i) {
        g.pos.point_of(i, x.data());
        const double v = f.eval(x.data());
        phase(i) = cplx(std::cos(v), std::sin(v));
    }
    KernelMatrix out(g);
    out.m = phase.asDiagonal() * K.m * phase.conjugate().asDiagonal();
    return out;
}

struct SchurHolmgrenBound {
    double row_bound = 0.0;        // sup_x h^d sum_y |K[x,y]|
    double symmetrized = 0.0;      // max of row and column bounds
    double column_bound = 0.0;
};

inline SchurHolmgrenBound schur_holmgren_bound(const KernelMatrix& K) {
    const double cell = K.grid.pos.cell();
    SchurHolmgrenBound b;
    for (std::int64_t i = 0; i < K.m.rows(); ++i)
        b.row_bound = std::max(b.row_bound, cell * K.m.row(i).cwiseAbs().sum());
    for (std::int64_t j = 0; j < K.m.cols(); ++j)
        b.column_bound = std::max(b.column_bound, cell * K.m.col(j).cwiseAbs().sum());
    b.symmetrized = std::max(b.row_bound, b.column_bound);
    return b;
}

struct DiamagneticReport {
    double max_violation = 0.0;   // max over grid of |Op^A(F)phi| - Op^0(F)|phi|
    double positivity_min = 0.0;  // min of Re F_*^- F (precondition check)
};

// Prop 1.6 check for a symbol constant in x whose inverse momentum transform
// is non-negative: |Op^A(F) phi| <= Op^0(F) |phi| pointwise.
inline DiamagneticReport diamagnetic_check(const Symbol& F, const MagneticSetup& s,
                                           const StateVector& phi, double positivity_tol = 1e-9) {
    const PhaseSpaceGrid& g = s.grid;
    // x-independence: compare first and last position slice
    const std::int64_t np = g.npos();
    for (std::int64_t m = 0; m < np; ++m)
        if (std::abs(F.at(0, m) - F.at(np - 1, m)) > 1e-12)
            throw std::invalid_argument("diamagnetic_check: symbol must be constant in x");
    // positivity of F_*^- F (momentum profile -> position)
    std::vector<cplx> profile(np);
    for (std::int64_t m = 0; m < np; ++m) profile[m] = F.at(0, m);
    std::vector<cplx> pos_profile = fourier(g, FourierKind::F_star_inv, profile);
    double pmin = HUGE_VAL;
    for (const cplx& v : pos_profile) pmin = std::min(pmin, v.real());
    DiamagneticReport rep;
    rep.positivity_min = pmin;
    if (pmin < -positivity_tol)
        throw std::invalid_argument("diamagnetic_check: F fails the positivity precondition");

    KernelMatrix Ka = kernel_from_symbol(F, s);
    MagneticSetup zero = make_zero_setup(g);
    KernelMatrix K0 = kernel_from_symbol(F, zero);
    StateVector lhs = Ka.apply(phi);
    StateVector absphi(phi.grid);
    for (std::int64_t i = 0; i < phi.size(); ++i) absphi.values[i] = std::abs(phi.values[i]);
    StateVector rhs = K0.apply(absphi);
    double viol = -HUGE_VAL;
    for (std::int64_t i = 0; i < lhs.size(); ++i)
        viol = std::max(viol, std::abs(lhs.values[i]) - rhs.values[i].real());
    rep.max_violation = viol;
    return rep;
}

}  // namespace magweyl

#endif  // MAGWEYL_KERNEL_HPP
