#ifndef MAGWEYL_FOURIER_HPP
#define MAGWEYL_FOURIER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "magweyl/common.hpp"
#include "magweyl/fft.hpp"
#include "magweyl/grid.hpp"

namespace magweyl {

// Plan cache. Offsets are half-integers; key them by 2*offset.
inline const OffsetDftPlan& dft_plan(int n, int sign, double oa, double ob) {
    using Key = std::tuple<int, int, int, int>;
    static std::map<Key, OffsetDftPlan> cache;
    static std::mutex* mtx = new std::mutex;
    Key key{n, sign, int(std::lround(2 * oa)), int(std::lround(2 * ob))};
    std::lock_guard<std::mutex> lock(*mtx);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, OffsetDftPlan(n, sign, oa, ob)).first;
    return it->second;
}

// Grid index offsets: position nodes x_i = (i + ox) h with ox = 1/2 - n/2;
// momentum nodes xi_m = (m + ox) dxi (same offset); internal wavenumber grid
// q_l = (l - n/2) dq with dq = pi/L.
inline double half_offset(int n) { return 0.5 - n / 2.0; }
inline double int_offset(int n) { return -n / 2.0; }

// ---------------------------------------------------------------------------
// The five transforms of the calculus, as exact grid sums:
//   (F phi)(xi)    = (2pi)^{-d/2} sum_x e^{-i<xi,x>} phi(x) h^d
//   (F^- phi)(xi)  = (2pi)^{-d/2} sum_x e^{+i<xi,x>} phi(x) h^d
//   (F_* psi)(x)   = (2pi)^{-d/2} sum_xi e^{-i<xi,x>} psi(xi) dxi^d
//   (F_*^- psi)(x) = (2pi)^{-d/2} sum_xi e^{+i<xi,x>} psi(xi) dxi^d
//   (tilde-F F)(x, xi) = (2pi)^{-d} sum_{y,eta} e^{i<xi,y> - i<eta,x>} F(y, eta) (h dxi)^d
// Since h * dxi = 2pi/n the pairs (F, F^-) and (F_*, F_*^-) invert each other
// exactly on grid functions.
// ---------------------------------------------------------------------------
enum class FourierKind { F, F_inv, F_star, F_star_inv, F_tilde };

inline std::vector<cplx> fourier_position(const PhaseSpaceGrid& g, std::vector<cplx> data,
                                          int sign) {
    // position -> momentum, phase exp(sign * i * <xi, x>)
    const int n = g.n(), d = g.d();
    const OffsetDftPlan& plan = dft_plan(n, sign, half_offset(n), half_offset(n));
    for (int a = 0; a < d; ++a) apply_axis(data, n, d, a, plan);
    const double scale = std::pow(g.h() / std::sqrt(2.0 * pi), d);
    for (cplx& v : data) v *= scale;
    return data;
}

inline std::vector<cplx> fourier_momentum(const PhaseSpaceGrid& g, std::vector<cplx> data,
                                          int sign) {
    // momentum -> position, phase exp(sign * i * <xi, x>)
    const int n = g.n(), d = g.d();
    const OffsetDftPlan& plan = dft_plan(n, sign, half_offset(n), half_offset(n));
    for (int a = 0; a < d; ++a) apply_axis(data, n, d, a, plan);
    const double scale = std::pow(g.dxi() / std::sqrt(2.0 * pi), d);
    for (cplx& v : data) v *= scale;
    return data;
}

// tilde-F on symbol-layout data [pos-block, mom-block]
inline std::vector<cplx> fourier_tilde(const PhaseSpaceGrid& g, const std::vector<cplx>& data) {
    const int n = g.n(), d = g.d();
    if (std::int64_t(data.size()) != g.nsymbol())
        throw std::invalid_argument("fourier_tilde: size mismatch");
    std::vector<cplx> work = data;
    // position block (y) -> output momentum xi with e^{+i<xi,y>}
    const OffsetDftPlan& plus = dft_plan(n, +1, half_offset(n), half_offset(n));
    const OffsetDftPlan& minus = dft_plan(n, -1, half_offset(n), half_offset(n));
    for (int a = 0; a < d; ++a) apply_axis(work, n, 2 * d, a, plus);
    // momentum block (eta) -> output position x with e^{-i<eta,x>}
    for (int a = 0; a < d; ++a) apply_axis(work, n, 2 * d, d + a, minus);
    // swap blocks so layout is [x-block, xi-block] again; scale (h dxi / 2pi)^d = n^-d
    const std::int64_t np = g.npos();
    std::vector<cplx> out(work.size());
    const double scale = std::pow(double(n), -d);
    parallel_for(0, np, [&](std::int64_t p) {
        for (std::int64_t m = 0; m < np; ++m) out[p * np + m] = scale * work[m * np + p];
    });
    return out;
}

inline std::vector<cplx> fourier(const PhaseSpaceGrid& g, FourierKind kind,
                                 const std::vector<cplx>& data) {
    switch (kind) {
        case FourierKind::F: {
            if (std::int64_t(data.size()) != g.npos())
                throw std::invalid_argument("fourier: size mismatch");
            return fourier_position(g, data, -1);
        }
        case FourierKind::F_inv: {
            if (std::int64_t(data.size()) != g.npos())
                throw std::invalid_argument("fourier: size mismatch");
            return fourier_position(g, data, +1);
        }
        case FourierKind::F_star: {
            if (std::int64_t(data.size()) != g.npos())
                throw std::invalid_argument("fourier: size mismatch");
            return fourier_momentum(g, data, -1);
        }
        case FourierKind::F_star_inv: {
            if (std::int64_t(data.size()) != g.npos())
                throw std::invalid_argument("fourier: size mismatch");
            return fourier_momentum(g, data, +1);
        }
        case FourierKind::F_tilde: return fourier_tilde(g, data);
    }
    throw std::invalid_argument("fourier: unknown direction");
}

// ---------------------------------------------------------------------------
// Upsilon: (Y F)(x, y) = (2pi)^{-d/2} F((x+y)/2, y-x) for F on the product
// grid X x X, and its inverse (Y^-1 K)(u, v) = (2pi)^{d/2} K(u - v/2, u + v/2).
// Off-node arguments are evaluated through the trigonometric interpolant of
// the input (each slot treated as 2L-periodic), which is boundary-tail exact
// for the decaying functions these operations are used on.
// ---------------------------------------------------------------------------
namespace detail {

// One axis pair of Upsilon: f[p, q] over (u-axis, v-axis) -> out[i, j] with
// out[i,j] = f_trig(x_i + w h/2, w h), w = j - i. `stride_p`/`stride_q` walk
// the two axes inside the flat array; `base` fixes all other indices.
inline void upsilon_axis_pair(const std::vector<cplx>& in, std::vector<cplx>& out, int n,
                              double L, std::int64_t base, std::int64_t stride_p,
                              std::int64_t stride_q) {
    const double h = 2.0 * L / n;
    // c[l, q]: DFT over u-slot; e[l, l']: DFT over v-slot
    std::vector<cplx> buf(std::size_t(n) * n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) buf[std::size_t(p) * n + q] = in[base + p * stride_p + q * stride_q];
    const OffsetDftPlan& plan_u = dft_plan(n, -1, int_offset(n), half_offset(n));
    std::vector<cplx> line(n);
    // u-slot: c[l, q]
    for (int q = 0; q < n; ++q) {
        for (int p = 0; p < n; ++p) line[p] = buf[std::size_t(p) * n + q];
        plan_u.apply(line.data());
        for (int l = 0; l < n; ++l) buf[std::size_t(l) * n + q] = line[l] / double(n);
    }
    // v-slot: e[l, l']
    for (int l = 0; l < n; ++l) {
        for (int q = 0; q < n; ++q) line[q] = buf[std::size_t(l) * n + q];
        plan_u.apply(line.data());
        for (int lp = 0; lp < n; ++lp) buf[std::size_t(l) * n + lp] = line[lp] / double(n);
    }
    // g[l, wmod] = sum_{l'} e[l, l'] exp(i q_{l'} (wmod) h)  (periodic in w mod n)
    // i.e. inverse-type DFT over l' with output offset 0, input offset -n/2
    const OffsetDftPlan& plan_w = dft_plan(n, +1, 0.0, int_offset(n));
    for (int l = 0; l < n; ++l) {
        for (int lp = 0; lp < n; ++lp) line[lp] = buf[std::size_t(l) * n + lp];
        plan_w.apply(line.data());
        for (int w = 0; w < n; ++w) buf[std::size_t(l) * n + w] = line[w];
    }
    // per diagonal w: out[i, i+w] = sum_l g[l, w mod n] e^{i q_l w h / 2} e^{i q_l x_i}
    std::vector<cplx> diag(n);
    for (int w = -(n - 1); w <= n - 1; ++w) {
        const int wmod = ((w % n) + n) % n;
        for (int l = 0; l < n; ++l) {
            const double ph = (pi / n) * (l - n / 2.0) * w;  // q_l * w h / 2
            diag[l] = buf[std::size_t(l) * n + wmod] * cplx(std::cos(ph), std::sin(ph));
        }
        const OffsetDftPlan& plan_x = dft_plan(n, +1, half_offset(n), int_offset(n));
        plan_x.apply(diag.data());
        for (int i = std::max(0, -w); i < std::min(n, n - w); ++i)
            out[base + i * stride_p + (i + w) * stride_q] = diag[i];
    }
}

// One axis pair of Upsilon^-1: K[i, j] -> out[p, q] = K_trig(u_p - v_q/2, u_p + v_q/2)
inline void upsilon_inv_axis_pair(const std::vector<cplx>& in, std::vector<cplx>& out, int n,
                                  double L, std::int64_t base, std::int64_t stride_p,
                                  std::int64_t stride_q) {
    std::vector<cplx> buf(std::size_t(n) * n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) buf[std::size_t(p) * n + q] = in[base + p * stride_p + q * stride_q];
    const OffsetDftPlan& plan = dft_plan(n, -1, int_offset(n), half_offset(n));
    std::vector<cplx> line(n);
    // E[l, l'] double DFT
    for (int q = 0; q < n; ++q) {
        for (int p = 0; p < n; ++p) line[p] = buf[std::size_t(p) * n + q];
        plan.apply(line.data());
        for (int l = 0; l < n; ++l) buf[std::size_t(l) * n + q] = line[l] / double(n);
    }
    for (int l = 0; l < n; ++l) {
        for (int q = 0; q < n; ++q) line[q] = buf[std::size_t(l) * n + q];
        plan.apply(line.data());
        for (int lp = 0; lp < n; ++lp) buf[std::size_t(l) * n + lp] = line[lp] / double(n);
    }
    // For each output column q (shift s = v_q/2): phase-multiply E by
    // e^{i(q_{l'} - q_l) s}, fold to A_sigma over sigma = l + l', then evaluate
    // sum_sigma A_sigma e^{i (sigma - n) dq u_p} at the u-grid.
    const double dq = pi / L;
    std::vector<cplx> folded(2 * n - 1);
    for (int q = 0; q < n; ++q) {
        const double vq = (q + half_offset(n)) * (2.0 * L / n);
        const double s = 0.5 * vq;
        std::fill(folded.begin(), folded.end(), cplx(0.0));
        for (int l = 0; l < n; ++l)
            for (int lp = 0; lp < n; ++lp) {
                const double ph = ((lp - n / 2.0) - (l - n / 2.0)) * dq * s;
                folded[l + lp] += buf[std::size_t(l) * n + lp] * cplx(std::cos(ph), std::sin(ph));
            }
        for (int p = 0; p < n; ++p) {
            const double up = (p + half_offset(n)) * (2.0 * L / n);
            cplx acc(0.0);
            for (int sig = 0; sig < 2 * n - 1; ++sig) {
                const double freq = (sig - n) * dq;  // q_l + q_{l'}
                const double ph = freq * up;
                acc += folded[sig] * cplx(std::cos(ph), std::sin(ph));
            }
            out[base + p * stride_p + q * stride_q] = acc;
        }
    }
}

template <class PairFn>
void upsilon_apply(const PhaseSpaceGrid& g, const std::vector<cplx>& in, std::vector<cplx>& out,
                   double scale, PairFn&& pair_fn) {
    const int n = g.n(), d = g.d();
    if (std::int64_t(in.size()) != g.nsymbol())
        throw std::invalid_argument("upsilon: expects data on the product grid X x X");
    std::vector<cplx> cur = in;
    std::vector<cplx> nxt(in.size());
    std::int64_t strides[8];
    std::int64_t sacc = 1;
    for (int a = 2 * d - 1; a >= 0; --a) {
        strides[a] = sacc;
        sacc *= n;
    }
    for (int a = 0; a < d; ++a) {
        // axis pair (a, d + a); iterate over all other index combinations
        std::fill(nxt.begin(), nxt.end(), cplx(0.0));
        const std::int64_t total = g.nsymbol() / (std::int64_t(n) * n);
        parallel_for(0, total, [&](std::int64_t rest) {
            // decompose `rest` over the 2d-2 remaining axes (row-major order)
            std::int64_t base = 0;
            std::int64_t rem = rest;
            for (int b = 2 * d - 1; b >= 0; --b) {
                if (b == a || b == d + a) continue;
                const int idx = int(rem % n);
                rem /= n;
                base += idx * strides[b];
            }
            pair_fn(cur, nxt, n, g.L(), base, strides[a], strides[d + a]);
        });
        cur.swap(nxt);
    }
    out = std::move(cur);
    for (cplx& v : out) v *= scale;
}

}  // namespace detail

inline std::vector<cplx> upsilon(const PhaseSpaceGrid& g, const std::vector<cplx>& in) {
    std::vector<cplx> out;
    detail::upsilon_apply(g, in, out, std::pow(2.0 * pi, -0.5 * g.d()),
                          detail::upsilon_axis_pair);
    return out;
}

inline std::vector<cplx> upsilon_inverse(const PhaseSpaceGrid& g, const std::vector<cplx>& in) {
    std::vector<cplx> out;
    detail::upsilon_apply(g, in, out, std::pow(2.0 * pi, +0.5 * g.d()),
                          detail::upsilon_inv_axis_pair);
    return out;
}

}  // namespace magweyl

#endif  // MAGWEYL_FOURIER_HPP
