#ifndef MAGWEYL_FFT_HPP
#define MAGWEYL_FFT_HPP

#include <cassert>
#include <cmath>
#include <vector>

#include "magweyl/common.hpp"

namespace magweyl {

// Unscaled DFT: out[a] = sum_b exp(sign * i * 2*pi*a*b/n) * in[b].
// Radix-2 iterative FFT for powers of two, O(n^2) fallback otherwise
// (grids in this project are powers of two; the fallback keeps odd even n legal).
inline void dft_pow2(cplx* data, int n, int sign) {
    // bit reversal
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * pi / len;
        const cplx wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (int k = 0; k < len / 2; ++k) {
                cplx u = data[i + k];
                cplx v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline void dft(cplx* data, int n, int sign) {
    if (is_pow2(n)) {
        dft_pow2(data, n, sign);
        return;
    }
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const double ang = sign * 2.0 * pi * double(a) * double(b) / n;
            out[a] += data[b] * cplx(std::cos(ang), std::sin(ang));
        }
    }
    for (int a = 0; a < n; ++a) data[a] = out[a];
}

// Offset DFT: out[a] = sum_b exp(sign * i * (2*pi/n) * (a+oa) * (b+ob)) * in[b],
// with half-integer offsets oa, ob (centered grids). Twiddle tables are built
// once per (n, sign, oa, ob) by the caller via OffsetDftPlan.
struct OffsetDftPlan {
    int n = 0;
    int sign = 1;
    std::vector<cplx> pre;   // exp(sign*i*theta*oa*b)
    std::vector<cplx> post;  // exp(sign*i*theta*((a+oa)*ob))  [absorbs oa*ob]

    OffsetDftPlan() = default;
    OffsetDftPlan(int n_, int sign_, double oa, double ob) : n(n_), sign(sign_) {
        const double theta = 2.0 * pi / n;
        pre.resize(n);
        post.resize(n);
        for (int b = 0; b < n; ++b) {
            const double ang = sign * theta * oa * b;
            pre[b] = cplx(std::cos(ang), std::sin(ang));
        }
        for (int a = 0; a < n; ++a) {
            const double ang = sign * theta * (a + oa) * ob;
            post[a] = cplx(std::cos(ang), std::sin(ang));
        }
    }

    void apply(cplx* line) const {
        for (int b = 0; b < n; ++b) line[b] *= pre[b];
        dft(line, n, sign);
        for (int a = 0; a < n; ++a) line[a] *= post[a];
    }
};

// Applies a 1-D plan along axis `axis` of a dense row-major array with
// `rank` axes each of extent n. Lines are gathered/scattered through a stride.
inline void apply_axis(std::vector<cplx>& data, int n, int rank, int axis,
                       const OffsetDftPlan& plan) {
    std::int64_t total = 1;
    for (int a = 0; a < rank; ++a) total *= n;
    std::int64_t stride = 1;
    for (int a = rank - 1; a > axis; --a) stride *= n;
    const std::int64_t nlines = total / n;

    parallel_for(0, nlines, [&](std::int64_t line) {
        // Decompose line index into (outer, inner) around the axis.
        const std::int64_t inner = line % stride;
        const std::int64_t outer = line / stride;
        const std::int64_t base = outer * stride * n + inner;
        cplx buf[1024];
        std::vector<cplx> heap;
        cplx* p = buf;
        if (n > 1024) {
            heap.resize(n);
            p = heap.data();
        }
        for (int b = 0; b < n; ++b) p[b] = data[base + b * stride];
        plan.apply(p);
        for (int a = 0; a < n; ++a) data[base + a * stride] = p[a];
    });
}

}  // namespace magweyl

#endif  // MAGWEYL_FFT_HPP
