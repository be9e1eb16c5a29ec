#ifndef MAGWEYL_SYMBOL_HPP
#define MAGWEYL_SYMBOL_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "magweyl/common.hpp"
#include "magweyl/grid.hpp"
#include "magweyl/multiindex.hpp"

namespace magweyl {

// Complex-valued phase-space function on the grid, with its claimed Hormander
// order p. Layout is row-major position-then-momentum: flat = ipos * n^d + imom.
struct Symbol {
    PhaseSpaceGrid grid;
    std::vector<cplx> values;
    double order = 0.0;
    enum class Tag { named, computed } tag = Tag::computed;

    Symbol() = default;
    explicit Symbol(const PhaseSpaceGrid& g, double p = 0.0, Tag t = Tag::computed)
        : grid(g), values(g.nsymbol(), cplx(0.0)), order(p), tag(t) {}

    std::int64_t size() const { return std::int64_t(values.size()); }
    cplx& at(std::int64_t ipos, std::int64_t imom) { return values[ipos * grid.npos() + imom]; }
    const cplx& at(std::int64_t ipos, std::int64_t imom) const {
        return values[ipos * grid.npos() + imom];
    }

    double sup_abs() const {
        double m = 0.0;
        for (const cplx& v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double min_real() const {
        double m = HUGE_VAL;
        for (const cplx& v : values) m = std::min(m, v.real());
        return m;
    }
    double max_abs_diff(const Symbol& o) const {
        double m = 0.0;
        for (std::int64_t i = 0; i < size(); ++i) m = std::max(m, std::abs(values[i] - o.values[i]));
        return m;
    }
    // phase-space integral sum F * (h dxi)^d
    cplx integral() const {
        cplx acc(0.0);
        for (const cplx& v : values) acc += v;
        return acc * grid.cell_phase();
    }

    Symbol conj() const {
        Symbol out = *this;
        for (cplx& v : out.values) v = std::conj(v);
        out.tag = Tag::computed;
        return out;
    }
};

inline Symbol operator+(const Symbol& a, const Symbol& b) {
    if (a.grid != b.grid) throw std::invalid_argument("Symbol +: grid mismatch");
    Symbol out = a;
    for (std::int64_t i = 0; i < out.size(); ++i) out.values[i] += b.values[i];
    out.order = std::max(a.order, b.order);
    out.tag = Symbol::Tag::computed;
    return out;
}
inline Symbol operator-(const Symbol& a, const Symbol& b) {
    if (a.grid != b.grid) throw std::invalid_argument("Symbol -: grid mismatch");
    Symbol out = a;
    for (std::int64_t i = 0; i < out.size(); ++i) out.values[i] -= b.values[i];
    out.order = std::max(a.order, b.order);
    out.tag = Symbol::Tag::computed;
    return out;
}
inline Symbol operator*(const cplx& c, const Symbol& a) {
    Symbol out = a;
    for (cplx& v : out.values) v *= c;
    out.tag = Symbol::Tag::computed;
    return out;
}
// pointwise product
inline Symbol pointwise(const Symbol& a, const Symbol& b) {
    if (a.grid != b.grid) throw std::invalid_argument("Symbol pointwise: grid mismatch");
    Symbol out = a;
    for (std::int64_t i = 0; i < out.size(); ++i) out.values[i] *= b.values[i];
    out.order = a.order + b.order;
    out.tag = Symbol::Tag::computed;
    return out;
}
inline Symbol plus_constant(const Symbol& a, double c) {
    Symbol out = a;
    for (cplx& v : out.values) v += c;
    return out;
}

// Sample an analytic evaluator (x, xi) -> value onto the grid.
inline Symbol sample_symbol(const PhaseSpaceGrid& g,
                            const std::function<cplx(const double*, const double*)>& fn,
                            double order = 0.0, Symbol::Tag tag = Symbol::Tag::computed) {
    Symbol F(g, order, tag);
    const int d = g.d();
    const std::int64_t np = g.npos();
    parallel_for(0, np, [&](std::int64_t ip) {
        std::vector<double> x(d), xi(d);
        g.pos.point_of(ip, x.data());
        for (std::int64_t im = 0; im < np; ++im) {
            g.xi_of(im, xi.data());
            F.values[ip * np + im] = fn(x.data(), xi.data());
        }
    });
    return F;
}

// ---------------------------------------------------------------------------
// Named symbol families:  p_s = <xi>^s, q_s = <x>^s, coordinate q_j = x_j,
// momentum p_j = xi_j, and phase-space Gaussians.
// ---------------------------------------------------------------------------
struct StandardSymbol {
    enum class Kind { p_s, q_s, coordinate, momentum, gaussian };
    Kind kind = Kind::p_s;
    double s = 0.0;               // order parameter for p_s / q_s
    int j = 0;                    // axis for coordinate/momentum
    Point center_x, center_xi;    // gaussian parameters
    double width_x = 1.0, width_xi = 1.0;
};

inline cplx eval_standard(const StandardSymbol& spec, const double* x, const double* xi, int d) {
    switch (spec.kind) {
        case StandardSymbol::Kind::p_s: return std::pow(jbracket(xi, d), spec.s);
        case StandardSymbol::Kind::q_s: return std::pow(jbracket(x, d), spec.s);
        case StandardSymbol::Kind::coordinate: return x[spec.j];
        case StandardSymbol::Kind::momentum: return xi[spec.j];
        case StandardSymbol::Kind::gaussian: {
            double e = 0.0;
            for (int a = 0; a < d; ++a) {
                const double cx = a < int(spec.center_x.size()) ? spec.center_x[a] : 0.0;
                const double cxi = a < int(spec.center_xi.size()) ? spec.center_xi[a] : 0.0;
                e += sq(x[a] - cx) / (2.0 * sq(spec.width_x));
                e += sq(xi[a] - cxi) / (2.0 * sq(spec.width_xi));
            }
            return std::exp(-e);
        }
    }
    throw std::invalid_argument("standard_symbol: unknown kind");
}

inline Symbol standard_symbol(const StandardSymbol& spec, const PhaseSpaceGrid& g) {
    double order = 0.0;
    switch (spec.kind) {
        case StandardSymbol::Kind::p_s: order = spec.s; break;
        case StandardSymbol::Kind::q_s: order = 0.0; break;
        case StandardSymbol::Kind::coordinate: order = 0.0; break;
        case StandardSymbol::Kind::momentum: order = 1.0; break;
        case StandardSymbol::Kind::gaussian: order = 0.0; break;
    }
    const int d = g.d();
    return sample_symbol(
        g, [&](const double* x, const double* xi) { return eval_standard(spec, x, xi, d); }, order,
        Symbol::Tag::named);
}

inline Symbol symbol_p(const PhaseSpaceGrid& g, double s) {
    StandardSymbol spec;
    spec.kind = StandardSymbol::Kind::p_s;
    spec.s = s;
    return standard_symbol(spec, g);
}
inline Symbol symbol_q(const PhaseSpaceGrid& g, double s) {
    StandardSymbol spec;
    spec.kind = StandardSymbol::Kind::q_s;
    spec.s = s;
    return standard_symbol(spec, g);
}
inline Symbol symbol_momentum(const PhaseSpaceGrid& g, int j) {
    StandardSymbol spec;
    spec.kind = StandardSymbol::Kind::momentum;
    spec.j = j;
    return standard_symbol(spec, g);
}
inline Symbol symbol_coordinate(const PhaseSpaceGrid& g, int j) {
    StandardSymbol spec;
    spec.kind = StandardSymbol::Kind::coordinate;
    spec.j = j;
    return standard_symbol(spec, g);
}
inline Symbol symbol_gaussian(const PhaseSpaceGrid& g, const Point& cx, const Point& cxi,
                              double wx, double wxi) {
    StandardSymbol spec;
    spec.kind = StandardSymbol::Kind::gaussian;
    spec.center_x = cx;
    spec.center_xi = cxi;
    spec.width_x = wx;
    spec.width_xi = wxi;
    return standard_symbol(spec, g);
}
inline Symbol symbol_one(const PhaseSpaceGrid& g) { return symbol_p(g, 0.0); }

// ---------------------------------------------------------------------------
// Hormander seminorm estimator
//   nu^p_{m1,m2}(F) = sup <xi>^{-p+m2} max_{|a|=m1,|alpha|=m2} |d_x^a d_xi^alpha F|
// with 2nd-order central differences; the sup runs over interior nodes that
// support the stencil (outermost `m1`/`m2` rings are skipped).
// ---------------------------------------------------------------------------
namespace detail {

// central-difference derivative of the grid data in one slot/axis chain
inline cplx symbol_cd(const Symbol& F, std::int64_t ip, std::int64_t im, const MultiIndex& ax,
                      const MultiIndex& am) {
    // recursion: take the first nonzero entry of (ax, am), differentiate there
    const int d = F.grid.d();
    const int n = F.grid.n();
    for (int a = 0; a < d; ++a) {
        if (ax[a] > 0) {
            MultiIndex r = ax;
            r[a] -= 1;
            std::int64_t stride = 1;
            for (int b = d - 1; b > a; --b) stride *= n;
            const double step = F.grid.h();
            return (symbol_cd(F, ip + stride, im, r, am) - symbol_cd(F, ip - stride, im, r, am)) /
                   (2.0 * step);
        }
    }
    for (int a = 0; a < d; ++a) {
        if (am[a] > 0) {
            MultiIndex r = am;
            r[a] -= 1;
            std::int64_t stride = 1;
            for (int b = d - 1; b > a; --b) stride *= n;
            const double step = F.grid.dxi();
            return (symbol_cd(F, ip, im + stride, ax, r) - symbol_cd(F, ip, im - stride, ax, r)) /
                   (2.0 * step);
        }
    }
    return F.at(ip, im);
}

inline bool interior_ok(const BoxGrid& g, std::int64_t flat, int margin) {
    for (int a = g.d - 1; a >= 0; --a) {
        const int idx = int(flat % g.n);
        flat /= g.n;
        if (idx < margin || idx >= g.n - margin) return false;
    }
    return true;
}

}  // namespace detail

inline double hormander_seminorm(const Symbol& F, double p, int m1, int m2) {
    const PhaseSpaceGrid& g = F.grid;
    const int d = g.d();
    const int margin1 = m1, margin2 = m2;
    if (2 * margin1 >= g.n() || 2 * margin2 >= g.n())
        throw std::invalid_argument("hormander_seminorm: grid too small for stencil");
    std::vector<MultiIndex> axs, ams;
    enumerate_multiindices(d, m1, axs);
    enumerate_multiindices(d, m2, ams);

    const std::int64_t np = g.npos();
    std::vector<double> sup_per_pos(np, 0.0);
    parallel_for(0, np, [&](std::int64_t ip) {
        if (!detail::interior_ok(g.pos, ip, margin1)) return;
        std::vector<double> xi(d);
        double best = 0.0;
        for (std::int64_t im = 0; im < np; ++im) {
            if (!detail::interior_ok(g.pos, im, margin2)) continue;
            g.xi_of(im, xi.data());
            const double wgt = std::pow(jbracket(xi), -p + m2);
            double maxd = 0.0;
            for (const MultiIndex& ax : axs)
                for (const MultiIndex& am : ams)
                    maxd = std::max(maxd, std::abs(detail::symbol_cd(F, ip, im, ax, am)));
            best = std::max(best, wgt * maxd);
        }
        sup_per_pos[ip] = best;
    });
    double sup = 0.0;
    for (double v : sup_per_pos) sup = std::max(sup, v);
    return sup;
}

// rho^p variant: max over derivative orders n1 <= m1, m0 <= n2 <= m0+m2
inline double hormander_rho(const Symbol& F, double p, int m1, int m0, int m2) {
    double best = 0.0;
    for (int n1 = 0; n1 <= m1; ++n1)
        for (int n2 = m0; n2 <= m0 + m2; ++n2)
            best = std::max(best, hormander_seminorm(F, p, n1, n2));
    return best;
}

// Ellipticity margin: C = min over {|xi| >= R} of |F(x, xi)| / <xi>^p.
inline double ellipticity_margin(const Symbol& F, double p, double R) {
    const PhaseSpaceGrid& g = F.grid;
    const int d = g.d();
    const std::int64_t np = g.npos();
    double cmin = HUGE_VAL;
    std::vector<double> xi(d);
    bool any = false;
    for (std::int64_t im = 0; im < np; ++im) {
        g.xi_of(im, xi.data());
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) r2 += xi[a] * xi[a];
        if (std::sqrt(r2) < R) continue;
        any = true;
        const double w = std::pow(jbracket(xi), -p);
        for (std::int64_t ip = 0; ip < np; ++ip)
            cmin = std::min(cmin, std::abs(F.at(ip, im)) * w);
    }
    if (!any) throw std::invalid_argument("ellipticity_margin: no grid points with |xi| >= R");
    return cmin;
}

}  // namespace magweyl

#endif  // MAGWEYL_SYMBOL_HPP
