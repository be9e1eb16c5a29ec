#ifndef MAGWEYL_QUADRATURE_HPP
#define MAGWEYL_QUADRATURE_HPP

#include <cmath>
#include <vector>

#include "magweyl/common.hpp"

namespace magweyl {

// Gauss-Legendre nodes/weights on [-1, 1], computed once per order by Newton
// iteration on P_n (machine precision, deterministic).
struct GaussLegendre {
    std::vector<double> x, w;

    explicit GaussLegendre(int order) {
        x.resize(order);
        w.resize(order);
        const int m = (order + 1) / 2;
        for (int i = 0; i < m; ++i) {
            double z = std::cos(pi * (i + 0.75) / (order + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < order; ++j) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
                }
                pp = order * (z * p0 - p1) / (z * z - 1.0);
                double dz = p0 / pp;
                z -= dz;
                if (std::abs(dz) < 1e-15) break;
            }
            x[i] = -z;
            x[order - 1 - i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
            w[order - 1 - i] = w[i];
        }
    }

    static const GaussLegendre& order8() {
        static const GaussLegendre g(8);
        return g;
    }
    static const GaussLegendre& order16() {
        static const GaussLegendre g(16);
        return g;
    }

    // node/weight mapped to [0, 1]
    double x01(int i) const { return 0.5 * (x[i] + 1.0); }
    double w01(int i) const { return 0.5 * w[i]; }
};

// integral over [0,1] of f(s)
template <class Fn>
double gl_integrate01(const GaussLegendre& g, Fn&& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) acc += g.w01(int(i)) * f(g.x01(int(i)));
    return acc;
}

// integral over the triangle 0 <= t <= s <= 1 of f(s, t), via t = s*tau
template <class Fn>
double gl_integrate_tri(const GaussLegendre& g, Fn&& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double s = g.x01(int(i));
        double inner = 0.0;
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            const double t = s * g.x01(int(j));
            inner += g.w01(int(j)) * f(s, t);
        }
        acc += g.w01(int(i)) * s * inner;
    }
    return acc;
}

// integral over the standard simplex {u >= 0, v >= 0, u+v <= 1} of f(u, v)
template <class Fn>
double gl_integrate_simplex(const GaussLegendre& g, Fn&& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double u = g.x01(int(i));
        double inner = 0.0;
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            const double v = (1.0 - u) * g.x01(int(j));
            inner += g.w01(int(j)) * f(u, v);
        }
        acc += g.w01(int(i)) * (1.0 - u) * inner;
    }
    return acc;
}

}  // namespace magweyl

#endif  // MAGWEYL_QUADRATURE_HPP
