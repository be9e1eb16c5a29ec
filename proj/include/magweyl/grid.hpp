#ifndef MAGWEYL_GRID_HPP
#define MAGWEYL_GRID_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "magweyl/common.hpp"

namespace magweyl {

using Point = std::vector<double>;

// Uniform box grid on [-L, L]^d with half-offset nodes x_k = -L + (k+1/2) h,
// h = 2L/n. Nodes are symmetric about 0 and never hit the origin.
struct BoxGrid {
    int d = 2;
    double L = 8.0;
    int n = 32;

    BoxGrid() = default;
    BoxGrid(int d_, double L_, int n_) : d(d_), L(L_), n(n_) {
        if (d < 1) throw std::invalid_argument("BoxGrid: dimension must be >= 1");
        if (n < 4 || n % 2 != 0) throw std::invalid_argument("BoxGrid: n must be even and >= 4");
        if (L <= 0.0) throw std::invalid_argument("BoxGrid: L must be positive");
    }

    double h() const { return 2.0 * L / n; }
    double node(int k) const { return -L + (k + 0.5) * h(); }

    std::int64_t npoints() const {
        std::int64_t p = 1;
        for (int a = 0; a < d; ++a) p *= n;
        return p;
    }
    double cell() const { return std::pow(h(), d); }

    // row-major flat index <-> multi-index
    void unflatten(std::int64_t flat, int* idx) const {
        for (int a = d - 1; a >= 0; --a) {
            idx[a] = int(flat % n);
            flat /= n;
        }
    }
    std::int64_t flatten(const int* idx) const {
        std::int64_t f = 0;
        for (int a = 0; a < d; ++a) f = f * n + idx[a];
        return f;
    }
    void point_of(std::int64_t flat, double* x) const {
        for (int a = d - 1; a >= 0; --a) {
            x[a] = node(int(flat % n));
            flat /= n;
        }
    }
    Point point_of(std::int64_t flat) const {
        Point x(d);
        point_of(flat, x.data());
        return x;
    }

    bool operator==(const BoxGrid& o) const { return d == o.d && L == o.L && n == o.n; }
    bool operator!=(const BoxGrid& o) const { return !(*this == o); }
};

// Phase-space grid: position BoxGrid plus its centered discrete Fourier dual,
// xi_m = (m + 1/2 - n/2) * pi/L (spacing pi/L, extent n*pi/(2L), centered).
struct PhaseSpaceGrid {
    BoxGrid pos;

    PhaseSpaceGrid() = default;
    explicit PhaseSpaceGrid(const BoxGrid& g) : pos(g) {}
    PhaseSpaceGrid(int d, double L, int n) : pos(d, L, n) {}

    int d() const { return pos.d; }
    int n() const { return pos.n; }
    double L() const { return pos.L; }
    double h() const { return pos.h(); }
    double dxi() const { return pi / pos.L; }
    double xi_node(int m) const { return (m + 0.5 - pos.n / 2.0) * dxi(); }

    std::int64_t npos() const { return pos.npoints(); }
    std::int64_t nsymbol() const { return pos.npoints() * pos.npoints(); }
    // phase-space cell volume (h * dxi)^d = (2*pi/n)^d
    double cell_xi() const { return std::pow(dxi(), d()); }
    double cell_phase() const { return pos.cell() * cell_xi(); }

    void xi_of(std::int64_t flat, double* xi) const {
        for (int a = d() - 1; a >= 0; --a) {
            xi[a] = xi_node(int(flat % n()));
            flat /= n();
        }
    }
    Point xi_of(std::int64_t flat) const {
        Point xi(d());
        xi_of(flat, xi.data());
        return xi;
    }

    bool operator==(const PhaseSpaceGrid& o) const { return pos == o.pos; }
    bool operator!=(const PhaseSpaceGrid& o) const { return !(*this == o); }
};

// Canonical symplectic pairing sigma(Y, Z) = <eta, z> - <zeta, y> for phase
// points Y = (y, eta), Z = (z, zeta).
inline double symplectic(const double* y, const double* eta, const double* z,
                         const double* zeta, int d) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) s += eta[a] * z[a] - zeta[a] * y[a];
    return s;
}

// Discretized L^2 function on the position grid; inner product carries the
// quadrature weight h^d.
struct StateVector {
    BoxGrid grid;
    std::vector<cplx> values;

    StateVector() = default;
    explicit StateVector(const BoxGrid& g) : grid(g), values(g.npoints(), cplx(0.0)) {}

    std::int64_t size() const { return std::int64_t(values.size()); }

    cplx inner(const StateVector& other) const {
        if (grid != other.grid) throw std::invalid_argument("StateVector::inner: grid mismatch");
        cplx acc(0.0);
        for (std::int64_t i = 0; i < size(); ++i) acc += std::conj(values[i]) * other.values[i];
        return acc * grid.cell();
    }
    double norm() const {
        double acc = 0.0;
        for (const cplx& v : values) acc += std::norm(v);
        return std::sqrt(acc * grid.cell());
    }
};

// Gaussian test state exp(-|x-c|^2 / (2 sigma^2)) * exp(i <k0, x>), unnormalized.
inline StateVector gaussian_state(const BoxGrid& g, const Point& center, double sigma,
                                  const Point& k0 = {}) {
    StateVector f(g);
    std::vector<double> x(g.d);
    for (std::int64_t i = 0; i < g.npoints(); ++i) {
        g.point_of(i, x.data());
        double r2 = 0.0, ph = 0.0;
        for (int a = 0; a < g.d; ++a) {
            const double dx = x[a] - (a < int(center.size()) ? center[a] : 0.0);
            r2 += dx * dx;
            if (!k0.empty()) ph += k0[a] * x[a];
        }
        f.values[i] = std::exp(-r2 / (2.0 * sigma * sigma)) * cplx(std::cos(ph), std::sin(ph));
    }
    return f;
}

}  // namespace magweyl

#endif  // MAGWEYL_GRID_HPP
