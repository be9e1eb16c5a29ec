#ifndef MAGWEYL_FIELD_HPP
#define MAGWEYL_FIELD_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "magweyl/common.hpp"
#include "magweyl/grid.hpp"
#include "magweyl/multiindex.hpp"
#include "magweyl/quadrature.hpp"

namespace magweyl {

// Multivariate polynomial: sum of coeff * prod_a x_a^{e_a}.
struct Poly {
    struct Term {
        double coeff;
        MultiIndex exps;
    };
    int d = 2;
    std::vector<Term> terms;

    Poly() = default;
    explicit Poly(int d_) : d(d_) {}

    static Poly constant(int d, double c) {
        Poly p(d);
        if (c != 0.0) p.terms.push_back({c, MultiIndex(d, 0)});
        return p;
    }

    void add_term(double c, MultiIndex e) {
        if (int(e.size()) != d) throw std::invalid_argument("Poly: exponent size mismatch");
        terms.push_back({c, std::move(e)});
    }

    double eval(const double* x) const {
        double acc = 0.0;
        for (const Term& t : terms) {
            double v = t.coeff;
            for (int a = 0; a < d; ++a)
                for (int e = 0; e < t.exps[a]; ++e) v *= x[a];
            acc += v;
        }
        return acc;
    }

    Poly derivative(const MultiIndex& alpha) const {
        Poly out(d);
        for (const Term& t : terms) {
            double c = t.coeff;
            MultiIndex e = t.exps;
            bool dead = false;
            for (int a = 0; a < d && !dead; ++a) {
                for (int k = 0; k < alpha[a]; ++k) {
                    if (e[a] == 0) {
                        dead = true;
                        break;
                    }
                    c *= e[a];
                    e[a] -= 1;
                }
            }
            if (!dead && c != 0.0) out.terms.push_back({c, e});
        }
        return out;
    }
};

// ---------------------------------------------------------------------------
// MagneticField: closed 2-form B, stored through its upper-triangle component
// evaluators; B_kj = -B_jk is enforced structurally so antisymmetry is exact.
// Derivatives are analytic for zero/constant/polynomial kinds and 4th-order
// central differences (step 1e-3 * <x>) for smooth-bounded-closure fields.
// ---------------------------------------------------------------------------
struct MagneticField {
    enum class Kind { zero, constant, polynomial, smooth_bounded };

    Kind kind = Kind::zero;
    int d = 2;
    int max_derivative_order = 6;  // M_max
    // constant: value per upper-triangle pair (j < k), row-major packed
    std::vector<double> const_values;
    // polynomial: Poly per upper-triangle pair
    std::vector<Poly> polys;
    // smooth-bounded: component callback for j < k
    std::function<double(int j, int k, const double* x)> smooth;

    static int tri_index(int d, int j, int k) {  // j < k
        int idx = 0;
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b) {
                if (a == j && b == k) return idx;
                ++idx;
            }
        throw std::logic_error("MagneticField: bad component pair");
    }
    static int tri_count(int d) { return d * (d - 1) / 2; }

    static MagneticField zero_field(int d = 2) {
        MagneticField B;
        B.kind = Kind::zero;
        B.d = d;
        return B;
    }
    static MagneticField constant_field(double b, int d = 2) {
        MagneticField B;
        B.kind = Kind::constant;
        B.d = d;
        B.const_values.assign(tri_count(d), 0.0);
        B.const_values[tri_index(d, 0, 1)] = b;
        return B;
    }
    static MagneticField constant_field_general(int d, std::vector<double> upper) {
        MagneticField B;
        B.kind = Kind::constant;
        B.d = d;
        if (int(upper.size()) != tri_count(d))
            throw std::invalid_argument("constant_field_general: wrong component count");
        B.const_values = std::move(upper);
        return B;
    }
    static MagneticField polynomial_field(int d, std::vector<Poly> upper) {
        MagneticField B;
        B.kind = Kind::polynomial;
        B.d = d;
        if (int(upper.size()) != tri_count(d))
            throw std::invalid_argument("polynomial_field: wrong component count");
        B.polys = std::move(upper);
        return B;
    }
    static MagneticField smooth_field(int d, std::function<double(int, int, const double*)> fn,
                                      int m_max = 4) {
        MagneticField B;
        B.kind = Kind::smooth_bounded;
        B.d = d;
        B.smooth = std::move(fn);
        B.max_derivative_order = m_max;
        return B;
    }

    bool is_zero() const { return kind == Kind::zero; }

    // B_jk(x); antisymmetry is structural.
    double component(int j, int k, const double* x) const {
        if (j == k) return 0.0;
        if (j > k) return -component(k, j, x);
        switch (kind) {
            case Kind::zero: return 0.0;
            case Kind::constant: return const_values[tri_index(d, j, k)];
            case Kind::polynomial: return polys[tri_index(d, j, k)].eval(x);
            case Kind::smooth_bounded: return smooth(j, k, x);
        }
        return 0.0;
    }

    // d^alpha B_jk(x)
    double derivative(const MultiIndex& alpha, int j, int k, const double* x) const {
        if (int(alpha.size()) != d) throw std::invalid_argument("MagneticField: multi-index size");
        if (mi_order(alpha) == 0) return component(j, k, x);
        if (mi_order(alpha) > max_derivative_order)
            throw std::invalid_argument("MagneticField: derivative order exceeds M_max");
        if (j == k) return 0.0;
        if (j > k) return -derivative(alpha, k, j, x);
        switch (kind) {
            case Kind::zero: return 0.0;
            case Kind::constant: return 0.0;
            case Kind::polynomial: {
                Poly dp = polys[tri_index(d, j, k)].derivative(alpha);
                return dp.eval(x);
            }
            case Kind::smooth_bounded: return fd_derivative(alpha, j, k, x);
        }
        return 0.0;
    }

  private:
    double fd_derivative(MultiIndex alpha, int j, int k, const double* x) const {
        int axis = -1;
        for (int a = 0; a < d; ++a)
            if (alpha[a] > 0) {
                axis = a;
                break;
            }
        if (axis < 0) return component(j, k, x);
        alpha[axis] -= 1;
        const double step = 1e-3 * jbracket(x, d);
        std::vector<double> xp(x, x + d);
        auto eval = [&](double offset) {
            xp[axis] = x[axis] + offset;
            double v = mi_order(alpha) == 0 ? component(j, k, xp.data())
                                            : fd_derivative(alpha, j, k, xp.data());
            xp[axis] = x[axis];
            return v;
        };
        // 4th-order central difference
        return (-eval(2 * step) + 8 * eval(step) - 8 * eval(-step) + eval(-2 * step)) /
               (12.0 * step);
    }
};

// dB = 0 residual at a point (identically zero for d = 2).
inline double closedness_residual(const MagneticField& B, const double* x) {
    double worst = 0.0;
    MultiIndex e(B.d, 0);
    for (int i = 0; i < B.d; ++i)
        for (int j = i + 1; j < B.d; ++j)
            for (int k = j + 1; k < B.d; ++k) {
                double r = 0.0;
                e.assign(B.d, 0);
                e[i] = 1;
                r += B.derivative(e, j, k, x);
                e.assign(B.d, 0);
                e[j] = 1;
                r += B.derivative(e, k, i, x);
                e.assign(B.d, 0);
                e[k] = 1;
                r += B.derivative(e, i, j, x);
                worst = std::max(worst, std::abs(r));
            }
    return worst;
}

// ---------------------------------------------------------------------------
// Transversal gauge A_j(x) = -sum_k int_0^1 B_jk(s x) s x_k ds, Gauss-Legendre
// order 16. The integrand contracts with x before quadrature, so x.A(x) = 0
// holds at machine precision node by node.
// ---------------------------------------------------------------------------
inline Point transversal_gauge(const MagneticField& B, const Point& x) {
    if (int(x.size()) != B.d) throw std::invalid_argument("transversal_gauge: dimension mismatch");
    const GaussLegendre& g = GaussLegendre::order16();
    Point A(B.d, 0.0);
    std::vector<double> sx(B.d);
    for (std::size_t q = 0; q < g.x.size(); ++q) {
        const double s = g.x01(int(q));
        const double w = g.w01(int(q));
        for (int a = 0; a < B.d; ++a) sx[a] = s * x[a];
        for (int j = 0; j < B.d; ++j) {
            double acc = 0.0;
            for (int k = 0; k < B.d; ++k)
                if (k != j) acc += B.component(j, k, sx.data()) * x[k];
            A[j] -= w * s * acc;
        }
    }
    return A;
}

// Vector potential with dA = B. Gauge is transversal or transversal + df with
// a polynomial scalar f (so df and the circulation of df are exact).
struct VectorPotential {
    enum class Gauge { transversal, transversal_plus_df };

    MagneticField field;
    Gauge gauge = Gauge::transversal;
    Poly f;  // used when gauge == transversal_plus_df

    static VectorPotential transversal(const MagneticField& B) {
        VectorPotential A;
        A.field = B;
        A.gauge = Gauge::transversal;
        return A;
    }
    static VectorPotential shifted(const MagneticField& B, const Poly& f_) {
        if (f_.d != B.d) throw std::invalid_argument("VectorPotential: f dimension mismatch");
        VectorPotential A;
        A.field = B;
        A.gauge = Gauge::transversal_plus_df;
        A.f = f_;
        return A;
    }

    int d() const { return field.d; }

    Point eval(const Point& x) const {
        Point A = transversal_gauge(field, x);
        if (gauge == Gauge::transversal_plus_df) {
            MultiIndex e(field.d, 0);
            for (int j = 0; j < field.d; ++j) {
                e.assign(field.d, 0);
                e[j] = 1;
                A[j] += f.derivative(e).eval(x.data());
            }
        }
        return A;
    }

    // d^alpha A_j(x); differentiates under the s-integral (x_k is linear, so
    // the product rule closes after one boundary term).
    double derivative(const MultiIndex& alpha, int j, const Point& x) const {
        const GaussLegendre& g = GaussLegendre::order16();
        const int m = mi_order(alpha);
        double acc = 0.0;
        std::vector<double> sx(field.d);
        for (std::size_t q = 0; q < g.x.size(); ++q) {
            const double s = g.x01(int(q));
            const double w = g.w01(int(q));
            for (int a = 0; a < field.d; ++a) sx[a] = s * x[a];
            const double sm = std::pow(s, m);
            double term = 0.0;
            for (int k = 0; k < field.d; ++k) {
                if (k == j) continue;
                term += sm * field.derivative(alpha, j, k, sx.data()) * x[k];
                if (alpha[k] >= 1) {
                    MultiIndex am = alpha;
                    am[k] -= 1;
                    term += alpha[k] * std::pow(s, m - 1) *
                            (mi_order(am) == 0 ? field.component(j, k, sx.data())
                                               : field.derivative(am, j, k, sx.data()));
                }
            }
            acc -= w * s * term;
        }
        if (gauge == Gauge::transversal_plus_df) {
            MultiIndex beta = alpha;
            beta[j] += 1;
            acc += f.derivative(beta).eval(x.data());
        }
        return acc;
    }
};

// Circulation Gamma^A(x, y) = int_[x,y] A, Gauss-Legendre order 16.
inline double circulation(const VectorPotential& A, const Point& x, const Point& y) {
    if (x.size() != y.size() || int(x.size()) != A.d())
        throw std::invalid_argument("circulation: dimension mismatch");
    const GaussLegendre& g = GaussLegendre::order16();
    const int d = A.d();
    double acc = 0.0;
    Point p(d);
    for (std::size_t q = 0; q < g.x.size(); ++q) {
        const double t = g.x01(int(q));
        for (int a = 0; a < d; ++a) p[a] = (1.0 - t) * x[a] + t * y[a];
        const Point Ap = A.eval(p);
        double dot = 0.0;
        for (int a = 0; a < d; ++a) dot += Ap[a] * (y[a] - x[a]);
        acc += g.w01(int(q)) * dot;
    }
    return acc;
}

// Flux Phi^B(x, y, z) through the oriented triangle <x, y, z>, tensor
// Gauss-Legendre order 8 on the standard simplex.
inline double flux_triangle(const MagneticField& B, const Point& x, const Point& y,
                            const Point& z) {
    const int d = B.d;
    const GaussLegendre& g = GaussLegendre::order8();
    std::vector<double> u(d), v(d);
    for (int a = 0; a < d; ++a) {
        u[a] = y[a] - x[a];
        v[a] = z[a] - x[a];
    }
    Point p(d);
    return gl_integrate_simplex(g, [&](double s, double t) {
        for (int a = 0; a < d; ++a) p[a] = x[a] + s * u[a] + t * v[a];
        double acc = 0.0;
        for (int j = 0; j < d; ++j)
            for (int k = j + 1; k < d; ++k)
                acc += B.component(j, k, p.data()) * (u[j] * v[k] - u[k] * v[j]);
        return acc;
    });
}

// Lambda^A(x, y) = exp(-i Gamma^A(x, y))
inline cplx phase_lambda(const VectorPotential& A, const Point& x, const Point& y) {
    const double gamma = circulation(A, x, y);
    return {std::cos(gamma), -std::sin(gamma)};
}

// Omega^B(x, y, z) = exp(-i Phi^B(x, y, z))
inline cplx phase_omega_triangle(const MagneticField& B, const Point& x, const Point& y,
                                 const Point& z) {
    const double phi = flux_triangle(B, x, y, z);
    return {std::cos(phi), -std::sin(phi)};
}

// ---------------------------------------------------------------------------
// F_x^B(y, z) = int_{J_x(y,z)} B = 4 sum_{j != k} y_j z_k Omega_jk with
// Omega_jk = int_0^1 ds int_0^s dt B_jk(x + (2s-1) y + (2t-1) z); J_x(y,z) is
// the oriented triangle with vertices x-y-z, x+y-z, x-y+z.
// Derivatives in any of the x/y/z blocks follow from the product rule in the
// y_j z_k prefactors plus (2s-1)/(2t-1) chain-rule powers under the integral.
// ---------------------------------------------------------------------------
namespace detail {

// int_0^1 ds int_0^s dt (d^beta B_jk)(x + (2s-1)y + (2t-1)z) (2s-1)^ps (2t-1)^pt
inline double flux_core_integral(const MagneticField& B, int j, int k, const MultiIndex& beta,
                                 const Point& x, const Point& y, const Point& z, int ps, int pt) {
    const GaussLegendre& g = GaussLegendre::order8();
    const int d = B.d;
    Point p(d);
    const bool plain = (mi_order(beta) == 0);
    return gl_integrate_tri(g, [&](double s, double t) {
        const double a = 2.0 * s - 1.0, b = 2.0 * t - 1.0;
        for (int c = 0; c < d; ++c) p[c] = x[c] + a * y[c] + b * z[c];
        const double val = plain ? B.component(j, k, p.data()) : B.derivative(beta, j, k, p.data());
        return val * std::pow(a, ps) * std::pow(b, pt);
    });
}

// d_x^a d_y^b d_z^c F_x^B(y, z), all three blocks at once.
inline double flux_function_derivative(const MagneticField& B, const MultiIndex& ax,
                                       const MultiIndex& by, const MultiIndex& cz, const Point& x,
                                       const Point& y, const Point& z) {
    const int d = B.d;
    // The integrand argument is x + (2s-1) y + (2t-1) z, so every y-derivative
    // contributes one (2s-1) power and every z-derivative one (2t-1) power;
    // the y_j z_k prefactors add the four product-rule terms below.
    double acc = 0.0;
    MultiIndex beta(d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            if (j == k) continue;
            // term 1: y_j z_k * d^{a+b+c} Psi
            for (int a = 0; a < d; ++a) beta[a] = ax[a] + by[a] + cz[a];
            acc += y[j] * z[k] *
                   flux_core_integral(B, j, k, beta, x, y, z, mi_order(by), mi_order(cz));
            // term 2: b_j z_k, one y-derivative spent on the prefactor y_j
            if (by[j] >= 1) {
                MultiIndex by2 = by;
                by2[j] -= 1;
                for (int a = 0; a < d; ++a) beta[a] = ax[a] + by2[a] + cz[a];
                acc += by[j] * z[k] *
                       flux_core_integral(B, j, k, beta, x, y, z, mi_order(by2), mi_order(cz));
            }
            // term 3: c_k y_j
            if (cz[k] >= 1) {
                MultiIndex cz2 = cz;
                cz2[k] -= 1;
                for (int a = 0; a < d; ++a) beta[a] = ax[a] + by[a] + cz2[a];
                acc += cz[k] * y[j] *
                       flux_core_integral(B, j, k, beta, x, y, z, mi_order(by), mi_order(cz2));
            }
            // term 4: b_j c_k
            if (by[j] >= 1 && cz[k] >= 1) {
                MultiIndex by2 = by, cz2 = cz;
                by2[j] -= 1;
                cz2[k] -= 1;
                for (int a = 0; a < d; ++a) beta[a] = ax[a] + by2[a] + cz2[a];
                acc += by[j] * cz[k] *
                       flux_core_integral(B, j, k, beta, x, y, z, mi_order(by2), mi_order(cz2));
            }
        }
    return 4.0 * acc;
}

}  // namespace detail

inline double flux_function(const MagneticField& B, const Point& x, const Point& y,
                            const Point& z) {
    const MultiIndex zero(B.d, 0);
    return detail::flux_function_derivative(B, zero, zero, zero, x, y, z);
}

// omega_x^B(y, z) = exp(-i F_x^B(y, z))
inline cplx omega_phase(const MagneticField& B, const Point& x, const Point& y, const Point& z) {
    const double F = flux_function(B, x, y, z);
    return {std::cos(F), -std::sin(F)};
}

enum class OmegaAxis { x, y, z };

// d^alpha omega_x^B in the chosen variable block, assembled by the exact
// Leibniz recursion over derivatives of F (the multivariate Faa di Bruno
// expansion of exp(-iF)); alpha is a d-dim multi-index.
inline cplx omega_derivative(const MagneticField& B, OmegaAxis axis, const MultiIndex& alpha,
                             const Point& x, const Point& y, const Point& z) {
    const int d = B.d;
    if (int(alpha.size()) != d) throw std::invalid_argument("omega_derivative: multi-index size");
    if (mi_order(alpha) > B.max_derivative_order)
        throw std::invalid_argument("omega_derivative: order exceeds field M_max");

    const MultiIndex zero(d, 0);
    auto fderiv = [&](const MultiIndex& a) -> double {
        switch (axis) {
            case OmegaAxis::x: return detail::flux_function_derivative(B, a, zero, zero, x, y, z);
            case OmegaAxis::y: return detail::flux_function_derivative(B, zero, a, zero, x, y, z);
            case OmegaAxis::z: return detail::flux_function_derivative(B, zero, zero, a, x, y, z);
        }
        return 0.0;
    };

    std::map<MultiIndex, cplx> memo;
    std::map<MultiIndex, double> fmemo;
    std::function<double(const MultiIndex&)> F = [&](const MultiIndex& a) {
        auto it = fmemo.find(a);
        if (it != fmemo.end()) return it->second;
        double v = fderiv(a);
        fmemo[a] = v;
        return v;
    };
    std::function<cplx(const MultiIndex&)> W = [&](const MultiIndex& a) -> cplx {
        auto it = memo.find(a);
        if (it != memo.end()) return it->second;
        cplx val;
        if (mi_order(a) == 0) {
            const double f0 = F(a);
            val = cplx(std::cos(f0), -std::sin(f0));
        } else {
            int e = 0;
            while (a[e] == 0) ++e;
            MultiIndex rest = a;
            rest[e] -= 1;
            MultiIndex sigma(d, 0);
            sigma[e] = 1;
            // d^a w = d^rest(-i (d_e F) w) = -i sum_{b <= rest} C(rest,b) (d^{b+sigma}F)(d^{rest-b} w)
            std::vector<MultiIndex> subs;
            for (int m = 0; m <= mi_order(rest); ++m) enumerate_multiindices(d, m, subs);
            cplx acc(0.0);
            for (const MultiIndex& b : subs) {
                if (!mi_leq(b, rest)) continue;
                MultiIndex bs(d);
                MultiIndex rb(d);
                for (int c = 0; c < d; ++c) {
                    bs[c] = b[c] + sigma[c];
                    rb[c] = rest[c] - b[c];
                }
                acc += mi_binom(rest, b) * F(bs) * W(rb);
            }
            val = -iu * acc;
        }
        memo[a] = val;
        return val;
    };
    return W(alpha);
}

// ---------------------------------------------------------------------------
// Field weight functionals mu_m, rho_m and w_M(B) of (estimated sups over a
// uniform sample grid; the true sups over all of R^d are not computable).
// ---------------------------------------------------------------------------
struct FieldWeightReport {
    std::vector<double> mu;   // mu_m, m = 0..M
    std::vector<double> rho;  // rho_m = max_{n<=m} mu_n
    double w = 0.0;           // w_M(B)
    int M = 0;
    double box_halfwidth = 0.0;
    int points_per_axis = 0;
};

namespace detail {
inline void compositions(int m, int parts, std::vector<int>& cur,
                         const std::function<void(const std::vector<int>&)>& emit) {
    if (parts == 1) {
        if (m >= 1) {
            cur.push_back(m);
            emit(cur);
            cur.pop_back();
        }
        return;
    }
    for (int p = 1; p <= m - (parts - 1); ++p) {
        cur.push_back(p);
        compositions(m - p, parts - 1, cur, emit);
        cur.pop_back();
    }
}
}  // namespace detail

inline FieldWeightReport field_weight(const MagneticField& B, int M, double box_halfwidth = 8.0,
                                      int points_per_axis = 33) {
    if (points_per_axis < 1) throw std::invalid_argument("field_weight: empty sample grid");
    if (M > B.max_derivative_order)
        throw std::invalid_argument("field_weight: M exceeds field M_max");
    FieldWeightReport rep;
    rep.M = M;
    rep.box_halfwidth = box_halfwidth;
    rep.points_per_axis = points_per_axis;
    rep.mu.assign(M + 1, 0.0);
    rep.rho.assign(M + 1, 0.0);

    const int d = B.d;
    std::int64_t total = 1;
    for (int a = 0; a < d; ++a) total *= points_per_axis;
    std::vector<double> x(d);

    for (int m = 0; m <= M; ++m) {
        std::vector<MultiIndex> alphas;
        enumerate_multiindices(d, m, alphas);
        double sup = 0.0;
        for (std::int64_t p = 0; p < total; ++p) {
            std::int64_t rem = p;
            for (int a = d - 1; a >= 0; --a) {
                const int idx = int(rem % points_per_axis);
                rem /= points_per_axis;
                x[a] = points_per_axis == 1
                           ? 0.0
                           : -box_halfwidth + 2.0 * box_halfwidth * idx / (points_per_axis - 1);
            }
            for (int j = 0; j < d; ++j)
                for (int k = j + 1; k < d; ++k)
                    for (const MultiIndex& alpha : alphas)
                        sup = std::max(sup, std::abs(m == 0 ? B.component(j, k, x.data())
                                                            : B.derivative(alpha, j, k, x.data())));
        }
        rep.mu[m] = sup;
        rep.rho[m] = m == 0 ? sup : std::max(rep.rho[m - 1], sup);
    }

    // w_M(B) per (1.3): max over m <= M, l <= m, compositions p_1+..+p_l = m of
    // prod_s (mu_{p_s} + mu_{p_s - 1})
    double w = rep.mu[0];
    for (int m = 1; m <= M; ++m) {
        for (int l = 1; l <= m; ++l) {
            std::vector<int> cur;
            detail::compositions(m, l, cur, [&](const std::vector<int>& comp) {
                double prod = 1.0;
                for (int p : comp) prod *= rep.mu[p] + rep.mu[p - 1];
                w = std::max(w, prod);
            });
        }
    }
    rep.w = w;
    return rep;
}

// ---------------------------------------------------------------------------
// theta_weight: the (3.7)-style weight
//   sup <x>^-N <y>^-q1 <z>^-q2 max_{|a|<=M,|b|<=m1,|c|<=m2} |d_x^a d_y^b d_z^c Theta|
// over a sample grid; returns +inf (HUGE_VAL) when one grid doubling still
// grows the sup, since the weight is allowed to take the value +infinity.
// ---------------------------------------------------------------------------
struct ThetaFunction {
    int d = 2;
    // derivative evaluator: blocks (a, b, c) on (x, y, z)
    std::function<double(const MultiIndex& a, const MultiIndex& b, const MultiIndex& c,
                         const Point& x, const Point& y, const Point& z)>
        eval;
};

inline double theta_weight(const ThetaFunction& theta, double N, double q1, double q2, int M,
                           int m1, int m2, double box_halfwidth = 4.0, int points_per_axis = 5,
                           double growth_tol = 1.05) {
    const int d = theta.d;
    std::vector<std::vector<MultiIndex>> da, db, dc;
    auto fill = [&](std::vector<std::vector<MultiIndex>>& dst, int maxo) {
        dst.resize(maxo + 1);
        for (int m = 0; m <= maxo; ++m) enumerate_multiindices(d, m, dst[m]);
    };
    fill(da, M);
    fill(db, m1);
    fill(dc, m2);

    auto sup_on_box = [&](double R) {
        const int P = points_per_axis;
        std::int64_t per_block = 1;
        for (int a = 0; a < d; ++a) per_block *= P;
        Point x(d), y(d), z(d);
        auto set_point = [&](Point& p, std::int64_t flat) {
            for (int a = d - 1; a >= 0; --a) {
                const int idx = int(flat % P);
                flat /= P;
                p[a] = P == 1 ? 0.0 : -R + 2.0 * R * idx / (P - 1);
            }
        };
        double sup = 0.0;
        for (std::int64_t ix = 0; ix < per_block; ++ix) {
            set_point(x, ix);
            for (std::int64_t iy = 0; iy < per_block; ++iy) {
                set_point(y, iy);
                for (std::int64_t iz = 0; iz < per_block; ++iz) {
                    set_point(z, iz);
                    double maxd = 0.0;
                    for (int oa = 0; oa <= M; ++oa)
                        for (const auto& a : da[oa])
                            for (int ob = 0; ob <= m1; ++ob)
                                for (const auto& b : db[ob])
                                    for (int oc = 0; oc <= m2; ++oc)
                                        for (const auto& c : dc[oc])
                                            maxd = std::max(
                                                maxd, std::abs(theta.eval(a, b, c, x, y, z)));
                    const double wgt = std::pow(jbracket(x), -N) * std::pow(jbracket(y), -q1) *
                                       std::pow(jbracket(z), -q2);
                    sup = std::max(sup, wgt * maxd);
                }
            }
        }
        return sup;
    };

    const double s1 = sup_on_box(box_halfwidth);
    const double s2 = sup_on_box(2.0 * box_halfwidth);
    if (s2 > growth_tol * s1 + 1e-12) return HUGE_VAL;
    return std::max(s1, s2);
}

}  // namespace magweyl

#endif  // MAGWEYL_FIELD_HPP
