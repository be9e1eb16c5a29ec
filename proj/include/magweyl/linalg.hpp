#ifndef MAGWEYL_LINALG_HPP
#define MAGWEYL_LINALG_HPP

#include <Eigen/Dense>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include <lapacke.h>

#include "magweyl/common.hpp"

namespace magweyl {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// BLAS threading is pinned to one thread so that eigensolver output is
// bit-stable across runs; the artifact's own MAGWEYL_THREADS parallelism
// only ever writes disjoint slots.
inline void pin_blas_threads() {
    static bool done = [] {
        setenv("OPENBLAS_NUM_THREADS", "1", 1);
        setenv("OMP_NUM_THREADS", "1", 0);
        return true;
    }();
    (void)done;
}

struct HermitianEig {
    VectorXd eigenvalues;   // ascending
    MatrixXcd eigenvectors; // columns
};

// Dense Hermitian eigendecomposition (LAPACK zheevd; reads the lower triangle).
inline HermitianEig hermitian_eig(const MatrixXcd& A) {
    pin_blas_threads();
    const lapack_int n = lapack_int(A.rows());
    if (A.cols() != A.rows()) throw std::invalid_argument("hermitian_eig: square matrix required");
    HermitianEig out;
    out.eigenvectors = A;
    out.eigenvalues.resize(n);
    lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'V', 'L', n,
        reinterpret_cast<lapack_complex_double*>(out.eigenvectors.data()), n,
        out.eigenvalues.data());
    if (info != 0) throw std::runtime_error("hermitian_eig: zheevd failed, info=" +
                                            std::to_string(info));
    return out;
}

inline VectorXd hermitian_eigenvalues(const MatrixXcd& A) {
    pin_blas_threads();
    const lapack_int n = lapack_int(A.rows());
    MatrixXcd work = A;
    VectorXd evals(n);
    lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n,
                                     reinterpret_cast<lapack_complex_double*>(work.data()), n,
                                     evals.data());
    if (info != 0) throw std::runtime_error("hermitian_eigenvalues: zheevd failed");
    return evals;
}

// Largest singular value by power iteration on M^H M; deterministic start.
inline double power_iteration_norm(const MatrixXcd& M, int max_iters = 200, double tol = 1e-10,
                                   std::uint64_t seed = 12345) {
    const std::int64_t n = M.cols();
    if (n == 0) return 0.0;
    Rng rng(seed);
    VectorXcd v(n);
    for (std::int64_t i = 0; i < n; ++i) v(i) = rng.complex_unit_box();
    v.normalize();
    double sigma = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        VectorXcd w = M * v;
        VectorXcd u = M.adjoint() * w;
        const double nu = u.norm();
        if (nu == 0.0) return 0.0;
        const double next = std::sqrt(nu);
        u /= nu;
        const double rel = std::abs(next - sigma) / (next > 0 ? next : 1.0);
        v = u;
        sigma = next;
        if (it > 2 && rel < tol) break;
    }
    return sigma;
}

inline double hermiticity_defect(const MatrixXcd& M) {
    return (M - M.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace magweyl

#endif  // MAGWEYL_LINALG_HPP
