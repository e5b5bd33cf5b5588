#include "enn/spd.hpp"

#include <Eigen/Cholesky>

#include "enn/errors.hpp"

namespace enn {

Matrix spd_solve(const Matrix& a, const Matrix& b, double sym_tol) {
    if (a.rows() != a.cols())
        throw DimensionMismatch("spd_solve: A is not square");
    if (a.rows() != b.rows())
        throw DimensionMismatch("spd_solve: A and B row counts differ");

    const double scale = 1.0 + a.cwiseAbs().maxCoeff();
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > sym_tol * scale)
        throw NotPositiveDefinite("spd_solve: matrix is not symmetric (|A - A^T| = " +
                                  std::to_string(asym) + ")");

    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("spd_solve: Cholesky factorization failed "
                                  "(non-positive pivot)");
    return llt.solve(b);
}

Matrix spd_solve_regularized(const Matrix& a, const Matrix& b, double jitter,
                             double sym_tol) {
    try {
        return spd_solve(a, b, sym_tol);
    } catch (const NotPositiveDefinite&) {
        if (jitter < 0.0)
            jitter = 1e-10 * a.trace() / static_cast<double>(a.rows());
        Matrix regularized = a;
        regularized.diagonal().array() += jitter;
        return spd_solve(regularized, b, sym_tol);
    }
}

} // namespace enn
