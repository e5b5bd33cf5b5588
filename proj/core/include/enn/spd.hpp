#pragma once

#include "enn/matrix.hpp"

namespace enn {

/// Solve A X = B for symmetric positive definite A via Cholesky (LLT).
/// No explicit inverse is formed. A must be symmetric to within
/// sym_tol * (1 + max|A|); a non-positive pivot raises NotPositiveDefinite.
Matrix spd_solve(const Matrix& a, const Matrix& b, double sym_tol = 1e-10);

/// spd_solve with one retry: on NotPositiveDefinite, jitter is added to the
/// diagonal and the solve re-attempted once. jitter < 0 selects the default
/// 1e-10 * trace(A)/n. Ensemble covariances are rank deficient whenever
/// N_e <= N_d, so first-attempt failures are expected there.
Matrix spd_solve_regularized(const Matrix& a, const Matrix& b, double jitter = -1.0,
                             double sym_tol = 1e-10);

} // namespace enn
