#pragma once

#include "enn/matrix.hpp"
#include "enn/rng.hpp"

namespace enn {

/// The evolving set of weight realizations. prior holds the initial draws
/// (the m_pr,j columns) and never changes after construction.
struct WeightEnsemble {
    Matrix current; // N_m x N_e
    Matrix prior;   // N_m x N_e, fixed

    Index weight_dim() const { return current.rows(); }
    Index realization_count() const { return current.cols(); }
};

/// Draw N_e realizations as prior_mean + prior_std * N(0,1). An empty
/// prior_mean means zero. current and prior start identical.
WeightEnsemble sample_prior_ensemble(RngStream& rng, Index n_m, Index n_e,
                                     const Vector& prior_mean = Vector(),
                                     double prior_std = 1.0);

/// Row-wise arithmetic mean over realizations.
Vector ensemble_mean(const Matrix& m);

/// Columns minus the row-wise mean.
Matrix anomalies(const Matrix& m);

/// The three per-iteration covariance estimators of the update formula, all
/// centered outer products divided by N_e - 1:
///   c_m      = weight covariance          (N_m x N_m)
///   c_d_pred = predicted-data covariance  (N_d x N_d)
///   c_md     = cross covariance           (N_m x N_d)
/// m_anoms keeps the centered weight columns so c_m * v products can be
/// formed without materializing c_m; that matrix is skipped entirely when
/// N_m exceeds cm_materialize_threshold (c_m is left 0 x 0).
struct CovarianceSet {
    Matrix c_m;
    Matrix c_d_pred;
    Matrix c_md;
    Matrix m_anoms; // N_m x N_e, centered (unscaled)

    bool has_materialized_cm() const { return c_m.size() > 0; }
};

CovarianceSet covariances(const Matrix& weights, const Matrix& preds,
                          Index cm_materialize_threshold = 2000);

} // namespace enn
