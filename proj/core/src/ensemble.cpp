#include "enn/ensemble.hpp"

#include "enn/errors.hpp"

namespace enn {

WeightEnsemble sample_prior_ensemble(RngStream& rng, Index n_m, Index n_e,
                                     const Vector& prior_mean, double prior_std) {
    if (n_e < 2)
        throw DimensionMismatch("sample_prior_ensemble: N_e must be >= 2");
    if (prior_mean.size() != 0 && prior_mean.size() != n_m)
        throw DimensionMismatch("sample_prior_ensemble: prior_mean length != N_m");

    Matrix draws = prior_std * sample_standard_normal(rng, n_m, n_e);
    if (prior_mean.size() != 0) draws.colwise() += prior_mean;

    WeightEnsemble ens;
    ens.current = draws;
    ens.prior = std::move(draws);
    return ens;
}

Vector ensemble_mean(const Matrix& m) { return m.rowwise().mean(); }

Matrix anomalies(const Matrix& m) { return m.colwise() - m.rowwise().mean().eval(); }

CovarianceSet covariances(const Matrix& weights, const Matrix& preds,
                          Index cm_materialize_threshold) {
    if (weights.cols() != preds.cols())
        throw DimensionMismatch("covariances: weights and preds realization counts differ");
    if (weights.cols() < 2)
        throw DimensionMismatch("covariances: N_e must be >= 2");

    const double divisor = static_cast<double>(weights.cols() - 1);
    CovarianceSet cov;
    cov.m_anoms = anomalies(weights);
    const Matrix d_anoms = anomalies(preds);

    if (weights.rows() <= cm_materialize_threshold)
        cov.c_m = cov.m_anoms * cov.m_anoms.transpose() / divisor;
    cov.c_d_pred = d_anoms * d_anoms.transpose() / divisor;
    cov.c_md = cov.m_anoms * d_anoms.transpose() / divisor;
    return cov;
}

} // namespace enn
