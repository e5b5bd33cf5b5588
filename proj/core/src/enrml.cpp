#include "enn/enrml.hpp"

#include <cmath>
#include <limits>

#include "enn/errors.hpp"
#include "enn/spd.hpp"

namespace enn {

NoiseModel NoiseModel::uniform(Index n_d, double std_dev) {
    NoiseModel nm;
    nm.obs_std = Vector::Constant(n_d, std_dev);
    nm.validate();
    return nm;
}

void NoiseModel::validate() const {
    if ((obs_std.array() <= 0.0).any())
        throw NegativeVariance("NoiseModel: obs_std entries must be > 0");
}

PriorModel PriorModel::standard_normal(Index n_m) {
    PriorModel pm;
    pm.mean = Vector::Zero(n_m);
    pm.cov_diag = Vector::Ones(n_m);
    return pm;
}

void PriorModel::validate() const {
    if (mean.size() != cov_diag.size())
        throw DimensionMismatch("PriorModel: mean and cov_diag length differ");
    if ((cov_diag.array() <= 0.0).any())
        throw NegativeVariance("PriorModel: cov_diag entries must be > 0");
}

const char* to_string(TrainStatus s) {
    switch (s) {
        case TrainStatus::converged: return "converged";
        case TrainStatus::max_iterations: return "max_iterations";
        case TrainStatus::repeated_rejection: return "repeated_rejection";
    }
    return "?";
}

double data_mismatch(const Vector& pred, const Vector& d_obs, const NoiseModel& noise) {
    if (pred.size() != d_obs.size() || pred.size() != noise.obs_std.size())
        throw DimensionMismatch("data_mismatch: length mismatch");
    return ((pred - d_obs).array() / noise.obs_std.array()).square().sum();
}

Vector data_mismatch_ensemble(const Matrix& preds, const Vector& d_obs,
                              const NoiseModel& noise) {
    if (preds.rows() != d_obs.size())
        throw DimensionMismatch("data_mismatch_ensemble: row count != N_d");
    Vector sd(preds.cols());
    for (Index j = 0; j < preds.cols(); ++j)
        sd(j) = data_mismatch(preds.col(j), d_obs, noise);
    return sd;
}

double objective(const Vector& m, const Vector& m_pr, const Vector& pred,
                 const Vector& d_obs, const PriorModel& prior, const NoiseModel& noise) {
    if (m.size() != m_pr.size() || m.size() != prior.cov_diag.size())
        throw DimensionMismatch("objective: weight-space length mismatch");
    const double model_mismatch =
        ((m - m_pr).array().square() / prior.cov_diag.array()).sum();
    return 0.5 * model_mismatch + 0.5 * data_mismatch(pred, d_obs, noise);
}

Matrix perturb_observations(const Vector& d_obs, const NoiseModel& noise,
                            RngStream& rng, Index n_e) {
    if (d_obs.size() != noise.obs_std.size())
        throw DimensionMismatch("perturb_observations: length mismatch");
    if (n_e < 2) throw DimensionMismatch("perturb_observations: N_e must be >= 2");
    Matrix out(d_obs.size(), n_e);
    const Vector var = noise.variance_diag();
    for (Index j = 0; j < n_e; ++j) out.col(j) = sample_gaussian(rng, d_obs, var);
    return out;
}

Matrix enrml_step(const WeightEnsemble& ensemble, const Matrix& preds,
                  const Matrix& d_obs_pert, const CovarianceSet& cov,
                  const PriorModel& prior, const NoiseModel& noise, double lambda) {
    const Index n_e = ensemble.realization_count();
    const Index n_d = preds.rows();
    if (preds.cols() != n_e || d_obs_pert.rows() != n_d || d_obs_pert.cols() != n_e)
        throw DimensionMismatch("enrml_step: shape mismatch");
    if (lambda <= 0.0) throw DimensionMismatch("enrml_step: lambda must be > 0");

    // A = (1 + lambda) C_D + C_Dl, factored once for both right-hand sides.
    Matrix a = cov.c_d_pred;
    a.diagonal() += (1.0 + lambda) * noise.variance_diag();

    // Prior-deviation term, premultiplied by C_M^{-1}.
    Matrix dev = ensemble.current - ensemble.prior;
    for (Index i = 0; i < dev.rows(); ++i) dev.row(i) /= prior.cov_diag(i);

    const Matrix residual = preds - d_obs_pert;

    // Stack both solves: A X = [C_md^T * dev | residual].
    Matrix rhs(n_d, n_e + n_e);
    rhs.leftCols(n_e) = cov.c_md.transpose() * dev;
    rhs.rightCols(n_e) = residual;
    const Matrix x = spd_solve_regularized(a, rhs);

    const double damp = 1.0 / (1.0 + lambda);
    Matrix next = ensemble.current;
    if (cov.has_materialized_cm()) {
        next.noalias() -= damp * (cov.c_m * dev);
    } else {
        // C_Ml * dev through the anomaly factor, never forming N_m x N_m.
        const double divisor = static_cast<double>(n_e - 1);
        next.noalias() -=
            damp / divisor * (cov.m_anoms * (cov.m_anoms.transpose() * dev));
    }
    next.noalias() += damp * (cov.c_md * x.leftCols(n_e));
    next.noalias() -= cov.c_md * x.rightCols(n_e);
    return next;
}

double lambda_init(double sd_mean_initial, Index n_d, double floor) {
    if (sd_mean_initial < 0.0 || n_d < 1)
        throw DimensionMismatch("lambda_init: need sd_mean >= 0 and N_d >= 1");
    return std::max(sd_mean_initial / (2.0 * static_cast<double>(n_d)), floor);
}

LambdaUpdate lambda_update(const LambdaController& ctrl, double old_mean, double old_std,
                           double new_mean, double new_std) {
    if (new_mean > old_mean)
        return {LambdaDecision::reject_grow, ctrl.lambda * ctrl.gamma};
    if (new_std < old_std)
        return {LambdaDecision::accept_shrink,
                std::max(ctrl.lambda / ctrl.gamma, ctrl.floor)};
    return {LambdaDecision::accept_hold, ctrl.lambda};
}

namespace {

struct SdStats {
    double mean;
    double std;
};

SdStats sd_statistics(const Matrix& preds, const Vector& d_obs, const NoiseModel& noise) {
    const Vector sd = data_mismatch_ensemble(preds, d_obs, noise);
    const double mean = sd.mean();
    const double var = (sd.array() - mean).square().sum() /
                       static_cast<double>(sd.size() - 1);
    return {mean, std::sqrt(var)};
}

double mean_prediction_loss(const Matrix& preds, const Vector& targets) {
    const Vector mean_pred = preds.rowwise().mean();
    return (mean_pred - targets).cwiseAbs().mean();
}

} // namespace

TrainResult train_with_forward(const ForwardFn& train_forward, const Vector& train_targets,
                               const NoiseModel& noise, const PriorModel& prior,
                               RngStream& ensemble_rng, RngStream& perturb_rng,
                               const TrainOptions& opts, const ForwardFn& test_forward,
                               const Vector& test_targets, const TrainObserver& observer) {
    noise.validate();
    prior.validate();
    if (train_targets.size() != noise.obs_std.size())
        throw DimensionMismatch("train: targets and noise model length differ");

    const Index n_m = prior.mean.size();
    const Index n_d = train_targets.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    TrainResult result;
    // Per-coordinate prior draws; collapses to sample_prior_ensemble for a
    // uniform cov_diag.
    {
        Matrix draws = sample_standard_normal(ensemble_rng, n_m, opts.n_e);
        for (Index i = 0; i < n_m; ++i)
            draws.row(i) = prior.mean(i) + std::sqrt(prior.cov_diag(i)) * draws.row(i).array();
        result.ensemble.current = draws;
        result.ensemble.prior = std::move(draws);
    }

    Matrix preds = train_forward(result.ensemble.current);
    if (preds.rows() != n_d || preds.cols() != opts.n_e)
        throw DimensionMismatch("train: forward map produced wrong prediction shape");
    SdStats stats = sd_statistics(preds, train_targets, noise);

    EnrmlState& state = result.state;
    state.lambda_controller.gamma = opts.lambda_gamma;
    state.lambda_controller.floor = opts.lambda_floor;
    state.lambda_controller.lambda =
        opts.lambda_init_override > 0.0
            ? opts.lambda_init_override
            : lambda_init(stats.mean, n_d, opts.lambda_floor);
    state.sd_mean = stats.mean;
    state.sd_std = stats.std;

    const Matrix pert_fixed =
        opts.perturbation == PerturbationMode::fixed
            ? perturb_observations(train_targets, noise, perturb_rng, opts.n_e)
            : Matrix();

    auto test_loss_of = [&](const Matrix& ens) {
        if (!test_forward) return nan;
        return mean_prediction_loss(test_forward(ens), test_targets);
    };

    std::vector<double> window;
    Index consecutive_rejections = 0;
    result.status = TrainStatus::max_iterations;

    for (Index iter = 1; iter <= opts.stopping.max_iterations; ++iter) {
        const Matrix pert_iter =
            opts.perturbation == PerturbationMode::per_iteration
                ? perturb_observations(train_targets, noise, perturb_rng, opts.n_e)
                : Matrix();
        const Matrix& d_pert =
            opts.perturbation == PerturbationMode::fixed ? pert_fixed : pert_iter;

        bool committed = false;
        while (true) {
            const CovarianceSet cov =
                covariances(result.ensemble.current, preds, opts.cm_materialize_threshold);
            const double lambda_used = state.lambda_controller.lambda;
            const Matrix proposal =
                enrml_step(result.ensemble, preds, d_pert, cov, prior, noise, lambda_used);
            const Matrix proposal_preds = train_forward(proposal);
            SdStats prop = sd_statistics(proposal_preds, train_targets, noise);

            // A proposal that produced non-finite predictions counts as a
            // rejection, not an acceptance-by-NaN-comparison.
            const bool finite = std::isfinite(prop.mean) && std::isfinite(prop.std);
            LambdaUpdate upd =
                finite ? lambda_update(state.lambda_controller, state.sd_mean,
                                       state.sd_std, prop.mean, prop.std)
                       : LambdaUpdate{LambdaDecision::reject_grow,
                                      state.lambda_controller.lambda *
                                          state.lambda_controller.gamma};

            IterationRecord rec;
            rec.iteration = iter;
            rec.lambda = lambda_used;
            rec.sd_mean = prop.mean;
            rec.sd_std = prop.std;
            rec.train_loss = mean_prediction_loss(proposal_preds, train_targets);
            rec.accepted = upd.decision != LambdaDecision::reject_grow;
            rec.test_loss = test_loss_of(proposal);
            if (observer.on_record) observer.on_record(rec);

            state.lambda_controller.lambda = upd.lambda;

            if (upd.decision == LambdaDecision::reject_grow) {
                ++state.rejected_count;
                ++consecutive_rejections;
                if (consecutive_rejections >= opts.stopping.max_consecutive_rejections) {
                    result.status = TrainStatus::repeated_rejection;
                    return result;
                }
                continue;
            }

            consecutive_rejections = 0;
            ++state.accepted_count;
            result.ensemble.current = proposal;
            preds = proposal_preds;
            state.sd_mean = prop.mean;
            state.sd_std = prop.std;
            state.iteration = iter;
            state.loss_history.push_back(rec);
            if (observer.on_accepted_ensemble)
                observer.on_accepted_ensemble(iter, result.ensemble.current);
            committed = true;
            break;
        }
        if (!committed) break;

        window.push_back(state.sd_mean);
        if (static_cast<Index>(window.size()) > opts.stopping.window)
            window.erase(window.begin());
        if (static_cast<Index>(window.size()) == opts.stopping.window) {
            const double base = std::max(window.front(), 1e-300);
            if (std::abs(window.front() - window.back()) / base <
                opts.stopping.window_rel_tol) {
                result.status = TrainStatus::converged;
                return result;
            }
        }
    }
    return result;
}

TrainResult train(const NetworkArchitecture& arch, const Dataset& train_ds,
                  const Dataset* test_ds, const NoiseModel& noise, const PriorModel& prior,
                  RngStream& ensemble_rng, RngStream& perturb_rng, const TrainOptions& opts,
                  const TrainObserver& observer) {
    if (train_ds.size() < 1) throw DimensionMismatch("train: empty dataset");
    if (prior.mean.size() != weight_count(arch))
        throw DimensionMismatch("train: prior dimension != weight_count(arch)");

    const Matrix train_inputs = train_ds.inputs;
    const int threads = opts.threads;
    ForwardFn train_fwd = [&arch, train_inputs, threads](const Matrix& ens) {
        return forward_ensemble(arch, ens, train_inputs, threads);
    };
    ForwardFn test_fwd;
    Vector test_targets;
    if (test_ds && test_ds->size() > 0) {
        const Matrix test_inputs = test_ds->inputs;
        test_fwd = [&arch, test_inputs, threads](const Matrix& ens) {
            return forward_ensemble(arch, ens, test_inputs, threads);
        };
        test_targets = test_ds->flat_targets();
    }
    return train_with_forward(train_fwd, train_ds.flat_targets(), noise, prior,
                              ensemble_rng, perturb_rng, opts, test_fwd, test_targets,
                              observer);
}

} // namespace enn
