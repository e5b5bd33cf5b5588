#pragma once

#include <functional>
#include <vector>

#include "enn/dataset.hpp"
#include "enn/ensemble.hpp"
#include "enn/matrix.hpp"
#include "enn/network.hpp"
#include "enn/rng.hpp"

namespace enn {

/// Diagonal observation-noise model: C_D = diag(obs_std^2).
struct NoiseModel {
    Vector obs_std; // length N_d, all entries > 0

    static NoiseModel uniform(Index n_d, double std_dev);
    Vector variance_diag() const { return obs_std.array().square(); }
    void validate() const;
};

/// Diagonal prior on the weights: C_M = diag(cov_diag), mean m_pr.
struct PriorModel {
    Vector mean;     // length N_m
    Vector cov_diag; // length N_m, all entries > 0

    static PriorModel standard_normal(Index n_m);
    void validate() const;
};

/// Levenberg-Marquardt style damping state. lambda never drops below floor.
struct LambdaController {
    double lambda = 0.0;
    double gamma = 10.0;
    double floor = 0.005;
};

enum class LambdaDecision { accept_shrink, accept_hold, reject_grow };

struct LambdaUpdate {
    LambdaDecision decision;
    double lambda;
};

/// One committed training iteration (or, through the observer, one attempt).
struct IterationRecord {
    Index iteration = 0;
    double lambda = 0.0;  // damping used to produce this proposal
    double sd_mean = 0.0; // ensemble mean of S_d for the proposal
    double sd_std = 0.0;
    double train_loss = 0.0;
    double test_loss = 0.0; // NaN when no test set is given
    bool accepted = false;
};

struct StoppingRule {
    Index max_iterations = 500;
    Index window = 5;            // accepted iterations in the convergence window
    double window_rel_tol = 1e-4;
    Index max_consecutive_rejections = 8;
};

struct EnrmlState {
    Index iteration = 0;
    LambdaController lambda_controller;
    double sd_mean = 0.0;
    double sd_std = 0.0;
    Index accepted_count = 0;
    Index rejected_count = 0;
    std::vector<IterationRecord> loss_history; // accepted iterations only
};

enum class TrainStatus { converged, max_iterations, repeated_rejection };

const char* to_string(TrainStatus s);

enum class PerturbationMode { per_iteration, fixed };

/// Data mismatch S_d = (pred - d_obs)^T C_D^{-1} (pred - d_obs).
double data_mismatch(const Vector& pred, const Vector& d_obs, const NoiseModel& noise);

/// Per-realization S_d over a prediction matrix, against the unperturbed
/// observations.
Vector data_mismatch_ensemble(const Matrix& preds, const Vector& d_obs,
                              const NoiseModel& noise);

/// The full objective: half model mismatch plus half data mismatch.
double objective(const Vector& m, const Vector& m_pr, const Vector& pred,
                 const Vector& d_obs, const PriorModel& prior, const NoiseModel& noise);

/// N_d x N_e matrix whose column j is an independent draw from
/// N(d_obs, diag(obs_std^2)).
Matrix perturb_observations(const Vector& d_obs, const NoiseModel& noise,
                            RngStream& rng, Index n_e);

/// One damped ensemble update. Every realization is moved by
///   m_j <- m_j - 1/(1+lambda) [C_Ml - C_md A^{-1} C_md^T] C_M^{-1} (m_j - m_pr,j)
///              - C_md A^{-1} (g(m_j) - d_obs,j)
/// with A = (1+lambda) C_D + C_Dl factored once and reused. C_Ml comes from
/// cov.c_m when materialized, otherwise from anomaly products so no
/// N_m x N_m matrix is ever formed. The input ensemble is not modified.
Matrix enrml_step(const WeightEnsemble& ensemble, const Matrix& preds,
                  const Matrix& d_obs_pert, const CovarianceSet& cov,
                  const PriorModel& prior, const NoiseModel& noise, double lambda);

/// Starting damping: S_d(m_0)/(2 N_d), floored.
double lambda_init(double sd_mean_initial, Index n_d, double floor = 0.005);

/// Appendix-B style accept/reject on the ensemble S_d statistics:
/// mean and std both reduced -> accept and shrink lambda by gamma (floored);
/// mean reduced, std not -> accept, lambda unchanged;
/// mean increased -> reject, lambda grows by gamma.
LambdaUpdate lambda_update(const LambdaController& ctrl, double old_mean, double old_std,
                           double new_mean, double new_std);

/// Black-box forward map: ensemble (N_m x N_e) to predictions (N_d x N_e).
/// The training loop touches the model only through this; there is no
/// derivative channel.
using ForwardFn = std::function<Matrix(const Matrix&)>;

struct TrainObserver {
    std::function<void(const IterationRecord&)> on_record;          // every attempt
    std::function<void(Index, const Matrix&)> on_accepted_ensemble; // committed states
};

struct TrainOptions {
    Index n_e = 100;
    StoppingRule stopping;
    PerturbationMode perturbation = PerturbationMode::per_iteration;
    double lambda_gamma = 10.0;
    double lambda_floor = 0.005;
    double lambda_init_override = -1.0; // < 0: use lambda_init()
    Index cm_materialize_threshold = 2000;
    int threads = 1;
};

struct TrainResult {
    WeightEnsemble ensemble;
    EnrmlState state;
    TrainStatus status = TrainStatus::max_iterations;
};

/// Generic training loop over an arbitrary forward map. test_forward and
/// test_targets are optional (test_loss is NaN without them).
TrainResult train_with_forward(const ForwardFn& train_forward, const Vector& train_targets,
                               const NoiseModel& noise, const PriorModel& prior,
                               RngStream& ensemble_rng, RngStream& perturb_rng,
                               const TrainOptions& opts,
                               const ForwardFn& test_forward = nullptr,
                               const Vector& test_targets = Vector(),
                               const TrainObserver& observer = {});

/// Network training: wires forward_ensemble over the datasets into the
/// generic loop.
TrainResult train(const NetworkArchitecture& arch, const Dataset& train_ds,
                  const Dataset* test_ds, const NoiseModel& noise, const PriorModel& prior,
                  RngStream& ensemble_rng, RngStream& perturb_rng, const TrainOptions& opts,
                  const TrainObserver& observer = {});

} // namespace enn
