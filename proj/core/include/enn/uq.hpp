#pragma once

#include <vector>

#include "enn/dataset.hpp"
#include "enn/ensemble.hpp"
#include "enn/matrix.hpp"
#include "enn/network.hpp"

namespace enn {

/// Predictive band from the realization spread: mean and per-point sample
/// std (divisor N_e - 1) across realizations, band = mean -/+ k_sigma * std.
/// Parameter uncertainty only; observation noise is not added.
struct PredictionBand {
    Matrix query_inputs; // Q x input_dim (raw space)
    Matrix mean;         // Q x output_dim
    Matrix std;          // Q x output_dim
    Matrix band_low;
    Matrix band_high;
    double k_sigma = 3.0;
};

/// Evaluate each realization at query_inputs and reduce to band statistics.
/// When st is given, query inputs are standardized before the forward pass
/// and predictions are mapped back to raw target space.
PredictionBand predict_band(const NetworkArchitecture& arch, const WeightEnsemble& ensemble,
                            const Matrix& query_inputs, double k_sigma = 3.0,
                            const Standardization* st = nullptr, int threads = 1);

/// Per-weight ensemble mean and std over accepted iterations.
struct WeightTrace {
    std::vector<Vector> means;
    std::vector<Vector> stds;

    std::size_t steps() const { return means.size(); }
};

void weight_trace_step(WeightTrace& trace, const Matrix& ensemble);

/// Fraction of query points whose truth lies inside [band_low, band_high].
double coverage_check(const PredictionBand& band, const Matrix& truth);

} // namespace enn
