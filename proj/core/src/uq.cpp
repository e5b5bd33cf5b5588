#include "enn/uq.hpp"

#include <cmath>

#include "enn/errors.hpp"

namespace enn {

PredictionBand predict_band(const NetworkArchitecture& arch, const WeightEnsemble& ensemble,
                            const Matrix& query_inputs, double k_sigma,
                            const Standardization* st, int threads) {
    if (k_sigma < 0.0) throw DimensionMismatch("predict_band: k_sigma must be >= 0");

    const Matrix net_inputs =
        st ? apply_input_standardization(*st, query_inputs) : query_inputs;
    const Matrix preds = forward_ensemble(arch, ensemble.current, net_inputs, threads);

    const Index q = query_inputs.rows();
    const Index out_dim = arch.output_dim();
    const Index n_e = ensemble.realization_count();

    PredictionBand band;
    band.query_inputs = query_inputs;
    band.k_sigma = k_sigma;
    band.mean.resize(q, out_dim);
    band.std.resize(q, out_dim);

    // preds rows are sample-major: row q*out_dim + c.
    for (Index i = 0; i < q; ++i) {
        for (Index c = 0; c < out_dim; ++c) {
            const auto row = preds.row(i * out_dim + c);
            const double mu = row.mean();
            const double var =
                (row.array() - mu).square().sum() / static_cast<double>(n_e - 1);
            band.mean(i, c) = mu;
            band.std(i, c) = std::sqrt(var);
        }
    }

    if (st) {
        band.mean = invert_target_standardization(*st, band.mean);
        for (Index c = 0; c < out_dim; ++c)
            band.std.col(c) *= st->target_std(c);
    }

    band.band_low = band.mean - k_sigma * band.std;
    band.band_high = band.mean + k_sigma * band.std;
    return band;
}

void weight_trace_step(WeightTrace& trace, const Matrix& ensemble) {
    if (!trace.means.empty() && trace.means.front().size() != ensemble.rows())
        throw DimensionMismatch("weight_trace_step: N_m changed between steps");
    const Vector mu = ensemble.rowwise().mean();
    Vector sd(ensemble.rows());
    const double divisor = static_cast<double>(ensemble.cols() - 1);
    for (Index i = 0; i < ensemble.rows(); ++i)
        sd(i) = std::sqrt((ensemble.row(i).array() - mu(i)).square().sum() / divisor);
    trace.means.push_back(mu);
    trace.stds.push_back(std::move(sd));
}

double coverage_check(const PredictionBand& band, const Matrix& truth) {
    if (truth.rows() != band.mean.rows() || truth.cols() != band.mean.cols())
        throw DimensionMismatch("coverage_check: truth shape mismatch");
    Index inside = 0;
    for (Index i = 0; i < truth.rows(); ++i) {
        bool ok = true;
        for (Index c = 0; c < truth.cols(); ++c)
            ok = ok && truth(i, c) >= band.band_low(i, c) &&
                 truth(i, c) <= band.band_high(i, c);
        inside += ok ? 1 : 0;
    }
    return static_cast<double>(inside) / static_cast<double>(truth.rows());
}

} // namespace enn
