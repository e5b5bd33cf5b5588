#pragma once

#include <optional>
#include <string>
#include <vector>

#include "enn/matrix.hpp"
#include "enn/network.hpp"
#include "enn/rng.hpp"

namespace enn {

/// Per-column z-score parameters. Population std (divisor N); columns whose
/// std is zero pass through with std treated as 1 and are flagged.
struct Standardization {
    Vector input_mean, input_std;
    Vector target_mean, target_std;
    std::vector<bool> constant_input_cols;
    std::vector<bool> constant_target_cols;
};

struct Dataset {
    Matrix inputs;  // N x input_dim
    Matrix targets; // N x output_dim
    std::vector<std::string> feature_names;
    std::optional<Standardization> standardization;

    Index size() const { return inputs.rows(); }
    Index input_dim() const { return inputs.cols(); }
    Index output_dim() const { return targets.cols(); }

    /// Sample-major flattening of targets (the observation vector d_obs).
    Vector flat_targets() const;
};

struct SplitSpec {
    Index train_count = 0;
    Index test_count = 0;
    std::uint64_t shuffle_seed = 0;
};

/// y = x^3 + eps with x uniform on (x_low, x_high) and eps ~ N(0, noise_std^2).
/// The paper's toy setup uses noise_std = 3 (variance 9).
Dataset gen_toy_cubic(RngStream& rng, Index n, double x_low = -4.0, double x_high = 4.0,
                      double noise_std = 3.0);

struct IdealDataset {
    Dataset train;
    Dataset test;
    Vector true_weights;
};

/// Inputs ~ N(0, input_std^2), true weights ~ N(0,1), targets produced by the
/// network itself, split n_train/n_test in draw order.
IdealDataset gen_ideal_dataset(RngStream& rng, const NetworkArchitecture& arch,
                               Index n_train = 70, Index n_test = 30,
                               double input_std = 10.0);

/// Numeric table ingestion. Comma (or custom) delimited, '.' decimals,
/// '#' comment lines skipped, optional single header row supplying column
/// names. delimiter ' ' means any run of blanks. Throws FileNotFound,
/// ParseError(row, col) or ColumnMismatch.
Dataset load_csv(const std::string& path, const std::vector<Index>& input_cols,
                 const std::vector<Index>& target_cols, bool header = false,
                 char delimiter = ',');

/// Per-column z-score of inputs and targets; the inverse parameters are
/// stored on the returned dataset.
Dataset standardize(const Dataset& ds);

/// Undo standardize() using the stored parameters.
Dataset destandardize(const Dataset& ds);

Matrix apply_input_standardization(const Standardization& st, const Matrix& raw_inputs);
Matrix invert_target_standardization(const Standardization& st, const Matrix& std_targets);

/// Disjoint reproducible train/test split (shuffled by spec.shuffle_seed).
std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

/// Mean absolute error, summed over all scalar entries and divided by their
/// count (N * k for a multi-output target).
double loss_mae(const Matrix& pred_mean, const Matrix& targets);

} // namespace enn
