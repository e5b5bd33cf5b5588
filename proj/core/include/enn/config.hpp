#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "enn/enrml.hpp"
#include "enn/network.hpp"

namespace enn {

/// Fully resolved experiment description. Parsing materializes every
/// default, so the echoed file in the output directory reruns identically.
struct RunConfig {
    enum class Kind { toy, sanity, train_csv, fixture_check };
    Kind kind = Kind::sanity;

    std::string out_dir = "enn_out";
    int threads = 1;
    bool standardize = false;

    NetworkArchitecture arch; // kind-aware default, see resolve_defaults

    // enrml hyperparameters (paper defaults)
    Index ne = 100;
    double obs_std = 0.002;
    double prior_mean = 0.0;
    double prior_std = 1.0;
    double gamma = 10.0;
    double lambda_floor = 0.005;
    double lambda_init_override = -1.0; // < 0: S_d/(2 N_d)
    Index max_iterations = 500;
    Index window = 5;
    double window_rel_tol = 1e-4;
    Index max_consecutive_rejections = 8;
    PerturbationMode perturbation = PerturbationMode::per_iteration;

    // independent randomness sources
    std::uint64_t seed_data = 1;
    std::uint64_t seed_ensemble = 2;
    std::uint64_t seed_perturb = 3;

    // toy dataset
    Index toy_n = 20;
    double x_low = -4.0;
    double x_high = 4.0;
    double noise_std = 3.0;

    // ideal dataset
    Index n_train = 70;
    Index n_test = 30;
    double input_std = 10.0;

    // csv ingestion
    std::string csv_path;
    char delimiter = ',';
    bool header = false;
    std::vector<Index> input_cols{0};
    std::vector<Index> target_cols{1};
    Index train_count = -1; // -1: all but test_count
    Index test_count = 0;

    // uncertainty outputs
    double k_sigma = 3.0;
    double grid_low = -6.0;
    double grid_high = 6.0;
    Index grid_points = 300;

    std::string fixture_dir = "fixtures/supplementary";

    TrainOptions train_options() const;
    void validate() const;
};

const char* to_string(RunConfig::Kind k);
const char* to_string(PerturbationMode m);

/// Parse the sectioned key = value format (grammar in the README). Errors
/// carry 1-based line numbers.
RunConfig parse_config_text(const std::string& text, const std::string& source_name);
RunConfig parse_config_file(const std::string& path);

/// Echo the fully resolved configuration (parseable by parse_config_*).
std::string render_config(const RunConfig& cfg);
void write_resolved_config(const std::string& path, const RunConfig& cfg);

} // namespace enn
