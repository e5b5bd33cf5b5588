#pragma once

#include <map>
#include <string>
#include <vector>

#include "enn/config.hpp"
#include "enn/enrml.hpp"

namespace enn {

/// One fixture artifact comparison from the replay of the supplementary
/// worked example.
struct FixtureDeviation {
    std::string artifact;
    double deviation = 0.0; // max |impl - fixture| (relative when relative=true)
    double tolerance = 0.0;
    bool relative = false;
    bool ok = false;
};

struct RunReport {
    RunConfig::Kind kind = RunConfig::Kind::sanity;
    TrainStatus status = TrainStatus::max_iterations;
    double wall_seconds = 0.0;
    Index accepted_count = 0;
    Index rejected_count = 0;
    double final_train_mae = 0.0;
    double final_test_mae = 0.0;
    Index weight_count = 0;
    Index n_d = 0;
    std::vector<IterationRecord> history; // every attempt, accepted flag set
    std::vector<std::string> manifest;    // files written, relative to out_dir
    bool fixture_ok = true;
    std::vector<FixtureDeviation> deviations;
};

/// The hand-worked example transcribed from the paper's supplementary
/// material (three iterations of the 1-5-1 network on y = 2x + 1).
struct SupplementaryFixtures {
    Matrix m1, g1_train, g1_test, d1_obs, c_md1, c_d1, c_m1;
    Matrix m2, g2_train, g2_test, d2_obs, c_md2, c_d2, c_m2;
    Matrix m3;
    Vector x_train, t_train, x_test, t_test;
    std::map<std::string, double> scalars;

    double scalar(const std::string& name) const;
};

SupplementaryFixtures load_supplementary_fixtures(const std::string& dir);

/// Re-runs the activation/layout enumeration that pinned the supplementary
/// network: returns the activation whose forward pass of m1 reproduces the
/// printed g(m1) within tol, or throws LayoutUnresolved.
Activation resolve_supplementary_activation(const SupplementaryFixtures& fx,
                                            double tol = 5e-3);

RunReport cmd_toy(const RunConfig& cfg);
RunReport cmd_sanity(const RunConfig& cfg);
RunReport cmd_train_csv(const RunConfig& cfg);
RunReport cmd_fixture_check(const RunConfig& cfg);

/// Dispatch on cfg.kind.
RunReport run_experiment(const RunConfig& cfg);

} // namespace enn
