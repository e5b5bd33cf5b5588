#pragma once

#include <string>
#include <vector>

#include "enn/matrix.hpp"

namespace enn {

enum class Activation { relu, tanh, sigmoid, linear };

Activation activation_from_string(const std::string& name);
std::string to_string(Activation a);

/// Fully connected feed-forward architecture. layer_widths lists the hidden
/// layers followed by the output layer, so {4, 4, 10, 1} with input_dim 2 is
/// the paper-style four-layer regression network.
struct NetworkArchitecture {
    Index input_dim = 1;
    std::vector<Index> layer_widths;
    Activation hidden_activation = Activation::tanh;
    Activation output_activation = Activation::linear;

    Index output_dim() const { return layer_widths.back(); }
    void validate() const;
};

/// Total number of trainable parameters: sum over consecutive layer pairs of
/// fan_in * fan_out + fan_out (per-neuron biases included).
Index weight_count(const NetworkArchitecture& arch);

/// Canonical flat layout of a weight vector m:
/// layers ordered input to output; within a layer, each destination neuron
/// contributes its incoming weights (source index ascending) followed by its
/// bias. The supplementary worked example pins this ordering: it is the only
/// one of the natural candidates that reproduces the printed forward pass.
struct LayerSlices {
    Index fan_in;
    Index fan_out;
    Index offset; // start of this layer's block in the flat vector
};
std::vector<LayerSlices> layer_slices(const NetworkArchitecture& arch);

/// Batch forward pass: inputs is N_samples x input_dim, result is
/// N_samples x output_dim.
Matrix forward(const NetworkArchitecture& arch, const Vector& weights,
               const Matrix& inputs);

/// Per-realization forward passes. ensemble is N_m x N_e; column j of the
/// result is the sample-major flattening (all outputs of sample 1, then
/// sample 2, ...) of forward(arch, ensemble.col(j), inputs), giving an
/// N_d x N_e prediction matrix with N_d = N_samples * output_dim.
/// Columns are independent; threads > 1 evaluates them in parallel.
Matrix forward_ensemble(const NetworkArchitecture& arch, const Matrix& ensemble,
                        const Matrix& inputs, int threads = 1);

/// Sample-major flattening used by forward_ensemble.
Vector flatten_outputs(const Matrix& outputs);

} // namespace enn
