#include "enn/network.hpp"

#include <cmath>
#include <thread>

#include "enn/errors.hpp"

namespace enn {

Activation activation_from_string(const std::string& name) {
    if (name == "relu") return Activation::relu;
    if (name == "tanh") return Activation::tanh;
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "linear") return Activation::linear;
    throw ConfigError("unknown activation '" + name + "'");
}

std::string to_string(Activation a) {
    switch (a) {
        case Activation::relu: return "relu";
        case Activation::tanh: return "tanh";
        case Activation::sigmoid: return "sigmoid";
        case Activation::linear: return "linear";
    }
    return "?";
}

void NetworkArchitecture::validate() const {
    if (input_dim < 1)
        throw DimensionMismatch("architecture: input_dim must be >= 1");
    if (layer_widths.empty())
        throw DimensionMismatch("architecture: at least one layer required");
    for (Index w : layer_widths)
        if (w < 1) throw DimensionMismatch("architecture: all widths must be >= 1");
}

Index weight_count(const NetworkArchitecture& arch) {
    arch.validate();
    Index total = 0;
    Index fan_in = arch.input_dim;
    for (Index width : arch.layer_widths) {
        total += fan_in * width + width;
        fan_in = width;
    }
    return total;
}

std::vector<LayerSlices> layer_slices(const NetworkArchitecture& arch) {
    std::vector<LayerSlices> slices;
    slices.reserve(arch.layer_widths.size());
    Index fan_in = arch.input_dim;
    Index offset = 0;
    for (Index width : arch.layer_widths) {
        slices.push_back({fan_in, width, offset});
        offset += fan_in * width + width;
        fan_in = width;
    }
    return slices;
}

namespace {

inline void apply_activation(Matrix& z, Activation act) {
    switch (act) {
        case Activation::relu:
            z = z.array().max(0.0).matrix();
            break;
        case Activation::tanh:
            z = z.array().tanh().matrix();
            break;
        case Activation::sigmoid:
            z = (1.0 / (1.0 + (-z.array()).exp())).matrix();
            break;
        case Activation::linear:
            break;
    }
}

} // namespace

Matrix forward(const NetworkArchitecture& arch, const Vector& weights,
               const Matrix& inputs) {
    arch.validate();
    if (inputs.cols() != arch.input_dim)
        throw DimensionMismatch("forward: inputs have " + std::to_string(inputs.cols()) +
                                " columns, architecture expects " +
                                std::to_string(arch.input_dim));
    if (weights.size() != weight_count(arch))
        throw DimensionMismatch("forward: weight vector length " +
                                std::to_string(weights.size()) + " != weight_count " +
                                std::to_string(weight_count(arch)));

    const auto slices = layer_slices(arch);
    Matrix a = inputs.transpose(); // fan_in x N
    for (std::size_t l = 0; l < slices.size(); ++l) {
        const auto& s = slices[l];
        Matrix w(s.fan_out, s.fan_in);
        Vector b(s.fan_out);
        Index p = s.offset;
        for (Index n = 0; n < s.fan_out; ++n) {
            for (Index i = 0; i < s.fan_in; ++i) w(n, i) = weights(p++);
            b(n) = weights(p++);
        }
        Matrix z = w * a;
        z.colwise() += b;
        apply_activation(z, l + 1 == slices.size() ? arch.output_activation
                                                   : arch.hidden_activation);
        a = std::move(z);
    }
    return a.transpose();
}

Vector flatten_outputs(const Matrix& outputs) {
    Vector flat(outputs.size());
    Index p = 0;
    for (Index i = 0; i < outputs.rows(); ++i)
        for (Index j = 0; j < outputs.cols(); ++j) flat(p++) = outputs(i, j);
    return flat;
}

Matrix forward_ensemble(const NetworkArchitecture& arch, const Matrix& ensemble,
                        const Matrix& inputs, int threads) {
    if (ensemble.rows() != weight_count(arch))
        throw DimensionMismatch("forward_ensemble: ensemble rows != weight_count");

    const Index ne = ensemble.cols();
    const Index nd = inputs.rows() * arch.output_dim();
    Matrix preds(nd, ne);

    auto run = [&](Index j0, Index j1) {
        for (Index j = j0; j < j1; ++j)
            preds.col(j) = flatten_outputs(forward(arch, ensemble.col(j), inputs));
    };

    if (threads <= 1 || ne < 2) {
        run(0, ne);
        return preds;
    }

    const int workers = static_cast<int>(std::min<Index>(threads, ne));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const Index chunk = (ne + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
        const Index j0 = t * chunk;
        const Index j1 = std::min(ne, j0 + chunk);
        if (j0 >= j1) break;
        pool.emplace_back(run, j0, j1);
    }
    for (auto& th : pool) th.join();
    return preds;
}

} // namespace enn
