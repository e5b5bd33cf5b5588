#include "enn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "enn/errors.hpp"

namespace enn {

Vector Dataset::flat_targets() const {
    Vector flat(targets.size());
    Index p = 0;
    for (Index i = 0; i < targets.rows(); ++i)
        for (Index j = 0; j < targets.cols(); ++j) flat(p++) = targets(i, j);
    return flat;
}

Dataset gen_toy_cubic(RngStream& rng, Index n, double x_low, double x_high,
                      double noise_std) {
    if (n < 0 || x_low >= x_high)
        throw DimensionMismatch("gen_toy_cubic: need n >= 0 and x_low < x_high");
    Dataset ds;
    ds.inputs.resize(n, 1);
    ds.targets.resize(n, 1);
    for (Index i = 0; i < n; ++i) {
        const double x = x_low + (x_high - x_low) * rng.next_uniform();
        ds.inputs(i, 0) = x;
        ds.targets(i, 0) = x * x * x + noise_std * rng.next_gaussian();
    }
    ds.feature_names = {"x"};
    return ds;
}

IdealDataset gen_ideal_dataset(RngStream& rng, const NetworkArchitecture& arch,
                               Index n_train, Index n_test, double input_std) {
    arch.validate();
    IdealDataset out;
    out.true_weights = sample_standard_normal(rng, weight_count(arch), 1).col(0);

    const Index n = n_train + n_test;
    Matrix inputs = input_std * sample_standard_normal(rng, n, arch.input_dim);
    Matrix targets = forward(arch, out.true_weights, inputs);

    out.train.inputs = inputs.topRows(n_train);
    out.train.targets = targets.topRows(n_train);
    out.test.inputs = inputs.bottomRows(n_test);
    out.test.targets = targets.bottomRows(n_test);
    return out;
}

namespace {

std::vector<std::string> split_fields(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    if (delimiter == ' ') {
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) fields.push_back(tok);
        return fields;
    }
    std::string cur;
    for (char c : line) {
        if (c == delimiter) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

Dataset load_csv(const std::string& path, const std::vector<Index>& input_cols,
                 const std::vector<Index>& target_cols, bool header, char delimiter) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("cannot open '" + path + "'");
    if (input_cols.empty() || target_cols.empty())
        throw ColumnMismatch("load_csv: input and target column lists must be non-empty");

    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
    std::string line;
    long data_row = 0;
    bool header_pending = header;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split_fields(t, delimiter);
        if (header_pending) {
            for (auto& f : fields) names.push_back(trim(f));
            header_pending = false;
            continue;
        }
        std::vector<double> vals;
        vals.reserve(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const std::string cell = trim(fields[c]);
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                if (used != cell.size())
                    throw std::invalid_argument("trailing characters");
                vals.push_back(v);
            } catch (const std::exception&) {
                throw ParseError(data_row, static_cast<long>(c),
                                 "cannot parse '" + cell + "' as a number");
            }
            if (!std::isfinite(vals.back()))
                throw ParseError(data_row, static_cast<long>(c), "non-finite value");
        }
        rows.push_back(std::move(vals));
        ++data_row;
    }
    if (rows.empty()) throw ColumnMismatch("load_csv: no data rows in '" + path + "'");

    const Index ncols = static_cast<Index>(rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (static_cast<Index>(rows[r].size()) != ncols)
            throw ParseError(static_cast<long>(r), static_cast<long>(rows[r].size()),
                             "row has " + std::to_string(rows[r].size()) +
                                 " fields, expected " + std::to_string(ncols));
    for (Index c : input_cols)
        if (c < 0 || c >= ncols)
            throw ColumnMismatch("load_csv: input column " + std::to_string(c) +
                                 " out of range (file has " + std::to_string(ncols) +
                                 " columns)");
    for (Index c : target_cols)
        if (c < 0 || c >= ncols)
            throw ColumnMismatch("load_csv: target column " + std::to_string(c) +
                                 " out of range");

    Dataset ds;
    const Index n = static_cast<Index>(rows.size());
    ds.inputs.resize(n, static_cast<Index>(input_cols.size()));
    ds.targets.resize(n, static_cast<Index>(target_cols.size()));
    for (Index r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < input_cols.size(); ++c)
            ds.inputs(r, static_cast<Index>(c)) = rows[r][input_cols[c]];
        for (std::size_t c = 0; c < target_cols.size(); ++c)
            ds.targets(r, static_cast<Index>(c)) = rows[r][target_cols[c]];
    }
    if (!names.empty()) {
        for (Index c : input_cols)
            if (c < static_cast<Index>(names.size())) ds.feature_names.push_back(names[c]);
    }
    return ds;
}

namespace {

void column_stats(const Matrix& m, Vector& mean, Vector& stdev, std::vector<bool>& flags) {
    mean = m.colwise().mean();
    stdev.resize(m.cols());
    flags.assign(m.cols(), false);
    for (Index c = 0; c < m.cols(); ++c) {
        const double var = (m.col(c).array() - mean(c)).square().mean();
        const double s = std::sqrt(var);
        if (s == 0.0) {
            stdev(c) = 1.0; // constant column passes through
            flags[c] = true;
        } else {
            stdev(c) = s;
        }
    }
}

Matrix zscore(const Matrix& m, const Vector& mean, const Vector& stdev) {
    Matrix out = m;
    for (Index c = 0; c < m.cols(); ++c)
        out.col(c) = (m.col(c).array() - mean(c)) / stdev(c);
    return out;
}

} // namespace

Dataset standardize(const Dataset& ds) {
    Standardization st;
    column_stats(ds.inputs, st.input_mean, st.input_std, st.constant_input_cols);
    column_stats(ds.targets, st.target_mean, st.target_std, st.constant_target_cols);

    Dataset out;
    out.inputs = zscore(ds.inputs, st.input_mean, st.input_std);
    out.targets = zscore(ds.targets, st.target_mean, st.target_std);
    out.feature_names = ds.feature_names;
    out.standardization = std::move(st);
    return out;
}

Dataset destandardize(const Dataset& ds) {
    if (!ds.standardization)
        throw DimensionMismatch("destandardize: dataset carries no standardization");
    const auto& st = *ds.standardization;
    Dataset out;
    out.inputs = ds.inputs;
    out.targets = ds.targets;
    for (Index c = 0; c < out.inputs.cols(); ++c)
        out.inputs.col(c) = out.inputs.col(c).array() * st.input_std(c) + st.input_mean(c);
    for (Index c = 0; c < out.targets.cols(); ++c)
        out.targets.col(c) =
            out.targets.col(c).array() * st.target_std(c) + st.target_mean(c);
    out.feature_names = ds.feature_names;
    return out;
}

Matrix apply_input_standardization(const Standardization& st, const Matrix& raw_inputs) {
    return zscore(raw_inputs, st.input_mean, st.input_std);
}

Matrix invert_target_standardization(const Standardization& st, const Matrix& std_targets) {
    Matrix out = std_targets;
    for (Index c = 0; c < out.cols(); ++c)
        out.col(c) = out.col(c).array() * st.target_std(c) + st.target_mean(c);
    return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
    if (spec.train_count < 0 || spec.test_count < 0 ||
        spec.train_count + spec.test_count > ds.size())
        throw DimensionMismatch("split: train_count + test_count exceeds dataset size");

    std::vector<Index> idx(ds.size());
    std::iota(idx.begin(), idx.end(), Index{0});
    RngStream rng(spec.shuffle_seed);
    // Fisher-Yates driven by the documented stream, so splits are stable.
    for (Index i = ds.size() - 1; i > 0; --i) {
        const Index j = static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
        std::swap(idx[i], idx[j]);
    }

    auto take = [&](Index begin, Index count) {
        Dataset out;
        out.inputs.resize(count, ds.input_dim());
        out.targets.resize(count, ds.output_dim());
        for (Index r = 0; r < count; ++r) {
            out.inputs.row(r) = ds.inputs.row(idx[begin + r]);
            out.targets.row(r) = ds.targets.row(idx[begin + r]);
        }
        out.feature_names = ds.feature_names;
        return out;
    };
    return {take(0, spec.train_count), take(spec.train_count, spec.test_count)};
}

double loss_mae(const Matrix& pred_mean, const Matrix& targets) {
    if (pred_mean.rows() != targets.rows() || pred_mean.cols() != targets.cols())
        throw DimensionMismatch("loss_mae: shape mismatch");
    return (pred_mean - targets).cwiseAbs().sum() / static_cast<double>(targets.size());
}

} // namespace enn
