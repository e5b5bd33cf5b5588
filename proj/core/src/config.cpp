#include "enn/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "enn/csv_io.hpp"
#include "enn/errors.hpp"

namespace enn {

TrainOptions RunConfig::train_options() const {
    TrainOptions opts;
    opts.n_e = ne;
    opts.stopping.max_iterations = max_iterations;
    opts.stopping.window = window;
    opts.stopping.window_rel_tol = window_rel_tol;
    opts.stopping.max_consecutive_rejections = max_consecutive_rejections;
    opts.perturbation = perturbation;
    opts.lambda_gamma = gamma;
    opts.lambda_floor = lambda_floor;
    opts.lambda_init_override = lambda_init_override;
    opts.threads = threads;
    return opts;
}

void RunConfig::validate() const {
    if (ne < 2) throw ConfigError("ne must be >= 2");
    if (obs_std <= 0) throw ConfigError("obs_std must be > 0");
    if (prior_std <= 0) throw ConfigError("prior_std must be > 0");
    if (gamma <= 1) throw ConfigError("gamma must be > 1");
    if (lambda_floor <= 0) throw ConfigError("lambda_floor must be > 0");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (kind == Kind::toy && toy_n < 0) throw ConfigError("n must be >= 0");
    if (kind == Kind::toy && x_low >= x_high) throw ConfigError("need x_low < x_high");
    arch.validate();
}

const char* to_string(RunConfig::Kind k) {
    switch (k) {
        case RunConfig::Kind::toy: return "toy";
        case RunConfig::Kind::sanity: return "sanity";
        case RunConfig::Kind::train_csv: return "train_csv";
        case RunConfig::Kind::fixture_check: return "fixture_check";
    }
    return "?";
}

const char* to_string(PerturbationMode m) {
    return m == PerturbationMode::per_iteration ? "per_iteration" : "fixed";
}

namespace {

struct RawEntry {
    std::string value;
    int line;
};

using Section = std::map<std::string, RawEntry>;
using Tree = std::map<std::string, Section>;

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

Tree parse_tree(const std::string& text, const std::string& source) {
    Tree tree;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') fail(source, lineno, "unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) fail(source, lineno, "empty section name");
            tree[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            fail(source, lineno, "expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) fail(source, lineno, "empty key");
        if (section.empty()) fail(source, lineno, "key outside any [section]");
        tree[section][key] = {value, lineno};
    }
    return tree;
}

class Reader {
public:
    Reader(Tree tree, std::string source) : tree_(std::move(tree)), source_(std::move(source)) {}

    bool has(const std::string& sec, const std::string& key) const {
        auto s = tree_.find(sec);
        return s != tree_.end() && s->second.count(key) > 0;
    }

    std::string str(const std::string& sec, const std::string& key,
                    const std::string& fallback) {
        if (!has(sec, key)) return fallback;
        return take(sec, key).value;
    }

    double num(const std::string& sec, const std::string& key, double fallback) {
        if (!has(sec, key)) return fallback;
        const RawEntry e = take(sec, key);
        try {
            std::size_t used = 0;
            const double v = std::stod(e.value, &used);
            if (used != e.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            fail(source_, e.line, "'" + e.value + "' is not a number");
        }
    }

    Index integer(const std::string& sec, const std::string& key, Index fallback) {
        if (!has(sec, key)) return fallback;
        const RawEntry e = take(sec, key);
        try {
            std::size_t used = 0;
            const long long v = std::stoll(e.value, &used);
            if (used != e.value.size()) throw std::invalid_argument("");
            return static_cast<Index>(v);
        } catch (const std::exception&) {
            fail(source_, e.line, "'" + e.value + "' is not an integer");
        }
    }

    std::uint64_t uinteger(const std::string& sec, const std::string& key,
                           std::uint64_t fallback) {
        if (!has(sec, key)) return fallback;
        const RawEntry e = take(sec, key);
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(e.value, &used);
            if (used != e.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            fail(source_, e.line, "'" + e.value + "' is not a non-negative integer");
        }
    }

    bool boolean(const std::string& sec, const std::string& key, bool fallback) {
        if (!has(sec, key)) return fallback;
        const RawEntry e = take(sec, key);
        if (e.value == "true" || e.value == "on" || e.value == "1") return true;
        if (e.value == "false" || e.value == "off" || e.value == "0") return false;
        fail(source_, e.line, "'" + e.value + "' is not a boolean (true/false)");
    }

    std::vector<Index> index_list(const std::string& sec, const std::string& key,
                                  std::vector<Index> fallback) {
        if (!has(sec, key)) return fallback;
        const RawEntry e = take(sec, key);
        std::vector<Index> out;
        std::stringstream ss(e.value);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            try {
                std::size_t used = 0;
                out.push_back(static_cast<Index>(std::stoll(tok, &used)));
                if (used != tok.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                fail(source_, e.line, "'" + tok + "' is not an integer");
            }
        }
        if (out.empty()) fail(source_, e.line, "empty list");
        return out;
    }

    /// Error out on any key never consumed (catches typos with its line).
    void check_consumed() const {
        for (const auto& [sec, entries] : tree_)
            for (const auto& [key, e] : entries)
                if (!consumed_.count(sec + "/" + key))
                    fail(source_, e.line, "unknown key '" + key + "' in [" + sec + "]");
    }

    const std::string& source() const { return source_; }

    RawEntry take(const std::string& sec, const std::string& key) {
        consumed_.insert(sec + "/" + key);
        return tree_.at(sec).at(key);
    }

private:
    Tree tree_;
    std::string source_;
    std::set<std::string> consumed_;
};

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& source_name) {
    Reader r(parse_tree(text, source_name), source_name);
    RunConfig cfg;

    const std::string kind = r.str("run", "kind", "");
    if (kind.empty())
        throw ConfigError(source_name + ": missing required key 'kind' in [run]");
    if (kind == "toy") cfg.kind = RunConfig::Kind::toy;
    else if (kind == "sanity") cfg.kind = RunConfig::Kind::sanity;
    else if (kind == "train_csv") cfg.kind = RunConfig::Kind::train_csv;
    else if (kind == "fixture_check") cfg.kind = RunConfig::Kind::fixture_check;
    else throw ConfigError(source_name + ": unknown kind '" + kind +
                           "' (toy | sanity | train_csv | fixture_check)");

    // Kind-aware architecture defaults: the toy experiment uses the 1-100-1
    // relu network, everything else the 2-(4,4,10,1) reference network.
    if (cfg.kind == RunConfig::Kind::toy) {
        cfg.arch.input_dim = 1;
        cfg.arch.layer_widths = {100, 1};
        cfg.arch.hidden_activation = Activation::relu;
    } else {
        cfg.arch.input_dim = 2;
        cfg.arch.layer_widths = {4, 4, 10, 1};
        cfg.arch.hidden_activation = Activation::tanh;
    }

    cfg.out_dir = r.str("run", "out_dir", cfg.out_dir);
    cfg.threads = static_cast<int>(r.integer("run", "threads", cfg.threads));
    cfg.standardize = r.boolean("run", "standardize", cfg.standardize);

    cfg.arch.input_dim = r.integer("network", "input_dim", cfg.arch.input_dim);
    cfg.arch.layer_widths =
        r.index_list("network", "layer_widths",
                     std::vector<Index>(cfg.arch.layer_widths.begin(),
                                        cfg.arch.layer_widths.end()));
    cfg.arch.hidden_activation = activation_from_string(
        r.str("network", "hidden_activation", to_string(cfg.arch.hidden_activation)));
    cfg.arch.output_activation = activation_from_string(
        r.str("network", "output_activation", to_string(cfg.arch.output_activation)));

    cfg.ne = r.integer("enrml", "ne", cfg.ne);
    cfg.obs_std = r.num("enrml", "obs_std", cfg.obs_std);
    cfg.prior_mean = r.num("enrml", "prior_mean", cfg.prior_mean);
    cfg.prior_std = r.num("enrml", "prior_std", cfg.prior_std);
    cfg.gamma = r.num("enrml", "gamma", cfg.gamma);
    cfg.lambda_floor = r.num("enrml", "lambda_floor", cfg.lambda_floor);
    const std::string li = r.str("enrml", "lambda_init", "auto");
    if (li != "auto") {
        try {
            cfg.lambda_init_override = std::stod(li);
        } catch (const std::exception&) {
            throw ConfigError(source_name + ": lambda_init must be 'auto' or a number");
        }
    }
    cfg.max_iterations = r.integer("enrml", "max_iterations", cfg.max_iterations);
    cfg.window = r.integer("enrml", "window", cfg.window);
    cfg.window_rel_tol = r.num("enrml", "window_rel_tol", cfg.window_rel_tol);
    cfg.max_consecutive_rejections =
        r.integer("enrml", "max_consecutive_rejections", cfg.max_consecutive_rejections);
    const std::string pm =
        r.str("enrml", "perturbation", to_string(cfg.perturbation));
    if (pm == "per_iteration") cfg.perturbation = PerturbationMode::per_iteration;
    else if (pm == "fixed") cfg.perturbation = PerturbationMode::fixed;
    else throw ConfigError(source_name + ": perturbation must be per_iteration or fixed");

    cfg.seed_data = r.uinteger("seeds", "data", cfg.seed_data);
    cfg.seed_ensemble = r.uinteger("seeds", "ensemble", cfg.seed_ensemble);
    cfg.seed_perturb = r.uinteger("seeds", "perturb", cfg.seed_perturb);

    cfg.toy_n = r.integer("data", "n", cfg.toy_n);
    cfg.x_low = r.num("data", "x_low", cfg.x_low);
    cfg.x_high = r.num("data", "x_high", cfg.x_high);
    cfg.noise_std = r.num("data", "noise_std", cfg.noise_std);
    cfg.n_train = r.integer("data", "n_train", cfg.n_train);
    cfg.n_test = r.integer("data", "n_test", cfg.n_test);
    cfg.input_std = r.num("data", "input_std", cfg.input_std);
    cfg.csv_path = r.str("data", "path", cfg.csv_path);
    const std::string delim = r.str("data", "delimiter", std::string(1, cfg.delimiter));
    if (delim == "space" || delim == "whitespace") cfg.delimiter = ' ';
    else if (delim.size() == 1) cfg.delimiter = delim[0];
    else throw ConfigError(source_name + ": delimiter must be one character or 'space'");
    cfg.header = r.boolean("data", "header", cfg.header);
    cfg.input_cols = r.index_list("data", "input_cols", cfg.input_cols);
    cfg.target_cols = r.index_list("data", "target_cols", cfg.target_cols);
    cfg.train_count = r.integer("data", "train_count", cfg.train_count);
    cfg.test_count = r.integer("data", "test_count", cfg.test_count);

    cfg.k_sigma = r.num("uq", "k_sigma", cfg.k_sigma);
    cfg.grid_low = r.num("uq", "grid_low", cfg.grid_low);
    cfg.grid_high = r.num("uq", "grid_high", cfg.grid_high);
    cfg.grid_points = r.integer("uq", "grid_points", cfg.grid_points);

    cfg.fixture_dir = r.str("fixture", "dir", cfg.fixture_dir);

    r.check_consumed();
    cfg.validate();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::string render_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[run]\n";
    out << "kind = " << to_string(cfg.kind) << "\n";
    out << "out_dir = " << cfg.out_dir << "\n";
    out << "threads = " << cfg.threads << "\n";
    out << "standardize = " << (cfg.standardize ? "true" : "false") << "\n\n";

    out << "[network]\n";
    out << "input_dim = " << cfg.arch.input_dim << "\n";
    out << "layer_widths = ";
    for (std::size_t i = 0; i < cfg.arch.layer_widths.size(); ++i)
        out << (i ? "," : "") << cfg.arch.layer_widths[i];
    out << "\n";
    out << "hidden_activation = " << to_string(cfg.arch.hidden_activation) << "\n";
    out << "output_activation = " << to_string(cfg.arch.output_activation) << "\n\n";

    out << "[enrml]\n";
    out << "ne = " << cfg.ne << "\n";
    out << "obs_std = " << format_double(cfg.obs_std) << "\n";
    out << "prior_mean = " << format_double(cfg.prior_mean) << "\n";
    out << "prior_std = " << format_double(cfg.prior_std) << "\n";
    out << "gamma = " << format_double(cfg.gamma) << "\n";
    out << "lambda_floor = " << format_double(cfg.lambda_floor) << "\n";
    out << "lambda_init = "
        << (cfg.lambda_init_override > 0 ? format_double(cfg.lambda_init_override)
                                         : std::string("auto"))
        << "\n";
    out << "max_iterations = " << cfg.max_iterations << "\n";
    out << "window = " << cfg.window << "\n";
    out << "window_rel_tol = " << format_double(cfg.window_rel_tol) << "\n";
    out << "max_consecutive_rejections = " << cfg.max_consecutive_rejections << "\n";
    out << "perturbation = " << to_string(cfg.perturbation) << "\n\n";

    out << "[seeds]\n";
    out << "data = " << cfg.seed_data << "\n";
    out << "ensemble = " << cfg.seed_ensemble << "\n";
    out << "perturb = " << cfg.seed_perturb << "\n\n";

    out << "[data]\n";
    out << "n = " << cfg.toy_n << "\n";
    out << "x_low = " << format_double(cfg.x_low) << "\n";
    out << "x_high = " << format_double(cfg.x_high) << "\n";
    out << "noise_std = " << format_double(cfg.noise_std) << "\n";
    out << "n_train = " << cfg.n_train << "\n";
    out << "n_test = " << cfg.n_test << "\n";
    out << "input_std = " << format_double(cfg.input_std) << "\n";
    if (!cfg.csv_path.empty()) out << "path = " << cfg.csv_path << "\n";
    out << "delimiter = " << (cfg.delimiter == ' ' ? "space" : std::string(1, cfg.delimiter))
        << "\n";
    out << "header = " << (cfg.header ? "true" : "false") << "\n";
    out << "input_cols = ";
    for (std::size_t i = 0; i < cfg.input_cols.size(); ++i)
        out << (i ? "," : "") << cfg.input_cols[i];
    out << "\n";
    out << "target_cols = ";
    for (std::size_t i = 0; i < cfg.target_cols.size(); ++i)
        out << (i ? "," : "") << cfg.target_cols[i];
    out << "\n";
    out << "train_count = " << cfg.train_count << "\n";
    out << "test_count = " << cfg.test_count << "\n\n";

    out << "[uq]\n";
    out << "k_sigma = " << format_double(cfg.k_sigma) << "\n";
    out << "grid_low = " << format_double(cfg.grid_low) << "\n";
    out << "grid_high = " << format_double(cfg.grid_high) << "\n";
    out << "grid_points = " << cfg.grid_points << "\n\n";

    out << "[fixture]\n";
    out << "dir = " << cfg.fixture_dir << "\n";
    return out.str();
}

void write_resolved_config(const std::string& path, const RunConfig& cfg) {
    std::ofstream out(path);
    if (!out) throw FileNotFound("cannot write '" + path + "'");
    out << render_config(cfg);
}

} // namespace enn
