#include "uq/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "uq/analysis.hpp"
#include "uq/ensemble.hpp"
#include "uq/errors.hpp"
#include "uq/metrics.hpp"
#include "uq/model_io.hpp"
#include "uq/names.hpp"

namespace uq {

namespace {

using nlohmann::json;

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("UQ_LOG");
        if (env == nullptr) return 0;
        const std::string value(env);
        if (value == "debug") return 2;
        if (value == "info") return 1;
        return 0;
    }();
    return level;
}

std::string format_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Rejects keys outside the allowed set; diagnostics carry the JSON path.
void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& path) {
    if (!obj.is_object()) throw ConfigError("config error at " + path + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("config error at " + path + "." + key + ": unknown key");
        }
    }
}

template <typename T>
T get_field(const json& obj, const char* key, const std::string& path, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config error at " + path + "." + key + ": wrong type");
    }
}

template <typename T>
T get_required(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) {
        throw ConfigError("config error at " + path + ": missing required key '" + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config error at " + path + "." + key + ": wrong type");
    }
}

DatasetSpec parse_dataset(const json& obj) {
    check_keys(obj, {"kind", "n", "noisy_fraction", "seed", "path", "target"}, "dataset");
    DatasetSpec spec;
    const std::string kind = get_required<std::string>(obj, "kind", "dataset");
    if (kind == "smooth") {
        spec.kind = DatasetSpec::Kind::Smooth;
    } else if (kind == "sharp") {
        spec.kind = DatasetSpec::Kind::Sharp;
    } else if (kind == "csv") {
        spec.kind = DatasetSpec::Kind::Csv;
    } else {
        throw ConfigError("config error at dataset.kind: unknown kind '" + kind + "'");
    }
    spec.n = get_field<std::size_t>(obj, "n", "dataset", spec.n);
    spec.noisy_fraction = get_field<double>(obj, "noisy_fraction", "dataset", spec.noisy_fraction);
    spec.seed = get_field<std::uint64_t>(obj, "seed", "dataset", spec.seed);
    spec.path = get_field<std::string>(obj, "path", "dataset", spec.path);
    spec.target = get_field<std::string>(obj, "target", "dataset", spec.target);
    if (spec.kind == DatasetSpec::Kind::Csv && spec.path.empty()) {
        throw ConfigError("config error at dataset.path: required for csv datasets");
    }
    if (spec.kind == DatasetSpec::Kind::Csv && spec.target.empty()) {
        throw ConfigError("config error at dataset.target: required for csv datasets");
    }
    return spec;
}

std::vector<HiddenSpec> parse_hidden(const json& arr, const std::string& path) {
    if (!arr.is_array()) throw ConfigError("config error at " + path + ": expected an array");
    std::vector<HiddenSpec> hidden;
    std::size_t idx = 0;
    for (const json& layer : arr) {
        const std::string layer_path = path + "[" + std::to_string(idx) + "]";
        check_keys(layer, {"units", "activation"}, layer_path);
        HiddenSpec spec;
        spec.units = get_required<std::size_t>(layer, "units", layer_path);
        spec.activation = act_from_string(get_required<std::string>(layer, "activation", layer_path));
        if (spec.units == 0) throw ConfigError("config error at " + layer_path + ": units must be > 0");
        hidden.push_back(spec);
        ++idx;
    }
    return hidden;
}

}  // namespace

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[uq] " << msg << '\n';
}

void log_debug(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[uq:debug] " << msg << '\n';
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config error: invalid JSON");
    check_keys(doc, {"dataset", "loss", "arch", "train", "folds", "ensemble", "label"}, "$");

    ExperimentConfig cfg;
    if (doc.contains("dataset")) cfg.dataset = parse_dataset(doc.at("dataset"));

    if (doc.contains("loss")) {
        const json& loss = doc.at("loss");
        check_keys(loss, {"head", "lambda", "regressor_loss"}, "loss");
        cfg.loss.variant = head_from_string(get_field<std::string>(loss, "head", "loss", "sigmoid"));
        cfg.loss.lambda = get_field<double>(loss, "lambda", "loss", 1.0);
        cfg.loss.regressor_loss =
            regloss_from_string(get_field<std::string>(loss, "regressor_loss", "loss", "mse"));
        if (!(cfg.loss.lambda > 0.0)) {
            throw ConfigError("config error at loss.lambda: must be > 0");
        }
    }

    cfg.regressor_hidden = {{50, Act::Relu}};
    cfg.quantifier_hidden = {{50, Act::Relu}};
    if (doc.contains("arch")) {
        const json& arch = doc.at("arch");
        check_keys(arch, {"regressor_hidden", "quantifier_hidden"}, "arch");
        if (arch.contains("regressor_hidden")) {
            cfg.regressor_hidden = parse_hidden(arch.at("regressor_hidden"), "arch.regressor_hidden");
        }
        if (arch.contains("quantifier_hidden")) {
            cfg.quantifier_hidden =
                parse_hidden(arch.at("quantifier_hidden"), "arch.quantifier_hidden");
        }
    }

    if (doc.contains("train")) {
        const json& train = doc.at("train");
        check_keys(train, {"epochs", "minibatch", "learning_rate", "momentum", "dropout", "seed"},
                   "train");
        cfg.epochs = get_field<std::size_t>(train, "epochs", "train", cfg.epochs);
        cfg.minibatch = get_field<std::size_t>(train, "minibatch", "train", cfg.minibatch);
        cfg.learning_rate = get_field<double>(train, "learning_rate", "train", cfg.learning_rate);
        cfg.momentum = get_field<double>(train, "momentum", "train", cfg.momentum);
        cfg.dropout = get_field<double>(train, "dropout", "train", cfg.dropout);
        cfg.train_seed = get_field<std::uint64_t>(train, "seed", "train", cfg.train_seed);
    }

    if (doc.contains("folds")) {
        const json& folds = doc.at("folds");
        check_keys(folds, {"count", "train_fraction", "seed"}, "folds");
        cfg.folds.count = get_field<std::size_t>(folds, "count", "folds", cfg.folds.count);
        cfg.folds.train_fraction =
            get_field<double>(folds, "train_fraction", "folds", cfg.folds.train_fraction);
        cfg.folds.seed = get_field<std::uint64_t>(folds, "seed", "folds", cfg.folds.seed);
    }

    if (doc.contains("ensemble")) {
        const json& ens = doc.at("ensemble");
        check_keys(ens, {"k"}, "ensemble");
        cfg.ensemble_k = get_field<std::size_t>(ens, "k", "ensemble", cfg.ensemble_k);
        if (cfg.ensemble_k == 0) throw ConfigError("config error at ensemble.k: must be >= 1");
    }

    cfg.label = get_field<std::string>(doc, "label", "$", "");
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path_or_preset) {
    if (std::filesystem::exists(path_or_preset)) {
        std::ifstream file(path_or_preset);
        if (!file) throw IoError("cannot open config '" + path_or_preset + "'");
        std::ostringstream buffer;
        buffer << file.rdbuf();
        return parse_experiment_config(buffer.str());
    }
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), path_or_preset) != names.end()) {
        return parse_experiment_config(preset_json(path_or_preset));
    }
    throw ConfigError("config '" + path_or_preset + "' is neither a file nor a preset name");
}

Dataset load_dataset(const DatasetSpec& spec) {
    switch (spec.kind) {
        case DatasetSpec::Kind::Smooth: return gen_smooth(spec.n, spec.seed);
        case DatasetSpec::Kind::Sharp: return gen_sharp(spec.n, spec.noisy_fraction, spec.seed);
        case DatasetSpec::Kind::Csv: return load_csv(spec.path, spec.target);
    }
    throw ConfigError("unknown dataset kind");
}

TrainConfig make_train_config(const ExperimentConfig& cfg, std::size_t input_dim) {
    TrainConfig train;
    train.loss_spec = cfg.loss;
    train.epochs = cfg.epochs;
    train.minibatch = cfg.minibatch;
    train.learning_rate = cfg.learning_rate;
    train.momentum = cfg.momentum;
    train.dropout = cfg.dropout;
    train.seed = cfg.train_seed;
    train.label = cfg.label;
    std::vector<std::pair<std::size_t, Act>> reg_hidden, quant_hidden;
    for (const HiddenSpec& h : cfg.regressor_hidden) reg_hidden.emplace_back(h.units, h.activation);
    for (const HiddenSpec& h : cfg.quantifier_hidden) {
        quant_hidden.emplace_back(h.units, h.activation);
    }
    train.regressor_arch = regressor_arch(input_dim, reg_hidden);
    train.quantifier_arch = quantifier_arch(input_dim, quant_hidden, cfg.loss.variant);
    return train;
}

namespace {

struct EvalOutcome {
    std::size_t n;
    double rmse_value;
    double mae_value;
    double auc_value;
    RetentionCurve curve;
};

// Shared scoring path: predictions on raw inputs, uncertainty = predicted
// expected loss, retention curve in the model's own loss kind.
template <typename PredictFn>
EvalOutcome evaluate_predictions(const Dataset& data, RegLoss kind, PredictFn&& predict_one) {
    const std::size_t n = data.size();
    std::vector<double> targets(n), predictions(n), errors(n), uncertainties(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [y_r, uncertainty] = predict_one(data.inputs[i]);
        targets[i] = data.targets[i];
        predictions[i] = y_r;
        const double residual = data.targets[i] - y_r;
        errors[i] = kind == RegLoss::MSE ? residual * residual : std::abs(residual);
        uncertainties[i] = uncertainty;
    }
    EvalOutcome out{n, rmse(targets, predictions), mae(targets, predictions), 0.0,
                    retention_curve(errors, uncertainties,
                                    kind == RegLoss::MSE ? ErrKind::RMSE : ErrKind::MAE)};
    out.auc_value = auc(out.curve);
    return out;
}

EvalOutcome evaluate_pair(const TrainedPair& pair, const Dataset& data) {
    return evaluate_predictions(data, pair.loss_spec.regressor_loss,
                                [&pair](const std::vector<double>& x) {
                                    const Prediction p = predict(pair, x);
                                    return std::pair<double, double>{p.y_r, p.expected_loss};
                                });
}

EvalOutcome evaluate_ensemble(const EnsembleModel& model, const Dataset& data) {
    const RegLoss kind = model.members.front().loss_spec.regressor_loss;
    return evaluate_predictions(data, kind, [&model](const std::vector<double>& x) {
        const EnsemblePrediction p = ensemble_predict(model, x);
        return std::pair<double, double>{p.mu, p.spread};
    });
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream file(path);
    if (!file) throw IoError("cannot write '" + path + "'");
    file << text;
    if (!file) throw IoError("write failed for '" + path + "'");
}

void write_retention_csv(const std::string& path, const RetentionCurve& curve) {
    std::ostringstream out;
    out << "n,err\n";
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
        out << i << ',' << format_g(curve.values[i]) << '\n';
    }
    write_text(path, out.str());
}

json metrics_json(const EvalOutcome& outcome) {
    return {{"n", outcome.n},
            {"rmse", outcome.rmse_value},
            {"mae", outcome.mae_value},
            {"auc", outcome.auc_value}};
}

std::filesystem::path ensure_dir(const std::string& out_dir) {
    const std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
    return dir;
}

// CSV data trains in normalized space; synthetic data (inputs and targets
// already order one) trains raw under an identity normalizer.
std::pair<Dataset, Normalizer> prepare_training_data(const ExperimentConfig& cfg,
                                                     const Dataset& data) {
    if (cfg.dataset.kind == DatasetSpec::Kind::Csv) {
        std::vector<std::size_t> all(data.size());
        std::iota(all.begin(), all.end(), 0);
        const Normalizer norm = fit_normalizer(data, all);
        return {norm.apply(data), norm};
    }
    return {data, Normalizer::identity(data.dim())};
}

}  // namespace

void cmd_synth(const ExperimentConfig& cfg, const std::string& out_csv) {
    if (cfg.dataset.kind == DatasetSpec::Kind::Csv) {
        throw ConfigError("synth requires a synthetic dataset kind (smooth or sharp)");
    }
    const Dataset data = load_dataset(cfg.dataset);
    save_csv(out_csv, data);
    log_info("wrote " + std::to_string(data.size()) + " rows to " + out_csv);
}

void cmd_train(const ExperimentConfig& cfg, const std::string& out_dir) {
    const std::filesystem::path dir = ensure_dir(out_dir);
    const Dataset data = load_dataset(cfg.dataset);
    const auto [train_data, norm] = prepare_training_data(cfg, data);
    const TrainConfig train_cfg = make_train_config(cfg, data.dim());
    const TrainedPair pair = train_pair(train_data, train_cfg, norm);
    save_model((dir / "model.json").string(), pair);
    std::ostringstream history;
    history << "epoch,loss\n";
    for (std::size_t e = 0; e < pair.history.size(); ++e) {
        history << e << ',' << format_g(pair.history[e]) << '\n';
    }
    write_text((dir / "history.csv").string(), history.str());
    log_info("trained " + std::to_string(train_cfg.epochs) + " epochs; model at " +
             (dir / "model.json").string());
}

void cmd_eval(const std::string& model_path, const std::string& data_csv,
              const std::string& out_dir, const std::string& target_column) {
    const std::filesystem::path dir = ensure_dir(out_dir);
    const TrainedPair pair = load_model(model_path);
    const Dataset data = load_csv(data_csv, target_column);
    const EvalOutcome outcome = evaluate_pair(pair, data);
    write_text((dir / "metrics.json").string(), metrics_json(outcome).dump(2) + "\n");
    write_retention_csv((dir / "retention.csv").string(), outcome.curve);
    log_info("rmse " + format_g(outcome.rmse_value) + ", mae " + format_g(outcome.mae_value) +
             ", auc " + format_g(outcome.auc_value));
}

void cmd_folds(const ExperimentConfig& cfg, const std::string& out_path, std::size_t jobs) {
    const Dataset data = load_dataset(cfg.dataset);
    const FoldPlan plan =
        make_folds(data.size(), cfg.folds.count, cfg.folds.train_fraction, cfg.folds.seed);

    struct FoldResult {
        double rmse_value, mae_value, auc_value;
    };
    std::vector<FoldResult> results(plan.folds.size());
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t f = next.fetch_add(1);
            if (f >= plan.folds.size()) return;
            try {
                const FoldPlan::Fold& fold = plan.folds[f];
                const Normalizer norm = fit_normalizer(data, fold.train);
                const Dataset train_data = norm.apply(subset(data, fold.train));
                TrainConfig train_cfg = make_train_config(cfg, data.dim());
                train_cfg.seed = derive_seed(cfg.train_seed, f);
                const TrainedPair pair = train_pair(train_data, train_cfg, norm);
                const EvalOutcome outcome = evaluate_pair(pair, subset(data, fold.test));
                results[f] = {outcome.rmse_value, outcome.mae_value, outcome.auc_value};
                log_info("fold " + std::to_string(f) + ": rmse " + format_g(outcome.rmse_value) +
                         ", auc " + format_g(outcome.auc_value));
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < std::min(jobs, plan.folds.size()); ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    auto mean_of = [&results](auto getter) {
        double acc = 0.0;
        for (const FoldResult& r : results) acc += getter(r);
        return acc / static_cast<double>(results.size());
    };
    auto std_of = [&results](auto getter, double mean) {
        double acc = 0.0;
        for (const FoldResult& r : results) {
            const double d = getter(r) - mean;
            acc += d * d;
        }
        return std::sqrt(acc / static_cast<double>(results.size() - 1));
    };
    json folds_arr = json::array();
    for (std::size_t f = 0; f < results.size(); ++f) {
        folds_arr.push_back({{"fold", f},
                             {"rmse", results[f].rmse_value},
                             {"mae", results[f].mae_value},
                             {"auc", results[f].auc_value}});
    }
    const double m_rmse = mean_of([](const FoldResult& r) { return r.rmse_value; });
    const double m_mae = mean_of([](const FoldResult& r) { return r.mae_value; });
    const double m_auc = mean_of([](const FoldResult& r) { return r.auc_value; });
    json doc = {{"label", cfg.label},
                {"fold_count", results.size()},
                {"folds", folds_arr},
                {"mean", {{"rmse", m_rmse}, {"mae", m_mae}, {"auc", m_auc}}}};
    if (results.size() > 1) {
        doc["std"] = {
            {"rmse", std_of([](const FoldResult& r) { return r.rmse_value; }, m_rmse)},
            {"mae", std_of([](const FoldResult& r) { return r.mae_value; }, m_mae)},
            {"auc", std_of([](const FoldResult& r) { return r.auc_value; }, m_auc)}};
    }
    write_text(out_path.empty() ? "folds_summary.json" : out_path, doc.dump(2) + "\n");
    log_info("folds mean rmse " + format_g(m_rmse) + ", mean auc " + format_g(m_auc));
}

void cmd_ensemble(const ExperimentConfig& cfg, std::optional<std::size_t> k_override,
                  const std::string& out_dir, std::size_t jobs) {
    const std::filesystem::path dir = ensure_dir(out_dir);
    const Dataset data = load_dataset(cfg.dataset);
    const auto [train_data, norm] = prepare_training_data(cfg, data);
    const TrainConfig train_cfg = make_train_config(cfg, data.dim());
    const std::size_t k = k_override.value_or(cfg.ensemble_k);
    const EnsembleModel model =
        ensemble_train(train_data, train_cfg, norm, k, train_cfg.seed, jobs);
    save_ensemble((dir / "ensemble.json").string(), model);
    const EvalOutcome outcome = evaluate_ensemble(model, data);
    write_text((dir / "metrics.json").string(), metrics_json(outcome).dump(2) + "\n");
    write_retention_csv((dir / "retention.csv").string(), outcome.curve);
    log_info("ensemble of " + std::to_string(k) + "; rmse " + format_g(outcome.rmse_value));
}

std::vector<double> lambda_grid(const LambdaGridSpec& spec) {
    if (!(spec.lambda_min > 0.0) || !(spec.lambda_max >= spec.lambda_min)) {
        throw ConfigError("analyze-lambda: need 0 < lambda_min <= lambda_max");
    }
    if (spec.points_per_decade == 0) {
        throw ConfigError("analyze-lambda: points_per_decade must be >= 1");
    }
    const double decades = std::log10(spec.lambda_max / spec.lambda_min);
    const std::size_t steps =
        static_cast<std::size_t>(std::floor(decades * static_cast<double>(spec.points_per_decade) +
                                            1e-9));
    std::vector<double> grid;
    grid.reserve(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        grid.push_back(spec.lambda_min *
                       std::pow(10.0, static_cast<double>(i) /
                                          static_cast<double>(spec.points_per_decade)));
    }
    return grid;
}

void cmd_analyze_lambda(const LambdaGridSpec& spec, const std::string& out_csv) {
    if (!(spec.l1 > 0.0 && spec.l2 > 0.0 && spec.l1 <= spec.l2)) {
        throw ConfigError("analyze-lambda: need 0 < l1 <= l2");
    }
    const std::vector<double> grid = lambda_grid(spec);
    std::ostringstream out;
    out << "lambda,regressor_scale_clean,regressor_scale_noisy,"
           "quantifier_scale_clean,quantifier_scale_noisy,R,Q\n";
    for (double lambda : grid) {
        const ContributionReport rep = contribution_ratios(spec.variant, spec.l1, spec.l2, lambda);
        out << format_g(lambda) << ',' << format_g(rep.regressor_scale_clean) << ','
            << format_g(rep.regressor_scale_noisy) << ',' << format_g(rep.quantifier_scale_clean)
            << ',' << format_g(rep.quantifier_scale_noisy) << ',' << format_g(rep.R) << ','
            << format_g(rep.Q) << '\n';
    }
    write_text(out_csv.empty() ? "curves.csv" : out_csv, out.str());
    log_info("wrote " + std::to_string(grid.size()) + " grid rows");
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Joint-loss uncertainty quantification for neural-network regression"};
    app.require_subcommand(1);

    std::string config_arg;
    std::string out_arg;
    std::optional<std::uint64_t> seed_arg;
    std::size_t jobs_arg = 1;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config,-c", config_arg, "Config file path or preset name");
        if (needs_config) opt->required();
        cmd->add_option("--out,-o", out_arg, "Output file or directory");
        cmd->add_option("--seed", seed_arg, "Override every seed in the config");
        cmd->add_option("--jobs,-j", jobs_arg, "Max parallel training runs");
    };

    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset as CSV");
    add_common(synth, true);

    CLI::App* train = app.add_subcommand("train", "Train a regressor/quantifier pair");
    add_common(train, true);

    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a trained model on a CSV dataset");
    std::string model_arg, data_arg, target_arg = "y";
    eval_cmd->add_option("--model", model_arg, "Model JSON path")->required();
    eval_cmd->add_option("--data", data_arg, "Dataset CSV path")->required();
    eval_cmd->add_option("--target", target_arg, "Target column name (default y)");
    eval_cmd->add_option("--out,-o", out_arg, "Output directory");

    CLI::App* folds = app.add_subcommand("folds", "Train/evaluate over random train-test folds");
    add_common(folds, true);

    CLI::App* ensemble = app.add_subcommand("ensemble", "Train an ensemble of pairs");
    add_common(ensemble, true);
    std::optional<std::size_t> k_arg;
    ensemble->add_option("--k", k_arg, "Member count (overrides config)");

    CLI::App* analyze = app.add_subcommand("analyze-lambda", "Emit learning-speed curves as CSV");
    LambdaGridSpec grid_spec;
    std::string variant_arg = "sigmoid";
    analyze->add_option("--variant", variant_arg, "Head variant: sigmoid or softplus");
    analyze->add_option("--l1", grid_spec.l1, "Clean-region loss (default 0.1)");
    analyze->add_option("--l2", grid_spec.l2, "Noisy-region loss (default 10)");
    analyze->add_option("--lambda-min", grid_spec.lambda_min, "Grid start (default 1e-3)");
    analyze->add_option("--lambda-max", grid_spec.lambda_max, "Grid end (default 1e3)");
    analyze->add_option("--points-per-decade", grid_spec.points_per_decade,
                        "Log-grid density (default 25)");
    analyze->add_option("--out,-o", out_arg, "Output CSV path");

    CLI::App* presets = app.add_subcommand("presets", "List built-in recipes, or print one");
    std::string preset_arg;
    presets->add_option("name", preset_arg, "Preset to print");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help requests exit 0 through CLI11; anything else is a usage error.
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        auto apply_seed = [&](ExperimentConfig cfg) {
            if (seed_arg) {
                cfg.dataset.seed = *seed_arg;
                cfg.train_seed = *seed_arg;
                cfg.folds.seed = *seed_arg;
            }
            return cfg;
        };
        if (synth->parsed()) {
            cmd_synth(apply_seed(load_experiment_config(config_arg)),
                      out_arg.empty() ? "synth.csv" : out_arg);
        } else if (train->parsed()) {
            cmd_train(apply_seed(load_experiment_config(config_arg)), out_arg);
        } else if (eval_cmd->parsed()) {
            cmd_eval(model_arg, data_arg, out_arg, target_arg);
        } else if (folds->parsed()) {
            cmd_folds(apply_seed(load_experiment_config(config_arg)), out_arg, jobs_arg);
        } else if (ensemble->parsed()) {
            cmd_ensemble(apply_seed(load_experiment_config(config_arg)), k_arg, out_arg, jobs_arg);
        } else if (analyze->parsed()) {
            grid_spec.variant = head_from_string(variant_arg);
            cmd_analyze_lambda(grid_spec, out_arg);
        } else if (presets->parsed()) {
            if (preset_arg.empty()) {
                for (const std::string& name : preset_names()) std::cout << name << '\n';
            } else {
                std::cout << preset_json(preset_arg) << '\n';
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}

}  // namespace uq
