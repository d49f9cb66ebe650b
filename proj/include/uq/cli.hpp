#pragma once

// Command implementations behind the `uq` binary. Everything here is also
// callable in-process (the tests drive commands without spawning).
//
// Exit codes used by run_cli: 0 success, 2 config error, 3 divergence
// during training, 4 I/O failure.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uq/data.hpp"
#include "uq/train.hpp"

namespace uq {

struct DatasetSpec {
    enum class Kind { Smooth, Sharp, Csv };
    Kind kind = Kind::Smooth;
    std::size_t n = 1000;             // synthetic kinds
    double noisy_fraction = 0.8;      // sharp
    std::uint64_t seed = 0;           // synthetic kinds
    std::string path;                 // csv
    std::string target;               // csv
};

struct FoldSpec {
    std::size_t count = 10;
    double train_fraction = 0.95;
    std::uint64_t seed = 0;
};

// One hidden layer description as configs state it; the output layer is
// appended automatically (linear regressor, head-matching quantifier).
struct HiddenSpec {
    std::size_t units;
    Act activation;
};

struct ExperimentConfig {
    DatasetSpec dataset;
    JointLossSpec loss;
    std::vector<HiddenSpec> regressor_hidden;
    std::vector<HiddenSpec> quantifier_hidden;
    std::size_t epochs = 100;
    std::size_t minibatch = 5;
    double learning_rate = 1e-3;
    double momentum = 0.9;
    double dropout = 0.0;
    std::uint64_t train_seed = 0;
    FoldSpec folds;
    std::size_t ensemble_k = 5;
    std::string label;
};

// Parses and schema-checks a config document; unknown keys are rejected with
// the offending path in the message.
ExperimentConfig parse_experiment_config(const std::string& json_text);

// Loads --config arguments: an existing file path, else a built-in preset
// name (see presets()).
ExperimentConfig load_experiment_config(const std::string& path_or_preset);

// Built-in recipes keyed by name ("smooth", "sharp80", "boston-rmse",
// "ml-boston-rmse", ...); values are complete config documents.
std::vector<std::string> preset_names();
std::string preset_json(const std::string& name);

// Materializes cfg.dataset (generates or loads).
Dataset load_dataset(const DatasetSpec& spec);

// Builds the TrainConfig for a concrete input dimension.
TrainConfig make_train_config(const ExperimentConfig& cfg, std::size_t input_dim);

void cmd_synth(const ExperimentConfig& cfg, const std::string& out_csv);
void cmd_train(const ExperimentConfig& cfg, const std::string& out_dir);
void cmd_eval(const std::string& model_path, const std::string& data_csv,
              const std::string& out_dir, const std::string& target_column = "y");
void cmd_folds(const ExperimentConfig& cfg, const std::string& out_path, std::size_t jobs);
void cmd_ensemble(const ExperimentConfig& cfg, std::optional<std::size_t> k_override,
                  const std::string& out_dir, std::size_t jobs);

struct LambdaGridSpec {
    Head variant = Head::Sigmoid;
    double l1 = 0.1;
    double l2 = 10.0;
    double lambda_min = 1e-3;
    double lambda_max = 1e3;
    std::size_t points_per_decade = 25;
};
std::vector<double> lambda_grid(const LambdaGridSpec& spec);
void cmd_analyze_lambda(const LambdaGridSpec& spec, const std::string& out_csv);

// Full argument parsing + dispatch; maps exceptions to exit codes.
int run_cli(int argc, const char* const* argv);

// UQ_LOG messaging: level "info" or "debug" to stderr.
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace uq
