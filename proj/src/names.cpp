#include "uq/names.hpp"

#include "uq/errors.hpp"

namespace uq {

std::string to_string(Head variant) {
    return variant == Head::Sigmoid ? "sigmoid" : "softplus";
}

std::string to_string(RegLoss kind) { return kind == RegLoss::MSE ? "mse" : "mae"; }

std::string to_string(Act act) {
    switch (act) {
        case Act::Tanh: return "tanh";
        case Act::Relu: return "relu";
        case Act::Linear: return "linear";
        case Act::Sigmoid: return "sigmoid";
        case Act::Softplus: return "softplus";
    }
    throw ConfigError("unknown activation");
}

std::string to_string(EnsembleKind kind) {
    return kind == EnsembleKind::MeanVariance ? "mean-variance" : "mean-eae";
}

Head head_from_string(const std::string& name) {
    if (name == "sigmoid") return Head::Sigmoid;
    if (name == "softplus") return Head::Softplus;
    throw ConfigError("unknown head variant '" + name + "' (want sigmoid or softplus)");
}

RegLoss regloss_from_string(const std::string& name) {
    if (name == "mse") return RegLoss::MSE;
    if (name == "mae") return RegLoss::MAE;
    throw ConfigError("unknown regressor loss '" + name + "' (want mse or mae)");
}

Act act_from_string(const std::string& name) {
    if (name == "tanh") return Act::Tanh;
    if (name == "relu") return Act::Relu;
    if (name == "linear") return Act::Linear;
    if (name == "sigmoid") return Act::Sigmoid;
    if (name == "softplus") return Act::Softplus;
    throw ConfigError("unknown activation '" + name + "'");
}

EnsembleKind ensemble_kind_from_string(const std::string& name) {
    if (name == "mean-variance") return EnsembleKind::MeanVariance;
    if (name == "mean-eae") return EnsembleKind::MeanEAE;
    throw ConfigError("unknown ensemble kind '" + name + "'");
}

}  // namespace uq
