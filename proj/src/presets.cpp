#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uq/cli.hpp"
#include "uq/errors.hpp"

namespace uq {

namespace {

using nlohmann::json;

json hidden_layers(std::size_t units, const char* activation, std::size_t layers) {
    json arr = json::array();
    for (std::size_t i = 0; i < layers; ++i) {
        arr.push_back({{"units", units}, {"activation", activation}});
    }
    return arr;
}

json synthetic_preset(const char* kind, std::size_t n, double noisy_fraction, double lambda,
                      double lr, std::size_t epochs, std::size_t minibatch,
                      const std::string& label) {
    json doc = {
        {"dataset", {{"kind", kind}, {"n", n}, {"seed", 1}}},
        {"loss", {{"head", "sigmoid"}, {"lambda", lambda}, {"regressor_loss", "mse"}}},
        {"arch",
         {{"regressor_hidden", hidden_layers(10, "tanh", 2)},
          {"quantifier_hidden", hidden_layers(10, "tanh", 2)}}},
        {"train",
         {{"epochs", epochs},
          {"minibatch", minibatch},
          {"learning_rate", lr},
          {"momentum", 0.9},
          {"dropout", 0.0},
          {"seed", 1}}},
        {"ensemble", {{"k", 5}}},
        {"label", label},
    };
    if (std::string(kind) == "sharp") doc["dataset"]["noisy_fraction"] = noisy_fraction;
    return doc;
}

struct UciDataset {
    const char* name;
    const char* path;
    const char* target;
    std::size_t units;
    std::size_t minibatch;
};

// One hidden ReLU layer in both networks; the large dataset doubles the width
// and trains on a single 90/10 split instead of ten 95/5 folds.
const UciDataset kUci[] = {
    {"boston", "data/boston_housing.csv", "medv", 50, 5},
    {"concrete", "data/concrete.csv", "strength", 50, 5},
    {"power", "data/power_plant.csv", "pe", 50, 10},
    {"yacht", "data/yacht.csv", "resistance", 50, 5},
    {"kin8nm", "data/kin8nm.csv", "y", 50, 10},
    {"msd", "data/year_msd.csv", "year", 100, 5000},
};

struct OurParams {
    double lambda, lr, dropout;
    std::size_t epochs;
};
struct MlParams {
    double lr, dropout;
    std::size_t epochs;
};

const std::map<std::string, OurParams> kOurMse = {
    {"boston", {0.1, 0.0008, 0.4, 500}},  {"concrete", {0.2, 0.0002, 0.15, 700}},
    {"power", {0.2, 0.0003, 0.0, 80}},    {"yacht", {0.2, 0.0004, 0.0, 500}},
    {"kin8nm", {0.5, 0.0002, 0.0, 300}},  {"msd", {0.1, 0.2, 0.1, 50}},
};
const std::map<std::string, OurParams> kOurMae = {
    {"boston", {0.2, 0.0002, 0.4, 2000}}, {"concrete", {0.2, 0.0003, 0.1, 600}},
    {"power", {1.0, 0.0001, 0.0, 200}},   {"yacht", {0.2, 0.0004, 0.0, 500}},
    {"kin8nm", {0.2, 0.0002, 0.0, 400}},  {"msd", {0.5, 0.1, 0.1, 70}},
};
const std::map<std::string, MlParams> kMlMse = {
    {"boston", {0.00004, 0.4, 500}}, {"concrete", {0.0001, 0.1, 700}},
    {"power", {0.00005, 0.0, 150}},  {"yacht", {0.0001, 0.1, 2000}},
    {"kin8nm", {0.00005, 0.0, 200}}, {"msd", {0.005, 0.1, 50}},
};
const std::map<std::string, MlParams> kMlMae = {
    {"boston", {0.00003, 0.4, 600}}, {"concrete", {0.00003, 0.1, 800}},
    {"power", {0.00005, 0.0, 150}},  {"yacht", {0.0001, 0.1, 1000}},
    {"kin8nm", {0.00005, 0.0, 400}}, {"msd", {0.01, 0.1, 50}},
};

json uci_preset(const UciDataset& ds, const char* head, double lambda, const char* regloss,
                double lr, double dropout, std::size_t epochs, const std::string& label) {
    const bool single_split = std::string(ds.name) == "msd";
    return json{
        {"dataset", {{"kind", "csv"}, {"path", ds.path}, {"target", ds.target}}},
        {"loss", {{"head", head}, {"lambda", lambda}, {"regressor_loss", regloss}}},
        {"arch",
         {{"regressor_hidden", hidden_layers(ds.units, "relu", 1)},
          {"quantifier_hidden", hidden_layers(ds.units, "relu", 1)}}},
        {"train",
         {{"epochs", epochs},
          {"minibatch", ds.minibatch},
          {"learning_rate", lr},
          {"momentum", 0.9},
          {"dropout", dropout},
          {"seed", 1}}},
        {"folds",
         {{"count", single_split ? 1 : 10},
          {"train_fraction", single_split ? 0.9 : 0.95},
          {"seed", 1}}},
        {"ensemble", {{"k", 5}}},
        {"label", label},
    };
}

const std::vector<std::pair<std::string, std::string>>& preset_table() {
    static const std::vector<std::pair<std::string, std::string>> table = [] {
        std::vector<std::pair<std::string, std::string>> out;
        out.emplace_back("smooth",
                         synthetic_preset("smooth", 2000, 0.0, 0.1, 0.02, 400, 10, "smooth").dump(2));
        out.emplace_back(
            "sharp20",
            synthetic_preset("sharp", 1000, 0.2, 0.05, 0.01, 2000, 5, "sharp20").dump(2));
        out.emplace_back(
            "sharp80",
            synthetic_preset("sharp", 1000, 0.8, 0.05, 0.01, 2000, 5, "sharp80").dump(2));
        for (const UciDataset& ds : kUci) {
            const OurParams& om = kOurMse.at(ds.name);
            const OurParams& oa = kOurMae.at(ds.name);
            const MlParams& mm = kMlMse.at(ds.name);
            const MlParams& ma = kMlMae.at(ds.name);
            const std::string base = ds.name;
            out.emplace_back(base + "-rmse",
                             uci_preset(ds, "sigmoid", om.lambda, "mse", om.lr, om.dropout,
                                        om.epochs, base + "-rmse")
                                 .dump(2));
            out.emplace_back(base + "-mae",
                             uci_preset(ds, "sigmoid", oa.lambda, "mae", oa.lr, oa.dropout,
                                        oa.epochs, base + "-mae")
                                 .dump(2));
            out.emplace_back("ml-" + base + "-rmse",
                             uci_preset(ds, "softplus", 1.0, "mse", mm.lr, mm.dropout, mm.epochs,
                                        "ml-" + base + "-rmse")
                                 .dump(2));
            out.emplace_back("ml-" + base + "-mae",
                             uci_preset(ds, "softplus", 1.0, "mae", ma.lr, ma.dropout, ma.epochs,
                                        "ml-" + base + "-mae")
                                 .dump(2));
        }
        return out;
    }();
    return table;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    names.reserve(preset_table().size());
    for (const auto& [name, text] : preset_table()) names.push_back(name);
    return names;
}

std::string preset_json(const std::string& name) {
    for (const auto& [preset, text] : preset_table()) {
        if (preset == name) return text;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace uq
