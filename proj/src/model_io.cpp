#include "uq/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "uq/errors.hpp"
#include "uq/names.hpp"

namespace uq {

namespace {

using nlohmann::json;

constexpr const char* kModelSchema = "uq-model/1";
constexpr const char* kEnsembleSchema = "uq-ensemble/1";

json net_to_json(const Mlp& net) {
    json layers = json::array();
    std::vector<double> weights;
    std::vector<double> biases;
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        const LayerSpec& spec = net.layers[li];
        layers.push_back({{"in", spec.in_dim},
                          {"out", spec.out_dim},
                          {"activation", uq::to_string(spec.activation)}});
        weights.insert(weights.end(), net.weights[li].begin(), net.weights[li].end());
        biases.insert(biases.end(), net.biases[li].begin(), net.biases[li].end());
    }
    return {{"layers", layers}, {"weights", weights}, {"biases", biases},
            {"rng_seed", net.rng_seed}};
}

Mlp net_from_json(const json& doc) {
    Mlp net;
    for (const json& layer : doc.at("layers")) {
        net.layers.push_back({layer.at("in").get<std::size_t>(),
                              layer.at("out").get<std::size_t>(),
                              act_from_string(layer.at("activation").get<std::string>())});
    }
    if (net.layers.empty()) throw IoError("model: network with no layers");
    net.rng_seed = doc.value("rng_seed", std::uint64_t{0});
    const auto weights = doc.at("weights").get<std::vector<double>>();
    const auto biases = doc.at("biases").get<std::vector<double>>();
    std::size_t w_off = 0, b_off = 0;
    for (const LayerSpec& spec : net.layers) {
        const std::size_t w_count = spec.out_dim * spec.in_dim;
        if (w_off + w_count > weights.size() || b_off + spec.out_dim > biases.size()) {
            throw IoError("model: weight array shorter than the declared layers");
        }
        net.weights.emplace_back(weights.begin() + static_cast<std::ptrdiff_t>(w_off),
                                 weights.begin() + static_cast<std::ptrdiff_t>(w_off + w_count));
        net.biases.emplace_back(biases.begin() + static_cast<std::ptrdiff_t>(b_off),
                                biases.begin() + static_cast<std::ptrdiff_t>(b_off + spec.out_dim));
        w_off += w_count;
        b_off += spec.out_dim;
    }
    if (w_off != weights.size() || b_off != biases.size()) {
        throw IoError("model: weight array longer than the declared layers");
    }
    return net;
}

json normalizer_to_json(const Normalizer& norm) {
    return {{"input_mean", norm.input_mean},
            {"input_std", norm.input_std},
            {"target_mean", norm.target_mean},
            {"target_std", norm.target_std}};
}

Normalizer normalizer_from_json(const json& doc) {
    Normalizer norm;
    norm.input_mean = doc.at("input_mean").get<std::vector<double>>();
    norm.input_std = doc.at("input_std").get<std::vector<double>>();
    norm.target_mean = doc.at("target_mean").get<double>();
    norm.target_std = doc.at("target_std").get<double>();
    if (norm.input_mean.size() != norm.input_std.size()) {
        throw IoError("model: normalizer mean/std length mismatch");
    }
    return norm;
}

json pair_to_json(const TrainedPair& pair) {
    return {{"schema", kModelSchema},
            {"loss",
             {{"head", uq::to_string(pair.loss_spec.variant)},
              {"lambda", pair.loss_spec.lambda},
              {"regressor_loss", uq::to_string(pair.loss_spec.regressor_loss)}}},
            {"normalizer", normalizer_to_json(pair.normalizer)},
            {"regressor", net_to_json(pair.regressor)},
            {"quantifier", net_to_json(pair.quantifier)},
            {"history", pair.history}};
}

TrainedPair pair_from_json(const json& doc) {
    if (doc.value("schema", "") != kModelSchema) {
        throw IoError("model: missing or unsupported schema tag (want " +
                      std::string(kModelSchema) + ")");
    }
    TrainedPair pair;
    const json& loss = doc.at("loss");
    pair.loss_spec.variant = head_from_string(loss.at("head").get<std::string>());
    pair.loss_spec.lambda = loss.at("lambda").get<double>();
    pair.loss_spec.regressor_loss =
        regloss_from_string(loss.at("regressor_loss").get<std::string>());
    pair.normalizer = normalizer_from_json(doc.at("normalizer"));
    pair.regressor = net_from_json(doc.at("regressor"));
    pair.quantifier = net_from_json(doc.at("quantifier"));
    pair.history = doc.value("history", std::vector<double>{});
    return pair;
}

json parse(const std::string& text, const char* what) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw IoError(std::string(what) + ": invalid JSON");
    return doc;
}

std::string read_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw IoError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream file(path);
    if (!file) throw IoError("cannot write '" + path + "'");
    file << text;
    if (!file) throw IoError("write failed for '" + path + "'");
}

}  // namespace

std::string model_to_json(const TrainedPair& pair) { return pair_to_json(pair).dump(2); }

TrainedPair model_from_json(const std::string& text) {
    try {
        return pair_from_json(parse(text, "model"));
    } catch (const json::exception& e) {
        throw IoError(std::string("model: ") + e.what());
    }
}

std::string ensemble_to_json(const EnsembleModel& model) {
    json members = json::array();
    for (const TrainedPair& member : model.members) members.push_back(pair_to_json(member));
    const json doc = {{"schema", kEnsembleSchema},
                      {"kind", uq::to_string(model.kind)},
                      {"members", members}};
    return doc.dump(2);
}

EnsembleModel ensemble_from_json(const std::string& text) {
    try {
        const json doc = parse(text, "ensemble");
        if (doc.value("schema", "") != kEnsembleSchema) {
            throw IoError("ensemble: missing or unsupported schema tag");
        }
        EnsembleModel model;
        model.kind = ensemble_kind_from_string(doc.at("kind").get<std::string>());
        for (const json& member : doc.at("members")) model.members.push_back(pair_from_json(member));
        if (model.members.empty()) throw IoError("ensemble: no members");
        return model;
    } catch (const json::exception& e) {
        throw IoError(std::string("ensemble: ") + e.what());
    }
}

void save_model(const std::string& path, const TrainedPair& pair) {
    write_file(path, model_to_json(pair));
}

TrainedPair load_model(const std::string& path) { return model_from_json(read_file(path)); }

void save_ensemble(const std::string& path, const EnsembleModel& model) {
    write_file(path, ensemble_to_json(model));
}

EnsembleModel load_ensemble(const std::string& path) {
    return ensemble_from_json(read_file(path));
}

}  // namespace uq
