#pragma once

// JSON serialization for trained models. Documents carry a schema tag
// ("uq-model/1", "uq-ensemble/1"); weights are stored as flat arrays and
// survive a round trip bit-exactly.

#include <string>

#include "uq/ensemble.hpp"
#include "uq/train.hpp"

namespace uq {

std::string model_to_json(const TrainedPair& pair);
TrainedPair model_from_json(const std::string& text);

std::string ensemble_to_json(const EnsembleModel& model);
EnsembleModel ensemble_from_json(const std::string& text);

void save_model(const std::string& path, const TrainedPair& pair);
TrainedPair load_model(const std::string& path);

void save_ensemble(const std::string& path, const EnsembleModel& model);
EnsembleModel load_ensemble(const std::string& path);

}  // namespace uq
