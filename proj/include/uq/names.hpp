#pragma once

// String forms of the enums as they appear in JSON configs, model files and
// CLI flags.

#include <string>

#include "uq/ensemble.hpp"
#include "uq/losses.hpp"
#include "uq/nn.hpp"

namespace uq {

std::string to_string(Head variant);
std::string to_string(RegLoss kind);
std::string to_string(Act act);
std::string to_string(EnsembleKind kind);

Head head_from_string(const std::string& name);
RegLoss regloss_from_string(const std::string& name);
Act act_from_string(const std::string& name);
EnsembleKind ensemble_kind_from_string(const std::string& name);

}  // namespace uq
