#pragma once

#include "rblda/experiment.hpp"

#include <string>

namespace rblda {

/// Plain-text model container (see README for the layout). Matrices are
/// written with 17 significant digits so save/load round-trips exactly.
void save_model(const std::string& path, const FittedModel& model);
FittedModel load_model(const std::string& path);

} // namespace rblda
