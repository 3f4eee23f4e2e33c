#pragma once

#include <string>

#include "hifd/model.hpp"

namespace hifd {

inline constexpr int kModelFormatVersion = 1;

// Versioned JSON document with full double round-trip precision. Loading
// re-validates every shape and invariant before the model is usable.
void save_model(const PipelineModel& model, const std::string& path);
PipelineModel load_model(const std::string& path);

std::string model_to_json(const PipelineModel& model);
PipelineModel model_from_json(const std::string& text, const std::string& context);

}  // namespace hifd
