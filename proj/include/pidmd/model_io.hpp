#ifndef PIDMD_MODEL_IO_HPP
#define PIDMD_MODEL_IO_HPP

#include <string>

#include "pidmd/model.hpp"

namespace pidmd {

// Writes dir/model.json (full model state, complex numbers as [re, im]) and
// dir/operator.csv (the materialized matrix, for inspection). Creates the
// directory if needed.
void save_model(const PiDmdModel& model, const std::string& dir);

// Rebuilds a model from dir/model.json.
PiDmdModel load_model(const std::string& dir);

}  // namespace pidmd

#endif  // PIDMD_MODEL_IO_HPP
