#pragma once

#include <map>
#include <string>

#include "hrl/tensor.hpp"

namespace hrl {

// Text checkpoint format, one "name shape data" record per parameter.
// Values are written as hex floats so round-trips are bitwise exact.
void save_params(const std::string& path, const std::map<std::string, Tensor>& params);
std::map<std::string, Tensor> load_params(const std::string& path);

}  // namespace hrl
