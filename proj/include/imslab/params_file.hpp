#pragma once

#include "imslab/domain.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace imslab {

/// Parses a parameter document: a JSON object whose keys are exactly the
/// DelayParams field names. t_nar and t_np may be omitted and then mirror
/// t_oar and t_op; an omitted t_par defaults to kDefaultParDelay. Any other
/// missing or unrecognized key is a ConfigError.
DelayParams parse_params(std::string_view json_text);

DelayParams load_params(const std::filesystem::path& path);

/// Serializes every field, in declaration order.
std::string dump_params(const DelayParams& params);

} // namespace imslab
