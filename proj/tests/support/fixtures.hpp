#pragma once

#include <string>
#include <string_view>

#include "compocheck/model.hpp"

namespace fixtures {

std::string path(std::string_view relative);

/// Parses, integrity-checks and synthesizes; throws std::runtime_error with
/// the rendered errors when any stage fails.
compocheck::Model load(std::string_view relative);
compocheck::Model from_dsl(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace fixtures
