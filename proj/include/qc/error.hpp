#pragma once

#include <stdexcept>
#include <string>

namespace qc {

/// every module error carries a stable code for the CLI error JSON
struct Error : std::runtime_error {
  std::string code;
  Error(std::string c, const std::string& what) : std::runtime_error(what), code(std::move(c)) {}
};

}  // namespace qc
