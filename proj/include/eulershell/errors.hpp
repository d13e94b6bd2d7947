// Error taxonomy: config_error -> CLI exit 2, numerical_error -> CLI exit 3.
#pragma once

#include <stdexcept>
#include <string>

namespace eulershell {

struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace eulershell
