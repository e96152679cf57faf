#pragma once

#include <stdexcept>
#include <string>

namespace memk {

// Thrown for every data/shape/format error the library detects.
// Messages are complete sentences naming the offending file, line,
// column or parameter so CLI users can act on them directly.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace memk
