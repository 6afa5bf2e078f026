#pragma once

#include <string>

#include "covalg/system_io.hpp"

namespace covalg::testing {

inline System gallery_system(const std::string& name) {
  return description_to_system(load_description("gallery:" + name));
}

inline CircleAction gallery_action(const std::string& name) {
  return description_to_action(load_description("gallery:" + name));
}

/// The forward shift on C^m: blocks m x C, sigma(b) = b + 1.
inline System shift_system(int m) {
  return gallery_system("shift-c" + std::to_string(m));
}

}  // namespace covalg::testing
