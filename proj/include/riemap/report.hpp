#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace riemap {

/// Outcome of an exact check: how many items were compared and a
/// human-readable line for every mismatch.
struct CheckReport {
  std::string name;
  std::size_t checked = 0;
  std::vector<std::string> violations;

  bool passed() const { return violations.empty(); }
  void fail(std::string what) { violations.push_back(std::move(what)); }
};

}  // namespace riemap
