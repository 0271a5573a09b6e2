#pragma once

#include <string>
#include <vector>

namespace feedbalance::cli {

struct CheckItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Built-in verification battery behind `feedbalance check`: the
/// three-node convexity instance plus small oracle checks of every module.
std::vector<CheckItem> RunCheckBattery();

}  // namespace feedbalance::cli
