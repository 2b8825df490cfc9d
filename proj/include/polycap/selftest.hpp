#pragma once

// Built-in closed-form verification suite, runnable from the CLI. Every check
// compares an engine result against a value forced by a closed form or an
// exact identity; nothing here depends on random data.

#include <string>
#include <vector>

namespace polycap {

struct SelfTestCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double expected = 0.0;
};

struct SelfTestReport {
  std::vector<SelfTestCheck> checks;
  int failures = 0;
};

SelfTestReport run_selftest();

}  // namespace polycap
