#pragma once
//
// Self-verification suite: every model invariant expressed as a named check
// over a parameter grid. Shared by the CLI `verify` subcommand and the
// acceptance harness.
//

#include <string>
#include <vector>

namespace homsim::verify {

struct CheckResult {
  std::string name;
  bool passed;
  double worst_margin;  // max residual / bound over the grid (<= 1 passes)
  std::string detail;   // context of the worst or first failing point
};

enum class GridSize { small, full };

std::vector<CheckResult> run_all_checks(GridSize size = GridSize::small);

}  // namespace homsim::verify
