#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <viscowave/config.hpp>

namespace viscowave::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::uint64_t seed = 20240611;
  std::ostream* progress = nullptr;  ///< receives one line per criterion as it finishes
};

/// Standard well-side scenario: frozen constant sine history on [0, pi], exp:1:1, m = 1, p = 3.
ScenarioConfig standard_w1(int n, double t_end);

/// Runs all fourteen criteria in order.
std::vector<CriterionResult> run_all(const Options& options = {});

/// "[PASS] 03 title: detail (1.23 s)"
std::string format(const CriterionResult& result);

}  // namespace viscowave::acceptance
