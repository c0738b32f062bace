#include <iostream>

#include "acceptance.hpp"

int main() {
  viscowave::acceptance::Options options;
  options.progress = &std::cout;
  const auto results = viscowave::acceptance::run_all(options);
  int failed = 0;
  std::cout << "\nsummary\n";
  for (const auto& r : results) {
    std::cout << format(r) << '\n';
    if (!r.passed) ++failed;
  }
  std::cout << results.size() - failed << '/' << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
