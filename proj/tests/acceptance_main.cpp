#include <iostream>

#include "sflab/acceptance.hpp"

int main() {
  const auto results = sflab::run_acceptance();
  int failed = 0;
  for (const auto& r : results) {
    std::cout << sflab::format_result(r) << '\n';
    for (const auto& c : r.checks)
      if (!c.pass)
        std::cout << "      failing: " << c.name << " measured=" << c.measured << (c.upper_bound ? " bound=" : " target=")
                  << c.target << " tol=" << c.tolerance << '\n';
    if (!r.pass) ++failed;
  }
  std::cout << results.size() - failed << "/" << results.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
