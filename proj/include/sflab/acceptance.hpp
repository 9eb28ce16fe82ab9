#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "sflab/core.hpp"
#include "sflab/fiber_models.hpp"

namespace sflab {

// One sub-check: |measured - target| <= tolerance, or measured <= target
// when upper_bound is set (tolerance then is the slack added to the bound).
struct SubCheck {
  std::string name;
  Scalar measured = 0;
  Scalar target = 0;
  Scalar tolerance = 0;
  bool upper_bound = false;
  bool pass = false;
  // Distance from the pass boundary in tolerance units; > 1 fails.
  Scalar severity() const;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  // Worst sub-check.
  Scalar measured = 0;
  Scalar target = 0;
  Scalar tolerance = 0;
  bool upper_bound = false;
  std::string worst;
  Scalar seconds = 0;
  Scalar time_limit = 0;
  std::vector<SubCheck> checks;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240611;
  std::set<int> only;  // empty = all
  // Registry checked by the golden-data criterion.
  const std::vector<TableRow>* registry = nullptr;
};

inline constexpr int kCriterionCount = 13;

CriterionResult check_golden_table(const std::vector<TableRow>& registry, std::uint64_t seed);
CriterionResult check_cone_angles();
CriterionResult check_ib_curvature();
CriterionResult check_ibstar_curvature();
CriterionResult check_flatness(std::uint64_t seed);
CriterionResult check_volume_growth();
CriterionResult check_injectivity();
CriterionResult check_alh();
CriterionResult check_weil_petersson();
CriterionResult check_kahler_ricci(std::uint64_t seed);
CriterionResult check_semiflat_exactness(std::uint64_t seed);
CriterionResult check_monge_ampere();
CriterionResult check_sobolev();

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

// "PASS  3 name  measured=... target=... tol=... (worst: ...) [1.2 s]"
std::string format_result(const CriterionResult& r);
std::string results_json(const std::vector<CriterionResult>& results);

}  // namespace sflab
