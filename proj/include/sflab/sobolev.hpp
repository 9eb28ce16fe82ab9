#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sflab/core.hpp"

namespace sflab {

// Compactly supported radial profile u(r), smooth between breakpoints. The
// last breakpoint is the support radius.
struct RadialProfile {
  std::string name;
  std::function<Scalar(Scalar)> value;
  std::function<Scalar(Scalar)> derivative;
  std::vector<Scalar> breakpoints;

  static RadialProfile hat();        // max(0, 1 - r)
  static RadialProfile quartic();    // (1 - r^2)^2 on r < 1
  static RadialProfile cosine();     // cos^2(pi r / 2) on r < 1
  static RadialProfile plateau();    // 1 on r < 1, linear to 0 at r = 2
  static RadialProfile shell();      // max(0, 1 - |r - 2|)
  static RadialProfile zero();
};

std::vector<RadialProfile> default_profiles();

struct SobolevRow {
  std::string profile;
  Scalar lambda = 1;
  Scalar lhs = 0;  // (int |u|^(2 alpha) (1 + r)^w)^(1/alpha)
  Scalar rhs = 0;  // int |grad u|^2
  Scalar ratio = 0;
  bool excluded = false;  // 0 / 0
};

struct SobolevReport {
  int beta = 4;
  Scalar alpha = 2;
  Scalar weight_exponent = 0;  // alpha (beta - 2) - beta
  std::vector<SobolevRow> rows;
  Scalar sup_ratio = 0;
  // max over profiles and dilations of max(ratio/ratio(lambda=1), inverse)
  Scalar dilation_factor = 1;
  std::vector<std::string> excluded;
};

// Dilations default to 2^-4, ..., 2^4.
SobolevReport sobolev_probe(int beta, Scalar alpha, const std::vector<RadialProfile>& family,
                            std::vector<Scalar> dilations = {});

}  // namespace sflab
