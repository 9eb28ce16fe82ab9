#pragma once

#include <istream>
#include <string>

#include "sflab/fiber_models.hpp"

namespace sflab {

// Model files are `key = value` lines; `#` starts a comment. Keys:
//   type          Kodaira type: I_3, I_2*, II, III*, ... or I / I* with b
//   b             non-negative integer (must agree with type if both given)
//   m             positive integer or inf (default inf)
//   epsilon       fiber area, default 1
//   k0_re k0_im   constant k, default 1
//   pole_flag     zero | minus-D (default minus-D)
//   alpha         default 1
//   tau0_re tau0_im tau_slope_re tau_slope_im
//                 tau(z) = tau0 + slope z for I_0 and I_0* (default tau0 = i)
// Unknown or repeated keys are errors.
FiberModel parse_model(std::istream& in);
FiberModel parse_model_text(const std::string& text);
FiberModel load_model(const std::string& path);

}  // namespace sflab
