#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sflab/core.hpp"
#include "sflab/sl2z.hpp"

namespace sflab {

enum class PoleFlag { Zero, MinusD };

std::string to_string(PoleFlag p);

// Holomorphic tau(z) on the unit disk with Im tau > 0.
struct TauFunction {
  std::function<Complex(Complex)> value;
  std::function<Complex(Complex)> d1;
  std::function<Complex(Complex)> d2;  // optional; closed-form curvature needs it
  // tau(z) - tau(0) without cancellation; optional.
  std::function<Complex(Complex)> delta;
  bool constant = false;

  static TauFunction linear(Complex tau0, Complex slope);
  // tau(z) = scale * exp(z)
  static TauFunction exponential(Complex scale);

  Complex at0() const { return value(Complex{0.0, 0.0}); }
  Complex difference(Complex z) const { return delta ? delta(z) : value(z) - at0(); }
};

// A Kodaira type with the data of a semi-flat model near the singular fiber.
// For I_b* the base coordinate is u with z = u^2 (half-disk Re u > 0).
struct FiberModel {
  KodairaType type = KodairaType::I(1);
  std::optional<int> m;  // j-multiplicity; nullopt = infinity (isotrivial)
  Scalar epsilon = 1.0;
  std::vector<Complex> k{Complex{1.0, 0.0}};  // k(z) = sum k[j] z^j
  PoleFlag pole = PoleFlag::MinusD;
  std::optional<TauFunction> tau;  // required for I_0 / I_0*
  Scalar alpha = 1.0;

  Complex k0() const { return k.front(); }
  Complex k_at(Complex z) const;
  Complex dk_at(Complex z) const;
  Complex d2k_at(Complex z) const;
  bool k_constant() const;
  bool isotrivial() const;
  bool uses_u_coordinate() const { return type.kind == FiberKind::Istar && type.b > 0; }

  // Throws InputError on violated invariants.
  void validate() const;
  std::string describe() const;

  // Defaults: m = infinity, eps = 1, k = 1, tau = i for I_0 / I_0*.
  static FiberModel standard(KodairaType t, PoleFlag pole = PoleFlag::MinusD);
};

// Values and z-derivatives (u-derivatives for I_b*) of the period generators.
struct PeriodSample {
  Complex tau1, tau2;
  Complex dtau1, dtau2;
  Complex d2tau1, d2tau2;
  Scalar pairing = 0;  // Im(conj(tau1) tau2)
};

// Principal branch; winding adds 2*pi*i*winding to log z.
PeriodSample generators(const FiberModel& model, Complex z, int winding = 0);
// Same evaluation from log z directly, for points too deep to represent z.
PeriodSample generators_log(const FiberModel& model, Complex log_z);
// Table presentation in z; differs from generators() only for I_b*.
PeriodSample table_generators(const FiberModel& model, Complex z, int winding = 0);

int multiplicity_N(const FiberModel& model);

struct ConeAngles {
  Scalar incomplete;  // div(Omega) = 0
  Scalar complete;    // div(Omega) = -D; 0 encodes a half-line
};
ConeAngles cone_angles(const FiberModel& model);
ConeAngles cone_angles(const KodairaType& t);

// Exponent q with g = sqrt(alpha) k z^-q in the native base coordinate.
int pole_order(const FiberModel& model);
Complex volume_density_g(const FiberModel& model, Complex z);
Complex volume_density_dg(const FiberModel& model, Complex z);

// max |T(winding 1) - T A| relative to max |T|.
Scalar monodromy_consistency(const FiberModel& model, Complex z);

// One row of the Kodaira table.
struct TableRow {
  std::string j0;
  std::string multiplicity;
  int sign;  // +1 or -1 in front of the matrix
  std::string matrix;
  Order order;
  KodairaType type;
  std::string generators;
  int N;
  Scalar theta_incomplete;
  Scalar theta_complete;
  std::string theta_incomplete_text;
  std::string theta_complete_text;
};
const std::vector<TableRow>& table_registry();

}  // namespace sflab
