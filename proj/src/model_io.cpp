#include "sflab/model_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace sflab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

Scalar to_real(const std::string& key, const std::string& v) {
  Scalar x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
    throw InputError("model key '" + key + "': not a finite number: '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw InputError("model key '" + key + "': not an integer: '" + v + "'");
  return x;
}

const std::set<std::string> kKeys{"type",  "b",       "m",       "epsilon",      "k0_re",       "k0_im",
                                  "pole_flag", "alpha", "tau0_re", "tau0_im", "tau_slope_re", "tau_slope_im"};

}  // namespace

FiberModel parse_model(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("model line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (!kKeys.count(key)) throw InputError("model line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (value.empty()) throw InputError("model key '" + key + "' has no value");
    if (!kv.emplace(key, value).second) throw InputError("model key '" + key + "' given twice");
  }
  if (!kv.count("type")) throw InputError("model file needs a type");

  std::string tname = kv["type"];
  std::optional<long long> b;
  if (kv.count("b")) b = to_int("b", kv["b"]);
  KodairaType type;
  if (tname == "I" || tname == "I*" || tname == "Istar") {
    if (!b) throw InputError("type " + tname + " needs b");
    if (*b < 0) throw InputError("b must be non-negative");
    type = tname == "I" ? KodairaType::I(*b) : KodairaType::Istar(*b);
  } else {
    try {
      type = KodairaType::parse(tname);
    } catch (const std::out_of_range&) {
      throw InputError("b in type '" + tname + "' is out of range");
    }
    if (b && (!type.has_b() || type.b != *b)) throw InputError("b does not agree with type " + tname);
  }

  const PoleFlag pole = [&] {
    if (!kv.count("pole_flag")) return PoleFlag::MinusD;
    const std::string& p = kv["pole_flag"];
    if (p == "zero" || p == "0") return PoleFlag::Zero;
    if (p == "minus-D" || p == "minusD" || p == "-D") return PoleFlag::MinusD;
    throw InputError("pole_flag must be zero or minus-D");
  }();

  FiberModel model = FiberModel::standard(type, pole);
  if (kv.count("m")) {
    const std::string& v = kv["m"];
    if (v == "inf" || v == "infinity") {
      model.m.reset();
    } else {
      const long long mm = to_int("m", v);
      if (mm <= 0 || mm > 1000000) throw InputError("m must be a positive integer or inf");
      model.m = static_cast<int>(mm);
    }
  }
  if (kv.count("epsilon")) model.epsilon = to_real("epsilon", kv["epsilon"]);
  if (kv.count("alpha")) model.alpha = to_real("alpha", kv["alpha"]);
  Complex k0{1.0, 0.0};
  if (kv.count("k0_re")) k0.real(to_real("k0_re", kv["k0_re"]));
  if (kv.count("k0_im")) k0.imag(to_real("k0_im", kv["k0_im"]));
  model.k = {k0};

  const bool has_tau = kv.count("tau0_re") || kv.count("tau0_im") || kv.count("tau_slope_re") || kv.count("tau_slope_im");
  if (has_tau) {
    if (!type.has_b() || type.b != 0) throw InputError("tau keys only apply to I_0 and I_0*");
    Complex tau0{0.0, 1.0}, slope{0.0, 0.0};
    if (kv.count("tau0_re")) tau0.real(to_real("tau0_re", kv["tau0_re"]));
    if (kv.count("tau0_im")) tau0.imag(to_real("tau0_im", kv["tau0_im"]));
    if (kv.count("tau_slope_re")) slope.real(to_real("tau_slope_re", kv["tau_slope_re"]));
    if (kv.count("tau_slope_im")) slope.imag(to_real("tau_slope_im", kv["tau_slope_im"]));
    if (!(tau0.imag() > std::abs(slope))) throw InputError("tau0 + slope z must stay in the upper half plane on |z| < 1");
    model.tau = TauFunction::linear(tau0, slope);
  }
  model.validate();
  return model;
}

FiberModel parse_model_text(const std::string& text) {
  std::istringstream in(text);
  return parse_model(in);
}

FiberModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file '" + path + "'");
  return parse_model(in);
}

}  // namespace sflab
