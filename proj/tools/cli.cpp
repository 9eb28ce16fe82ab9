#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "sflab/acceptance.hpp"
#include "sflab/asymptotics.hpp"
#include "sflab/curvature.hpp"
#include "sflab/fiber_models.hpp"
#include "sflab/fit.hpp"
#include "sflab/grid_io.hpp"
#include "sflab/ma_lab.hpp"
#include "sflab/model_io.hpp"
#include "sflab/semiflat.hpp"
#include "sflab/sl2z.hpp"
#include "sflab/sobolev.hpp"

namespace sflab::cli {

namespace {

using json = nlohmann::ordered_json;
using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

void write_cell(std::ostream& os, const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    if (std::isnan(*d))
      os << "nan";
    else
      os << *d;
  } else if (const long long* i = std::get_if<long long>(&c)) {
    os << *i;
  } else {
    const std::string& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) {
      os << s;
    } else {
      os << '"';
      for (char ch : s) os << (ch == '"' ? "\"\"" : std::string(1, ch));
      os << '"';
    }
  }
}

json cell_json(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  if (const long long* i = std::get_if<long long>(&c)) return json(*i);
  return json(std::get<std::string>(c));
}

void emit(std::ostream& os, const Table& t, const std::string& format) {
  if (format == "json") {
    json arr = json::array();
    for (const auto& row : t.rows) {
      json o;
      for (std::size_t k = 0; k < t.header.size(); ++k) o[t.header[k]] = cell_json(row[k]);
      arr.push_back(o);
    }
    os << arr.dump(2) << '\n';
    return;
  }
  os << std::setprecision(17);
  for (std::size_t k = 0; k < t.header.size(); ++k) os << (k ? "," : "") << t.header[k];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ',';
      write_cell(os, row[k]);
    }
    os << '\n';
  }
}

std::string order_text(const Order& o) { return order_to_string(o); }

json order_json(const Order& o) { return o ? json(*o) : json("inf"); }

json matrix_json(const IntMatrix2& m) { return json::array({json::array({m.a(), m.b()}), json::array({m.c(), m.d()})}); }

Complex parse_complex(const std::string& text) {
  std::string s = text;
  for (char& ch : s)
    if (ch == ',') ch = ' ';
  std::istringstream is(s);
  double re = 0, im = 0;
  if (!(is >> re)) throw InputError("expected a complex number 're,im', got '" + text + "'");
  if (!(is >> im)) im = 0;
  std::string rest;
  if (is >> rest) throw InputError("expected a complex number 're,im', got '" + text + "'");
  return {re, im};
}

struct Global {
  std::string out;
  std::string format = "csv";
  bool check = false;
  std::uint64_t seed = AcceptanceOptions{}.seed;
  int threads = 1;
};

// Writes to --out when given, else to the console stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InputError("cannot write '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& operator()() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

// ---------------------------------------------------------------- commands

int cmd_classify(const std::vector<long long>& e, std::ostream& os) {
  if (e.size() != 4) throw InputError("classify needs four entries a b c d");
  const IntMatrix2 A(e[0], e[1], e[2], e[3]);
  const Classification c = classify(A);
  const InvariantLattice inv = invariant_vector_rank(A);
  json j;
  j["matrix"] = matrix_json(A);
  j["type"] = c.kodaira_type.name();
  j["order"] = order_json(order(A));
  j["conjugator"] = c.conjugator ? matrix_json(*c.conjugator) : json(nullptr);
  j["invariant_rank"] = inv.rank;
  j["bad_cycles"] = inv.rank;
  if (c.kodaira_type.has_b()) j["euler_number"] = euler_number(c.kodaira_type);
  os << j.dump(2) << '\n';
  return kOk;
}

int cmd_table(const std::string& filter, const Global& g, std::ostream& os) {
  Table t{{"j0", "multiplicity", "sign", "matrix", "type", "order", "generators", "N", "theta_incomplete",
           "theta_complete", "theta_incomplete_value", "theta_complete_value"},
          {}};
  for (const TableRow& r : table_registry()) {
    if (!filter.empty() && r.type.name() != filter) continue;
    t.rows.push_back({r.j0, r.multiplicity, static_cast<long long>(r.sign), r.matrix, r.type.name(),
                      order_text(r.order), r.generators, static_cast<long long>(r.N), r.theta_incomplete_text,
                      r.theta_complete_text, r.theta_incomplete, r.theta_complete});
  }
  if (!filter.empty() && t.rows.empty()) throw InputError("no table row has type '" + filter + "'");
  emit(os, t, g.format);
  return kOk;
}

int cmd_fiber_info(const std::string& model_path, const std::string& z_text, std::ostream& os) {
  const FiberModel model = load_model(model_path);
  const IntMatrix2 R = representative(model.type);
  const ConeAngles ca = cone_angles(model);
  json j;
  j["model"] = model.describe();
  j["type"] = model.type.name();
  j["monodromy"] = matrix_json(R);
  j["order"] = order_json(order(R));
  j["N"] = multiplicity_N(model);
  j["pole_order"] = pole_order(model);
  j["coordinate"] = model.uses_u_coordinate() ? "u (z = u^2)" : "z";
  j["theta_incomplete"] = ca.incomplete;
  j["theta_complete"] = ca.complete;
  j["theta"] = model.pole == PoleFlag::Zero ? ca.incomplete : ca.complete;
  j["invariant_rank"] = invariant_vector_rank(R).rank;
  if (model.type.has_b()) j["euler_number"] = euler_number(model.type);
  const Complex z = parse_complex(z_text);
  const FiberFlatData f = fiber_flat_data(model, z);
  json fiber;
  fiber["z"] = json::array({z.real(), z.imag()});
  fiber["v1"] = json::array({f.v1.real(), f.v1.imag()});
  fiber["v2"] = json::array({f.v2.real(), f.v2.imag()});
  fiber["area"] = f.area;
  fiber["shortest_vector"] = f.shortest_vector;
  fiber["diameter_proxy"] = f.diameter_proxy;
  fiber["monodromy_consistency"] = monodromy_consistency(model, z);
  j["fiber"] = fiber;
  os << j.dump(2) << '\n';
  return kOk;
}

int cmd_metric_eval(const std::string& model_path, const std::string& z_text, const std::string& w_text,
                    bool with_curvature, std::ostream& os) {
  const FiberModel model = load_model(model_path);
  const Complex z = parse_complex(z_text), w = parse_complex(w_text);
  const MetricPoint p = metric_at(model, z, w);
  json j;
  j["z"] = json::array({z.real(), z.imag()});
  j["w"] = json::array({w.real(), w.imag()});
  j["h_zz"] = p.matrix.h_zz;
  j["h_ww"] = p.matrix.h_ww;
  j["h_zw"] = json::array({p.matrix.h_zw.real(), p.matrix.h_zw.imag()});
  j["det"] = p.matrix.det();
  j["A"] = p.A_coeff;
  j["B"] = p.B_coeff;
  j["gamma"] = json::array({p.gamma.real(), p.gamma.imag()});
  j["g"] = json::array({p.g.real(), p.g.imag()});
  j["kahler_residual"] = kahler_residual(model, z, w);
  j["kahler_scale"] = kahler_scale(model, z, w);
  if (with_curvature) {
    j["theta_norm_sq"] = theta_norm_sq(model, z, w);
    j["curvature_scale"] = curvature_scale(model, z);
  }
  os << j.dump(2) << '\n';
  return kOk;
}

struct ScanOutcome {
  Table table;
  bool ok = true;
  std::string message;
};

ScanOutcome scan_curvature(const FiberModel& model, const std::vector<double>& radii) {
  ScanOutcome s;
  s.table.header = {"r", "z_abs", "theta_sq", "target", "ratio"};
  const auto rows = curvature_decay_scan(model, radii);
  for (const CurvatureSample& c : rows) {
    const double r = std::abs(c.z);
    const double zabs = model.uses_u_coordinate() ? r * r : r;
    s.table.rows.push_back({r, zabs, c.theta_norm_sq, c.target, c.ratio});
  }
  const double last = rows.back().ratio;
  if (rows.back().target == 0) {
    s.message = "no closed-form curvature target for this model";
  } else {
    s.ok = std::abs(last - 1.0) <= 0.15;
    s.message = "last ratio " + std::to_string(last) + " (tolerance 0.15)";
  }
  return s;
}

ScanOutcome scan_cone_angle(const FiberModel& model, const std::vector<double>& radii) {
  ScanOutcome s;
  s.table.header = {"r", "theta", "target", "ratio"};
  const BaseMetric base(model);
  const ConeAngles ca = cone_angles(model);
  const double target = model.pole == PoleFlag::Zero ? ca.incomplete : ca.complete;
  double theta = 0;
  for (double r : radii) {
    theta = cone_angle_numeric(base, r);
    s.table.rows.push_back({r, theta, target, target > 0 ? theta / target : std::nan("")});
  }
  s.ok = target > 0 ? std::abs(theta / target - 1.0) <= 0.02 : theta == 0.0;
  s.message = "last theta " + std::to_string(theta) + " vs " + std::to_string(target) + " (2%)";
  return s;
}

ScanOutcome scan_volume(const FiberModel& model, const std::vector<double>& radii) {
  ScanOutcome s;
  s.table.header = {"s", "ell", "volume"};
  const BaseMetric base(model);
  std::vector<double> vol;
  for (double r : radii) {
    vol.push_back(ball_volume(base, r));
    s.table.rows.push_back({r, ell_at_distance(base, r), vol.back()});
  }
  const GrowthFit fit = fit_power_law(radii, vol);
  s.ok = fit.ok();
  s.message = "volume exponent " + std::to_string(fit.exponent) + " R^2 " + std::to_string(fit.r_squared);
  return s;
}

ScanOutcome scan_injectivity(const FiberModel& model, const std::vector<double>& radii) {
  ScanOutcome s;
  s.table.header = {"s", "ell", "shortest", "diameter"};
  const InjectivityScan scan = injectivity_proxy_scan(model, radii);
  for (std::size_t i = 0; i < radii.size(); ++i)
    s.table.rows.push_back({radii[i], scan.ell[i], scan.shortest.samples[i].second, scan.diameter.samples[i].second});
  s.ok = scan.shortest.ok() && scan.diameter.ok();
  s.message = "shortest exponent " + std::to_string(scan.shortest.exponent) +
              (scan.against_log_r ? " (against log r)" : " (against r)") + ", diameter exponent " +
              std::to_string(scan.diameter.exponent);
  return s;
}

ScanOutcome scan_alh(const FiberModel& model, const std::vector<double>& t) {
  ScanOutcome s;
  s.table.header = {"t", "deviation", "rate", "target_rate", "mu", "circle_length", "circle_target"};
  const AlhScan a = alh_decay(model, t);
  for (std::size_t i = 0; i < a.t.size(); ++i)
    s.table.rows.push_back({a.t[i], a.deviation[i], a.rate, a.target_rate, a.mu, a.circle_length, a.circle_target});
  s.ok = std::isfinite(a.rate) && std::abs(a.rate / a.target_rate - 1.0) <= 0.05;
  s.message = "rate " + std::to_string(a.rate) + " vs sqrt(eps)/mu " + std::to_string(a.target_rate) + " (5%)";
  return s;
}

int cmd_scan(const std::string& kind, const std::string& model_path, const std::string& radii_spec, const Global& g,
             std::ostream& os, std::ostream& err) {
  const FiberModel model = load_model(model_path);
  std::vector<double> radii;
  if (!radii_spec.empty()) {
    radii = parse_radii(radii_spec);
  } else if (kind == "curvature") {
    radii = log_space(1e-12, 1e-6, 16);
  } else if (kind == "cone-angle") {
    radii = log_space(1e-2, 1e-8, 16);
  } else if (kind == "volume" || kind == "inj") {
    radii = log_space(1e2, 1e6, 16);
  }
  ScanOutcome s;
  if (kind == "curvature")
    s = scan_curvature(model, radii);
  else if (kind == "cone-angle")
    s = scan_cone_angle(model, radii);
  else if (kind == "volume")
    s = scan_volume(model, radii);
  else if (kind == "inj")
    s = scan_injectivity(model, radii);
  else if (kind == "alh")
    s = scan_alh(model, radii);
  else
    throw InputError("unknown scan kind '" + kind + "'");
  Sink sink(g.out, os);
  emit(sink(), s.table, g.format);
  if (g.check) {
    err << (s.ok ? "check passed: " : "check FAILED: ") << s.message << '\n';
    return s.ok ? kOk : kCheckFailed;
  }
  return kOk;
}

struct MaArgs {
  std::string problem;
  std::optional<double> epsilon;
  double tol = 1e-10;
  int max_iters = 50;
  bool manufactured = false;
  int m = 2;
  std::vector<int> sizes{8, 16, 32};
  std::string initial;
};

int cmd_ma(const MaArgs& a, const Global& g, std::ostream& os, std::ostream& err) {
  if (a.manufactured) {
    const ConvergenceStudy study = manufactured_convergence(a.m, a.sizes, a.tol);
    json j;
    j["m"] = a.m;
    j["n"] = study.n;
    j["error"] = study.error;
    j["order"] = study.order;
    json sols = json::array();
    for (const Solution& s : study.solutions) sols.push_back(json::parse(solution_summary_json(s)));
    j["solutions"] = sols;
    os << j.dump(2) << '\n';
    if (g.check) {
      const bool ok = std::abs(study.order - 2.0) <= 0.2;
      err << (ok ? "check passed" : "check FAILED") << ": order " << study.order << " (2 +- 0.2)\n";
      return ok ? kOk : kCheckFailed;
    }
    return kOk;
  }
  if (a.problem.empty()) throw InputError("ma-solve needs --problem FILE or --manufactured");
  TorusGrid f = read_grid(a.problem);
  const double eps = a.epsilon.value_or(0.0);
  if (eps < 0) throw InputError("--epsilon must be non-negative");
  std::optional<TorusGrid> init;
  if (!a.initial.empty()) {
    init = read_grid(a.initial);
    if (!init->same_shape(f)) throw InputError("initial guess and problem have different shapes");
  }
  double shift = 0;
  if (eps == 0) {
    const Normalized nf = normalize_compatibility(f);
    f = nf.f;
    shift = nf.shift;
  }
  TorusProblem p{f, eps, a.tol, a.max_iters};
  const Solution sol = eps > 0 ? solve_perturbed(p, init) : solve_cma(p, init);
  json j = json::parse(solution_summary_json(sol));
  j["epsilon"] = eps;
  j["compatibility_shift"] = shift;
  j["mass_identity_defect"] = mass_identity_defect(sol.u);
  j["f_max_abs"] = f.max_abs();
  bool ok = sol.residual_inf <= a.tol && sol.positivity_margin > 0;
  if (eps > 0) {
    const double bound = f.max_abs() / eps + a.tol;
    j["max_principle_bound"] = bound;
    j["bound_ok"] = sol.u.max_abs() <= bound;
    ok = ok && sol.u.max_abs() <= bound;
  }
  if (!g.out.empty()) {
    const bool binary = g.out.size() < 4 || g.out.substr(g.out.size() - 4) != ".csv";
    if (binary)
      write_grid_binary(g.out, sol.u);
    else
      write_grid_csv(g.out, sol.u);
    std::ofstream side(g.out + ".json");
    if (!side) throw InputError("cannot write '" + g.out + ".json'");
    side << j.dump(2) << '\n';
  }
  os << j.dump(2) << '\n';
  if (g.check) {
    err << (ok ? "check passed" : "check FAILED") << '\n';
    return ok ? kOk : kCheckFailed;
  }
  return kOk;
}

int cmd_sobolev(int beta, double alpha, const std::string& dilation_spec, const Global& g, std::ostream& os,
                std::ostream& err) {
  std::vector<double> dil;
  if (!dilation_spec.empty()) dil = parse_radii(dilation_spec);
  const SobolevReport rep = sobolev_probe(beta, alpha, default_profiles(), dil);
  Sink sink(g.out, os);
  if (g.format == "json") {
    json j;
    j["beta"] = rep.beta;
    j["alpha"] = rep.alpha;
    j["weight_exponent"] = rep.weight_exponent;
    j["sup_ratio"] = rep.sup_ratio;
    j["dilation_factor"] = rep.dilation_factor;
    j["excluded"] = rep.excluded;
    json rows = json::array();
    for (const SobolevRow& r : rep.rows)
      rows.push_back({{"profile", r.profile},
                      {"lambda", r.lambda},
                      {"lhs", r.lhs},
                      {"rhs", r.rhs},
                      {"ratio", r.excluded ? json(nullptr) : json(r.ratio)},
                      {"excluded", r.excluded}});
    j["rows"] = rows;
    sink() << j.dump(2) << '\n';
  } else {
    Table t{{"profile", "lambda", "lhs", "rhs", "ratio", "excluded"}, {}};
    for (const SobolevRow& r : rep.rows)
      t.rows.push_back({r.profile, r.lambda, r.lhs, r.rhs, r.excluded ? std::nan("") : r.ratio,
                        static_cast<long long>(r.excluded)});
    emit(sink(), t, "csv");
  }
  if (g.check) {
    const bool ok = std::isfinite(rep.sup_ratio) && rep.dilation_factor <= 4.0;
    err << (ok ? "check passed" : "check FAILED") << ": dilation factor " << rep.dilation_factor << " (<= 4)\n";
    return ok ? kOk : kCheckFailed;
  }
  return kOk;
}

std::set<int> parse_only(const std::string& text) {
  std::set<int> ids;
  if (text.empty()) return ids;
  std::string s = text;
  for (char& ch : s)
    if (ch == ',') ch = ' ';
  std::istringstream is(s);
  int id = 0;
  while (is >> id) {
    if (id < 1 || id > kCriterionCount) throw InputError("criterion ids run from 1 to 13");
    ids.insert(id);
  }
  if (!is.eof()) throw InputError("bad --only list '" + text + "'");
  return ids;
}

int cmd_verify(bool as_json, const std::string& only, const Global& g, std::ostream& os) {
  AcceptanceOptions opt;
  opt.seed = g.seed;
  opt.only = parse_only(only);
  const std::vector<CriterionResult> results = run_acceptance(opt);
  bool all = true;
  for (const CriterionResult& r : results) all = all && r.pass;
  Sink sink(g.out, os);
  if (as_json || g.format == "json") {
    sink() << results_json(results) << '\n';
  } else {
    for (const CriterionResult& r : results) sink() << format_result(r) << '\n';
    sink() << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << '\n';
  }
  return all ? kOk : kCheckFailed;
}

}  // namespace

std::vector<double> parse_radii(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4) throw InputError("radii must look like start:stop:count:log|lin, got '" + spec + "'");
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw InputError("bad number '" + s + "' in radii '" + spec + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw InputError("bad number '" + s + "' in radii '" + spec + "'");
    return v;
  };
  const double a = num(parts[0]), b = num(parts[1]), n = num(parts[2]);
  if (n != std::floor(n) || n < 2 || n > 100000) throw InputError("radii count must be an integer >= 2");
  if (a == b) throw InputError("radii must be strictly monotone");
  if (parts[3] == "log") {
    if (!(a > 0 && b > 0)) throw InputError("log-spaced radii must be positive");
    return log_space(a, b, static_cast<int>(n));
  }
  if (parts[3] == "lin") return lin_space(a, b, static_cast<int>(n));
  throw InputError("radii spacing must be log or lin");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical lab for semi-flat metrics near Kodaira fibers", "sflab"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--check", g.check, "exit 1 when the built-in tolerance check fails");
  app.add_option("--seed", g.seed, "seed for randomized sampling");
  app.add_option("--threads", g.threads, "worker threads (the library runs single-threaded)")
      ->check(CLI::PositiveNumber);

  std::vector<long long> entries;
  auto* classify_cmd = app.add_subcommand("classify", "classify an SL(2,Z) monodromy a b c d");
  classify_cmd->add_option("entries", entries, "a b c d")->expected(4)->required();

  std::string type_filter;
  auto* table_cmd = app.add_subcommand("table", "dump the Kodaira data table");
  table_cmd->add_option("--type", type_filter, "only rows of this type");

  std::string model_path, z_text = "0.1,0", w_text = "0,0";
  bool with_curv = false;
  auto* info_cmd = app.add_subcommand("fiber-info", "monodromy, cone angles and flat fiber data of a model");
  info_cmd->add_option("--model", model_path, "model file")->required();
  info_cmd->add_option("--z", z_text, "base point re,im");

  auto* eval_cmd = app.add_subcommand("metric-eval", "semi-flat metric at a point");
  eval_cmd->add_option("--model", model_path, "model file")->required();
  eval_cmd->add_option("--z", z_text, "base point re,im");
  eval_cmd->add_option("--w", w_text, "fiber point re,im");
  eval_cmd->add_flag("--curvature", with_curv, "also report |Theta|^2");

  std::string kind, radii_spec;
  auto* scan_cmd = app.add_subcommand("scan", "radial scans: curvature, volume, cone-angle, inj, alh");
  scan_cmd->add_option("kind", kind, "scan kind")
      ->required()
      ->check(CLI::IsMember({"curvature", "volume", "cone-angle", "inj", "alh"}));
  scan_cmd->add_option("--model", model_path, "model file")->required();
  scan_cmd->add_option("--radii", radii_spec, "start:stop:count:log|lin");

  MaArgs ma;
  double eps_value = 0;
  auto* ma_cmd = app.add_subcommand("ma-solve", "complex Monge-Ampere on the flat torus");
  ma_cmd->add_option("--problem", ma.problem, "grid file with f (CMAGRID1 or CSV)");
  auto* eps_opt = ma_cmd->add_option("--epsilon", eps_value, "perturbation eps (0 = unperturbed)");
  ma_cmd->add_option("--tol", ma.tol, "Newton tolerance")->check(CLI::PositiveNumber);
  ma_cmd->add_option("--max-iters", ma.max_iters, "Newton iterations per stage")->check(CLI::PositiveNumber);
  ma_cmd->add_option("--initial", ma.initial, "initial guess grid");
  ma_cmd->add_flag("--manufactured", ma.manufactured, "run the manufactured convergence study");
  ma_cmd->add_option("--m", ma.m, "complex dimension for --manufactured")->check(CLI::IsMember({1, 2}));
  ma_cmd->add_option("--sizes", ma.sizes, "grid sizes for --manufactured")->delimiter(',');

  int beta = 4;
  double alpha = 2;
  std::string dilations;
  auto* sob_cmd = app.add_subcommand("sobolev-probe", "radial probe of the weighted Sobolev inequality");
  sob_cmd->add_option("--beta", beta, "dimension 3 or 4");
  sob_cmd->add_option("--alpha", alpha, "exponent in [1, beta/(beta-2)]");
  sob_cmd->add_option("--dilations", dilations, "start:stop:count:log|lin");

  bool as_json = false;
  std::string only;
  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
  verify_cmd->add_flag("--json", as_json, "machine-readable results");
  verify_cmd->add_option("--only", only, "comma-separated criterion ids");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "sflab: " << e.what() << '\n';
    return e.get_exit_code() == 0 ? kOk : kInputError;
  }
  if (eps_opt->count() > 0) ma.epsilon = eps_value;

  try {
    if (*classify_cmd || *table_cmd || *info_cmd || *eval_cmd) {
      Sink sink(g.out, out);
      if (*classify_cmd) return cmd_classify(entries, sink());
      if (*table_cmd) return cmd_table(type_filter, g, sink());
      if (*info_cmd) return cmd_fiber_info(model_path, z_text, sink());
      return cmd_metric_eval(model_path, z_text, w_text, with_curv, sink());
    }
    if (*scan_cmd) return cmd_scan(kind, model_path, radii_spec, g, out, err);
    if (*ma_cmd) return cmd_ma(ma, g, out, err);
    if (*sob_cmd) return cmd_sobolev(beta, alpha, dilations, g, out, err);
    if (*verify_cmd) return cmd_verify(as_json, only, g, out);
  } catch (const InputError& e) {
    err << "sflab: input error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "sflab: " << e.what() << '\n';
    return kInputError;
  } catch (const std::overflow_error& e) {
    err << "sflab: overflow: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalFailure& e) {
    err << "sflab: numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "sflab: internal error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kInputError;
}

}  // namespace sflab::cli
