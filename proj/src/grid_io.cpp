#include "sflab/grid_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace sflab {

namespace {

static_assert(std::endian::native == std::endian::little, "grid files assume a little-endian host");

constexpr char kMagic[8] = {'C', 'M', 'A', 'G', 'R', 'I', 'D', '1'};

bool has_magic(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open grid file '" + path + "'");
  char buf[8] = {};
  in.read(buf, 8);
  return in.gcount() == 8 && std::memcmp(buf, kMagic, 8) == 0;
}

}  // namespace

void write_grid_binary(const std::string& path, const TorusGrid& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write grid file '" + path + "'");
  char header[32] = {};
  std::memcpy(header, kMagic, 8);
  const std::uint32_t m = static_cast<std::uint32_t>(g.m()), n = static_cast<std::uint32_t>(g.n());
  std::memcpy(header + 8, &m, 4);
  std::memcpy(header + 12, &n, 4);
  out.write(header, 32);
  out.write(reinterpret_cast<const char*>(g.values().data()), static_cast<std::streamsize>(g.size() * sizeof(double)));
  if (!out) throw InputError("failed writing grid file '" + path + "'");
}

TorusGrid read_grid_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open grid file '" + path + "'");
  char header[32];
  in.read(header, 32);
  if (in.gcount() != 32 || std::memcmp(header, kMagic, 8) != 0) throw InputError("'" + path + "' is not a CMAGRID1 file");
  std::uint32_t m = 0, n = 0;
  std::memcpy(&m, header + 8, 4);
  std::memcpy(&n, header + 12, 4);
  if (m != 1 && m != 2) throw InputError("grid file has m = " + std::to_string(m));
  if (n < 4 || n > 1024) throw InputError("grid file has n = " + std::to_string(n));
  TorusGrid g(static_cast<int>(m), static_cast<int>(n));
  in.read(reinterpret_cast<char*>(g.values().data()), static_cast<std::streamsize>(g.size() * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != g.size() * sizeof(double)) throw InputError("grid file is truncated");
  if (in.peek() != std::char_traits<char>::eof()) throw InputError("grid file has trailing bytes");
  return g;
}

void write_grid_csv(const std::string& path, const TorusGrid& g) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write grid file '" + path + "'");
  for (int a = 0; a < g.dims(); ++a) out << 'i' << a << ',';
  out << "value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto mi = g.multi_index(i);
    for (int a = 0; a < g.dims(); ++a) out << mi[a] << ',';
    out << g[i] << '\n';
  }
}

TorusGrid read_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open grid file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty grid CSV");
  int dims = 0;
  {
    std::istringstream hs(line);
    std::string cell;
    std::vector<std::string> cols;
    while (std::getline(hs, cell, ',')) cols.push_back(cell);
    dims = static_cast<int>(cols.size()) - 1;
    if ((dims != 2 && dims != 4) || cols.back() != "value") throw InputError("grid CSV header must be i0,...,value");
  }
  std::vector<std::array<long, 4>> idx;
  std::vector<Scalar> vals;
  long nmax = 0;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::array<long, 4> mi{};
    for (int a = 0; a < dims; ++a) {
      if (!std::getline(ls, cell, ',')) throw InputError("grid CSV line " + std::to_string(lineno) + " is short");
      try {
        mi[a] = std::stol(cell);
      } catch (const std::exception&) {
        throw InputError("grid CSV line " + std::to_string(lineno) + ": bad index");
      }
      if (mi[a] < 0) throw InputError("grid CSV line " + std::to_string(lineno) + ": negative index");
      nmax = std::max(nmax, mi[a] + 1);
    }
    if (!std::getline(ls, cell)) throw InputError("grid CSV line " + std::to_string(lineno) + " is short");
    Scalar v = 0;
    try {
      std::size_t used = 0;
      v = std::stod(cell, &used);
      if (used != cell.size()) throw InputError("trailing characters");
    } catch (const std::exception&) {
      throw InputError("grid CSV line " + std::to_string(lineno) + ": bad value");
    }
    idx.push_back(mi);
    vals.push_back(v);
  }
  TorusGrid g(dims / 2, static_cast<int>(nmax));
  if (vals.size() != g.size()) throw InputError("grid CSV does not cover the full grid");
  std::vector<char> seen(g.size(), 0);
  for (std::size_t r = 0; r < vals.size(); ++r) {
    std::size_t k = 0;
    for (int a = 0; a < dims; ++a) k += static_cast<std::size_t>(idx[r][a]) * g.stride(a);
    if (seen[k]) throw InputError("grid CSV repeats a node");
    seen[k] = 1;
    g[k] = vals[r];
  }
  return g;
}

TorusGrid read_grid(const std::string& path) { return has_magic(path) ? read_grid_binary(path) : read_grid_csv(path); }

std::string solution_summary_json(const Solution& s) {
  nlohmann::ordered_json j;
  j["m"] = s.u.m();
  j["n"] = s.u.n();
  j["residual_inf"] = s.residual_inf;
  j["iterations"] = s.iterations;
  j["krylov_iterations"] = s.krylov_iterations;
  j["positivity_margin"] = s.positivity_margin;
  j["trace_min"] = s.trace_min;
  j["epsilon_stages"] = s.epsilon_stages;
  j["u_max_abs"] = s.u.max_abs();
  return j.dump(2);
}

}  // namespace sflab
