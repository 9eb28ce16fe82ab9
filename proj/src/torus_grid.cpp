#include "sflab/torus_grid.hpp"

#include <cmath>

namespace sflab {

TorusGrid::TorusGrid(int m, int n, Scalar fill) : m_(m), n_(n) {
  if (m != 1 && m != 2) throw InputError("complex dimension m must be 1 or 2");
  if (n < 4 || (n & (n - 1)) != 0) throw InputError("grid size n must be a power of two >= 4");
  std::size_t total = 1;
  for (int a = dims() - 1; a >= 0; --a) {
    strides_[a] = total;
    total *= static_cast<std::size_t>(n);
  }
  data_.assign(total, fill);
}

std::size_t TorusGrid::shift(std::size_t idx, int axis, int delta) const {
  const std::size_t s = strides_[axis];
  const int i = static_cast<int>((idx / s) % n_);
  const int j = ((i + delta) % n_ + n_) % n_;
  return idx + (static_cast<std::ptrdiff_t>(j) - i) * static_cast<std::ptrdiff_t>(s);
}

std::array<int, 4> TorusGrid::multi_index(std::size_t idx) const {
  std::array<int, 4> out{};
  for (int a = 0; a < dims(); ++a) out[a] = static_cast<int>((idx / strides_[a]) % n_);
  return out;
}

std::array<Scalar, 4> TorusGrid::coords(std::size_t idx) const {
  const auto mi = multi_index(idx);
  std::array<Scalar, 4> x{};
  for (int a = 0; a < dims(); ++a) x[a] = mi[a] * h();
  return x;
}

Scalar TorusGrid::sum() const {
  // Pairwise summation keeps the reduction order fixed and the error small.
  std::vector<Scalar> buf(data_);
  std::size_t len = buf.size();
  while (len > 1) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) buf[i] = buf[2 * i] + buf[2 * i + 1];
    if (len % 2) buf[half] = buf[len - 1];
    len = half + len % 2;
  }
  return len ? buf[0] : 0.0;
}

Scalar TorusGrid::max_abs() const {
  Scalar m = 0;
  for (Scalar v : data_) m = std::max(m, std::abs(v));
  return m;
}

void TorusGrid::subtract_mean() {
  const Scalar c = mean();
  for (Scalar& v : data_) v -= c;
}

TorusGrid TorusGrid::translated(int axis, int delta) const {
  TorusGrid out(*this);
  for (std::size_t i = 0; i < size(); ++i) out.data_[shift(i, axis, delta)] = data_[i];
  return out;
}

}  // namespace sflab
