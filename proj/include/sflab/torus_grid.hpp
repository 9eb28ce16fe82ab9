#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "sflab/core.hpp"

namespace sflab {

// Real array on the periodic grid (Z/n)^(2m) of the unit cube. Axis 2j is
// Re z_j and axis 2j+1 is Im z_j. Row-major: the last axis is fastest.
class TorusGrid {
 public:
  TorusGrid() = default;
  TorusGrid(int m, int n, Scalar fill = 0.0);

  int m() const { return m_; }
  int n() const { return n_; }
  int dims() const { return 2 * m_; }
  std::size_t size() const { return data_.size(); }
  Scalar h() const { return 1.0 / n_; }

  Scalar& operator[](std::size_t i) { return data_[i]; }
  Scalar operator[](std::size_t i) const { return data_[i]; }
  std::vector<Scalar>& values() { return data_; }
  const std::vector<Scalar>& values() const { return data_; }

  std::size_t stride(int axis) const { return strides_[axis]; }
  // Index of the neighbour of idx moved by delta along axis, with wrap.
  std::size_t shift(std::size_t idx, int axis, int delta) const;
  std::array<int, 4> multi_index(std::size_t idx) const;
  std::array<Scalar, 4> coords(std::size_t idx) const;

  Scalar sum() const;
  Scalar mean() const { return sum() / static_cast<Scalar>(size()); }
  Scalar max_abs() const;
  void subtract_mean();
  // Cyclic translation by one node along axis.
  TorusGrid translated(int axis, int delta) const;

  bool same_shape(const TorusGrid& o) const { return m_ == o.m_ && n_ == o.n_; }

 private:
  int m_ = 1;
  int n_ = 0;
  std::array<std::size_t, 4> strides_{};
  std::vector<Scalar> data_;
};

}  // namespace sflab
