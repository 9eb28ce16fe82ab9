#pragma once

#include <string>

#include "sflab/ma_lab.hpp"
#include "sflab/torus_grid.hpp"

namespace sflab {

// Binary layout: 32-byte header ("CMAGRID1", uint32 m, uint32 n, 16 zero
// bytes) followed by n^(2m) little-endian doubles in row-major order.
void write_grid_binary(const std::string& path, const TorusGrid& g);
TorusGrid read_grid_binary(const std::string& path);

// CSV: header i0,...,i(2m-1),value then one row per node in storage order.
void write_grid_csv(const std::string& path, const TorusGrid& g);
TorusGrid read_grid_csv(const std::string& path);

// Picks the format from the magic bytes.
TorusGrid read_grid(const std::string& path);

// JSON sidecar with residual_inf, iterations, positivity_margin and friends.
std::string solution_summary_json(const Solution& s);

}  // namespace sflab
