#pragma once

#include <string>

#include "ttcross/index_sets.hpp"
#include "ttcross/dense_tensor.hpp"
#include "ttcross/tt.hpp"

namespace ttcross {

/// 17-significant-digit text form used by every writer (round-trips doubles).
std::string format_double(double x);

// ".dt": header line `dims: d1 d2 ... dN`, then prod(dims) whitespace-
// separated decimal floats in column-major flat order.
void write_dt(const DenseTensor& t, const std::string& path);
DenseTensor read_dt(const std::string& path);

// ".tt": header `N`, then per core a line `r_{j-1} d_j r_j` followed by the
// flat column-major core data.
void write_tt(const TTTensor& g, const std::string& path);
TTTensor read_tt(const std::string& path);

// ".sets": interpolation sets as text, one member per line.
void write_sets(const NestedIndexSets& sets, const std::string& path);
NestedIndexSets read_sets(const std::string& path);

}  // namespace ttcross
