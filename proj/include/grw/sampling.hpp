#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "grw/domain.hpp"

namespace grw::sampling {

/// Tensor grid over the box with counts[i] points on axis i (endpoints
/// included; a count of 1 takes the midpoint). The last axis varies fastest.
std::vector<std::vector<double>> grid(const Box& box, std::span<const int> counts);
std::vector<std::vector<double>> grid(const Box& box, int per_axis);

/// `count` points uniform in the box, reproducible from the seed.
std::vector<std::vector<double>> random(const Box& box, int count, std::uint64_t seed);

}  // namespace grw::sampling
