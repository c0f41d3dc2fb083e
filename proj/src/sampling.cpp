#include "grw/sampling.hpp"

#include "grw/error.hpp"
#include "grw/random.hpp"

namespace grw::sampling {

std::vector<std::vector<double>> grid(const Box& box, std::span<const int> counts) {
  const int m = box.dim();
  if (static_cast<int>(counts.size()) != m) throw InvalidArgument("grid needs one count per axis");
  for (int c : counts)
    if (c < 1) throw InvalidArgument("grid counts must be positive");
  auto coord = [&](int i, int k) {
    if (counts[i] == 1) return 0.5 * (box.lo[i] + box.hi[i]);
    return box.lo[i] + (box.hi[i] - box.lo[i]) * k / (counts[i] - 1);
  };
  std::vector<std::vector<double>> pts;
  std::vector<int> idx(m, 0);
  while (true) {
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) x[i] = coord(i, idx[i]);
    pts.push_back(std::move(x));
    int k = m - 1;
    while (k >= 0 && ++idx[k] == counts[k]) idx[k--] = 0;
    if (k < 0) break;
  }
  return pts;
}

std::vector<std::vector<double>> grid(const Box& box, int per_axis) {
  const std::vector<int> counts(box.dim(), per_axis);
  return grid(box, counts);
}

std::vector<std::vector<double>> random(const Box& box, int count, std::uint64_t seed) {
  if (count < 0) throw InvalidArgument("sample count must be non-negative");
  Rng rng(seed);
  std::vector<std::vector<double>> pts(count, std::vector<double>(box.dim()));
  for (auto& x : pts)
    for (int i = 0; i < box.dim(); ++i) x[i] = rng.uniform(box.lo[i], box.hi[i]);
  return pts;
}

}  // namespace grw::sampling
