#include "grw/jets/fd.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "grw/error.hpp"

namespace grw::jets {

namespace {

using Stencil = std::vector<std::pair<int, double>>;

Stencil stencil_for(int order, double h) {
  switch (order) {
    case 0:
      return {{0, 1.0}};
    case 1:
      return {{-1, -0.5 / h}, {1, 0.5 / h}};
    case 2:
      return {{-1, 1.0 / (h * h)}, {0, -2.0 / (h * h)}, {1, 1.0 / (h * h)}};
    case 3: {
      const double h3 = h * h * h;
      return {{-2, -0.5 / h3}, {-1, 1.0 / h3}, {1, -1.0 / h3}, {2, 0.5 / h3}};
    }
    default:
      throw InvalidArgument("finite-difference order above 3");
  }
}

}  // namespace

double fd_derivative(const ScalarField& f, std::span<const double> point, const MultiIndex& idx, double h) {
  const int vars = static_cast<int>(point.size());
  if (idx.vars != vars) throw InvalidArgument("multi-index dimension does not match the point");
  if (idx.degree() > kMaxOrder) throw InvalidArgument("finite-difference degree above 3");
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");

  std::vector<Stencil> axes;
  axes.reserve(vars);
  for (int k = 0; k < vars; ++k) axes.push_back(stencil_for(idx.exponents[k], h));

  std::vector<double> probe(point.begin(), point.end());
  std::vector<std::size_t> cursor(vars, 0);
  double sum = 0.0;
  while (true) {
    double weight = 1.0;
    for (int k = 0; k < vars; ++k) {
      const auto& [offset, w] = axes[k][cursor[k]];
      probe[k] = point[k] + offset * h;
      weight *= w;
    }
    double value = 0.0;
    try {
      value = f(probe);
    } catch (const Error& e) {
      throw DomainError(std::string("finite-difference stencil left the domain: ") + e.what());
    }
    if (!std::isfinite(value)) throw DomainError("finite-difference stencil produced a non-finite value");
    sum += weight * value;

    int k = 0;
    while (k < vars && ++cursor[k] == axes[k].size()) cursor[k++] = 0;
    if (k == vars) break;
  }
  return sum;
}

}  // namespace grw::jets
