#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "grw/ambient/spacetime.hpp"
#include "grw/hypersurface/graph.hpp"

namespace grw::catalog {

struct CatalogEntry {
  std::string name;
  std::string rho;
  Interval interval;
  std::string description;
  std::vector<double> slice_times;
};

/// minkowski, steady_state, einstein_de_sitter, radiation.
const std::vector<CatalogEntry>& entries();
const CatalogEntry& entry(const std::string& name);

struct Params {
  int m = 2;
  double a = 1.0;  // radiation constant
  // Used by `custom` only.
  std::string rho;
  Interval interval;
  std::optional<fiber::FiberMetric> fiber;
};

/// Named spacetime with a flat fiber of dimension m; `custom` takes rho,
/// interval and fiber from the params.
std::shared_ptr<const ambient::Spacetime> make_named(const std::string& name, const Params& params = {});

/// Default sampling box: [-1, 1]^m clipped to the fiber chart.
Box default_box(const fiber::FiberMetric& fiber);

/// Slice times for a spacetime: the named entry's list, or three interior
/// times derived from I.
std::vector<double> slice_times(const ambient::Spacetime& S);

struct Fixture {
  std::string kind;  // slice, hyperplane, hyperboloid, cubic
  hypersurface::GraphHypersurface graph;
};

/// Random cubic graph u = t_c + sum c_alpha x^alpha (1 <= |alpha| <= 3), scaled
/// so that max |du|_{g_F} <= 0.9 min rho(u) on a grid over `box` and u stays
/// interior to I. Coefficients are printed as shortest round-trip text.
std::string random_cubic(const ambient::Spacetime& S, const Box& box, double t_center, std::uint64_t seed);

/// Slices at three interior times, the hyperplane u = 0 and the hyperboloid
/// u = sqrt(1 + |x|^2) when the host is Minkowski, and five random cubics.
std::vector<Fixture> fixture_hypersurfaces(std::shared_ptr<const ambient::Spacetime> S, const Box& box,
                                           std::uint64_t seed, bool minkowski = false);

}  // namespace grw::catalog
