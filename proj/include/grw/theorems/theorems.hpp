#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grw/hypersurface/graph.hpp"
#include "grw/identities/identities.hpp"

namespace grw::theorems {

enum class Status { holds_on_sample, fails_at_point, not_checkable };

/// holds-on-sample, fails-at-point, not-checkable-at-desk-scale.
std::string status_name(Status s);

struct Witness {
  std::vector<double> x;
  double tau = 0;
  double value = 0;
};

/// Cap on witnesses stored per condition; `violations` counts all of them.
inline constexpr int kMaxWitnesses = 5;

struct Condition {
  std::string name;
  std::string role = "hypothesis";  // hypothesis or conclusion
  Status status = Status::holds_on_sample;
  std::vector<Witness> witnesses;
  int violations = 0;
  std::optional<double> value;      // sample aggregate (minimum, maximum or estimate)
  std::string detail;
};

struct HypothesisReport {
  std::string theorem;
  std::string hypersurface;
  std::string sample;  // description of the sample the verdicts refer to
  std::vector<Condition> conditions;
  std::string verdict;

  const Condition& condition(const std::string& name) const;  // throws if absent
};

/// Chart points with a human-readable description ("grid 10x10 on [-1,1]^2").
struct Sample {
  std::vector<std::vector<double>> points;
  std::string description;
};

using hypersurface::GraphHypersurface;
using identities::Tolerances;

HypothesisReport thm1_hypotheses(const GraphHypersurface& M, const Sample& sample, const Tolerances& tol = {});

/// m (m - 2); m must be at least 2.
long long thm2_bound(int m);
/// Positive (0 < H <= rho'/rho) and reversed (rho'/rho <= H < 0) gates, each
/// with its own bound condition; a bound is vacuous unless its gate holds on
/// the whole sample.
HypothesisReport check_angle_bound(const GraphHypersurface& M, const Sample& sample, int m, const Tolerances& tol = {});

/// (log rho)'' <= 0 over the times and nonnegative sampled sectional curvature
/// over the chart points; with a hypersurface, also H rho'(tau) <= 0 and the
/// inf rho'^2/rho^2 estimate.
HypothesisReport teoale_hypotheses(const ambient::Spacetime& S, std::span<const double> times,
                                   std::span<const std::vector<double>> xs, const GraphHypersurface* M = nullptr,
                                   const Tolerances& tol = {});

struct SliceVerdict {
  bool is_slice = false;
  double max_sinh = 0;     // max sinh(phi) over the sample
  double tau_spread = 0;   // max |tau - mean tau|
  std::optional<Witness> witness;
  std::string detail;
};

/// Angle criterion: max sinh(phi) < tol. Time criterion: max |tau - mean| < tol.
/// Throws ConsistencyFault when one criterion holds and the other is violated
/// decisively (by more than kSliceBand times its tolerance, the time criterion
/// scaled by the sample's metric diameter).
inline constexpr double kSliceTolerance = 1e-9;
inline constexpr double kSliceBand = 1e3;
SliceVerdict slice_classifier(const GraphHypersurface& M, const Sample& sample, double tol = kSliceTolerance);

/// max |rho'(tau) sinh^2(phi)| over the sample.
HypothesisReport support_conclusion(const GraphHypersurface& M, const Sample& sample, const Tolerances& tol = {});

/// Sample maximum of tau; the global supremum is estimated only.
HypothesisReport bounded_future_check(const GraphHypersurface& M, const Sample& sample);

/// Maxima of tau on boxes scaled by each factor (grid with `per_axis` points);
/// strictly increasing maxima are flagged as an unbounded trend.
struct FutureTrend {
  std::vector<double> scales;
  std::vector<double> maxima;
  bool unbounded_trend = false;
};
FutureTrend bounded_future_trend(const GraphHypersurface& M, const Box& box, std::span<const double> scales,
                                 int per_axis = 21);

/// Theorem ids accepted from configs.
const std::vector<std::string>& theorem_ids();
bool is_theorem(const std::string& id);

/// Hypotheses and checkable conclusions of the named theorem or corollary.
HypothesisReport check_theorem(const std::string& id, const GraphHypersurface& M, const Sample& sample,
                               const Tolerances& tol = {});

}  // namespace grw::theorems
