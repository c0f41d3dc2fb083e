#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grw/hypersurface/graph.hpp"

namespace grw::identities {

/// Named tolerances. Every check name has one, plus a few gates:
/// `decomposition` (clap2 bookkeeping), `cmc` (|grad H| gate of laps) and
/// `hypothesis` (sign checks in the theorems module).
class Tolerances {
 public:
  Tolerances();
  double get(const std::string& name) const;
  /// Throws ConfigError for names outside the table or non-positive values.
  void set(const std::string& name, double value);
  const std::map<std::string, double>& table() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

struct Term {
  std::string name;
  double value;
};

struct IdentityReport {
  std::string check;
  std::string hypersurface;
  std::vector<double> x;
  double tau = 0;
  double lhs = 0, rhs = 0;
  double residual = 0;            // lhs - rhs
  std::optional<double> margin;   // inequalities only
  double scale = 0;               // comparisons divide by max(1, scale)
  bool pass = true;
  bool asserted = true;           // false: informational, never fails a run
  std::vector<Term> breakdown;
  std::string note;

  double relative() const;
  double term(const std::string& name) const;  // throws if absent
};

/// Check names accepted from configs, in canonical order.
const std::vector<std::string>& check_names();
bool is_check(const std::string& name);

/// The documented clap1 -> clap2 rearrangement term; it vanishes identically.
inline constexpr double kDocumentedRearrangement = 0.0;

using hypersurface::GraphHypersurface;
using hypersurface::PointGeometry;

IdentityReport ritn_residual(const GraphHypersurface& M, const PointGeometry& p, const Tolerances& tol = {});
IdentityReport master_identity(const GraphHypersurface& M, const PointGeometry& p, const Tolerances& tol = {});
IdentityReport inequality_chain(const GraphHypersurface& M, const PointGeometry& p, const Tolerances& tol = {});
IdentityReport lemma1_margin(const GraphHypersurface& M, const PointGeometry& p, const Tolerances& tol = {});
IdentityReport sinh_identity_bridge(const GraphHypersurface& M, const PointGeometry& p, const Tolerances& tol = {});

IdentityReport ritn_residual(const GraphHypersurface& M, std::span<const double> x, const Tolerances& tol = {});
IdentityReport master_identity(const GraphHypersurface& M, std::span<const double> x, const Tolerances& tol = {});
IdentityReport inequality_chain(const GraphHypersurface& M, std::span<const double> x, const Tolerances& tol = {});
IdentityReport lemma1_margin(const GraphHypersurface& M, std::span<const double> x, const Tolerances& tol = {});
IdentityReport sinh_identity_bridge(const GraphHypersurface& M, std::span<const double> x, const Tolerances& tol = {});

/// Fiber vectors used to sample the NCC at x: coordinate vectors, their
/// pairwise sums and differences, and N_F when nonzero.
std::vector<std::vector<double>> ncc_probe_vectors(int m, std::span<const double> N_F = {});

/// Run the named checks at one point, computing the frame once. Throws
/// InvalidArgument for unknown names; geometry errors propagate.
std::vector<IdentityReport> evaluate(const GraphHypersurface& M, std::span<const double> x,
                                     std::span<const std::string> checks, const Tolerances& tol = {});

}  // namespace grw::identities
