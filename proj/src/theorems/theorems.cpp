#include "grw/theorems/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "grw/catalog/catalog.hpp"
#include "grw/error.hpp"
#include "grw/sampling.hpp"

namespace grw::theorems {

using hypersurface::PointGeometry;

std::string status_name(Status s) {
  switch (s) {
    case Status::holds_on_sample: return "holds-on-sample";
    case Status::fails_at_point: return "fails-at-point";
    case Status::not_checkable: return "not-checkable-at-desk-scale";
  }
  return "?";
}

const Condition& HypothesisReport::condition(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return c;
  throw InvalidArgument("report '" + theorem + "' has no condition '" + name + "'");
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<PointGeometry> frames(const GraphHypersurface& M, const Sample& sample) {
  if (sample.points.empty()) throw InvalidArgument("theorem checks need a nonempty sample");
  std::vector<PointGeometry> out;
  out.reserve(sample.points.size());
  for (const auto& x : sample.points) out.push_back(M.frame_at(x));
  return out;
}

HypothesisReport start(const std::string& id, const GraphHypersurface& M, const Sample& sample) {
  return HypothesisReport{id, M.label(), sample.description, {}, {}};
}

void add_witness(Condition& c, std::vector<double> x, double tau, double value) {
  ++c.violations;
  c.status = Status::fails_at_point;
  if (static_cast<int>(c.witnesses.size()) < kMaxWitnesses) c.witnesses.push_back({std::move(x), tau, value});
}

Condition not_checkable(const std::string& name, const std::string& detail) {
  Condition c;
  c.name = name;
  c.status = Status::not_checkable;
  c.detail = detail;
  return c;
}

// Pointwise condition: value(p) must satisfy ok(value); `value` of the
// condition is the worst value according to `worse`.
template <class Value, class Ok>
Condition pointwise(const std::string& name, const std::vector<PointGeometry>& ps, Value value, Ok ok, bool track_max) {
  Condition c;
  c.name = name;
  double agg = track_max ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  for (const auto& p : ps) {
    const double v = value(p);
    agg = track_max ? std::max(agg, v) : std::min(agg, v);
    if (!ok(v)) add_witness(c, p.x, p.tau, v);
  }
  c.value = agg;
  return c;
}

double ncc_min(const GraphHypersurface& M, const PointGeometry& p) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& v : identities::ncc_probe_vectors(p.m, p.N_F))
    lo = std::min(lo, M.host().ncc_margin(p.tau, p.x, v) / quadratic_form(p.fiber_metric, v, v));
  return lo;
}

Condition ncc_condition(const GraphHypersurface& M, const std::vector<PointGeometry>& ps, const Tolerances& tol) {
  const double t = tol.get("hypothesis");
  auto c = pointwise(
      "NCC", ps, [&](const PointGeometry& p) { return ncc_min(M, p); }, [&](double v) { return v >= -t; }, false);
  c.detail = "minimum of Ric^F(v,v) - m(rho rho'' - rho'^2) g_F(v,v) over unit probe vectors at the sampled points";
  return c;
}

Condition cmc_condition(const std::vector<PointGeometry>& ps, const Tolerances& tol) {
  const double t = tol.get("cmc");
  auto c = pointwise(
      "constant mean curvature", ps, [](const PointGeometry& p) { return p.norm(p.grad_H); },
      [&](double v) { return v < t; }, true);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : ps) {
    lo = std::min(lo, p.H);
    hi = std::max(hi, p.H);
  }
  std::ostringstream os;
  os << "max |grad H| on the sample; H ranges over [" << lo << ", " << hi << "]";
  c.detail = os.str();
  return c;
}

Condition h_rho1_condition(const std::vector<PointGeometry>& ps, const Tolerances& tol) {
  const double t = tol.get("hypothesis");
  auto c = pointwise(
      "H rho'(tau) <= 0", ps, [](const PointGeometry& p) { return p.H * p.rho[1]; },
      [&](double v) { return v <= t; }, true);
  c.detail = "sample maximum of H rho'(tau)";
  return c;
}

Condition inf_rate_condition(const std::vector<PointGeometry>& ps, const Sample& sample, const Tolerances& tol) {
  Condition c;
  c.name = "inf rho'^2/rho^2 > 0";
  double lo = std::numeric_limits<double>::infinity();
  const PointGeometry* arg = nullptr;
  for (const auto& p : ps) {
    const double r = p.rho[1] / p.rho[0];
    if (r * r < lo) {
      lo = r * r;
      arg = &p;
    }
  }
  c.value = lo;
  c.detail = "estimate: minimum over the sample (" + sample.description + "), not an infimum over M";
  if (!(lo > tol.get("hypothesis"))) add_witness(c, arg->x, arg->tau, lo);
  return c;
}

Condition log_concavity_condition(const ambient::Spacetime& S, std::span<const double> times, const Tolerances& tol) {
  Condition c;
  c.name = "(log rho)'' <= 0";
  const double t = tol.get("hypothesis");
  double hi = -std::numeric_limits<double>::infinity();
  for (double s : times) {
    const double v = S.warp().log_second(s);
    hi = std::max(hi, v);
    if (v > t) add_witness(c, {}, s, v);
  }
  c.value = hi;
  c.detail = "maximum over " + std::to_string(times.size()) + " sampled times";
  return c;
}

Condition sectional_condition(const ambient::Spacetime& S, std::span<const std::vector<double>> xs,
                              const Tolerances& tol) {
  Condition c;
  c.name = "fiber sectional curvature >= 0";
  const double t = tol.get("hypothesis");
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& x : xs) {
    const double v = S.fiber().sectional_min_sample(x, 16, 1);
    lo = std::min(lo, v);
    if (v < -t) add_witness(c, x, kNan, v);
  }
  c.value = lo;
  c.detail = "minimum over 16 sampled planes at each chart point";
  return c;
}

Condition flat_fiber_condition(const ambient::Spacetime& S, std::span<const std::vector<double>> xs,
                               const Tolerances& tol) {
  Condition c;
  c.name = "flat fiber";
  double hi = 0.0;
  for (const auto& x : xs) {
    const auto R = S.fiber().riemann(x);
    double v = 0.0;
    const int m = S.m();
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int d = 0; d < m; ++d)
          for (int e = 0; e < m; ++e) v = std::max(v, std::abs(R(a, b, d, e)));
    hi = std::max(hi, v);
    if (v > tol.get("hypothesis")) add_witness(c, x, kNan, v);
  }
  c.value = hi;
  c.detail = "max |R^F| component";
  return c;
}

// t rho'/rho must equal `rate` (or rho'/rho must equal `rate` when `scaled` is false).
Condition warp_condition(const std::string& name, const ambient::Spacetime& S, std::span<const double> times,
                         double rate, bool scaled, const Tolerances& tol) {
  Condition c;
  c.name = name;
  double worst = 0.0;
  for (double t : times) {
    const auto d = S.warp().derivs(t);
    const double v = (scaled ? t : 1.0) * d[1] / d[0];
    worst = std::max(worst, std::abs(v - rate));
    if (std::abs(v - rate) > tol.get("hypothesis")) add_witness(c, {}, t, v);
  }
  c.value = worst;
  c.detail = scaled ? "max |t rho'/rho - rate| over sampled times" : "max |rho'/rho - rate| over sampled times";
  return c;
}

Condition nonpositive_H_condition(const std::vector<PointGeometry>& ps, const Tolerances& tol) {
  const double t = tol.get("hypothesis");
  auto c = pointwise(
      "H <= 0", ps, [](const PointGeometry& p) { return p.H; }, [&](double v) { return v <= t; }, true);
  c.detail = "sample maximum of H";
  return c;
}

Condition support_condition(const std::vector<PointGeometry>& ps, const Tolerances& tol) {
  const double t = tol.get("hypothesis");
  Condition c = pointwise(
      "rho'(tau) sinh^2(phi) = 0", ps, [](const PointGeometry& p) { return std::abs(p.rho[1] * p.sinh2_phi); },
      [&](double v) { return v < t; }, true);
  c.role = "conclusion";
  c.detail = "max |rho'(tau) sinh^2(phi)|; equivalently supp(phi) inside {rho' = 0}";
  return c;
}

Condition completeness() { return not_checkable("complete", "global property of M"); }
Condition volume_growth() {
  return not_checkable("volume growth", "liminf log Vol(B_r) / r^2 < +inf is asymptotic in r");
}

std::vector<double> sample_times(const ambient::Spacetime& S, const std::vector<PointGeometry>& ps) {
  std::vector<double> t;
  for (const auto& p : ps) t.push_back(p.tau);
  for (double s : catalog::slice_times(S))
    if (S.warp().interval().interior(s, ambient::kTimeMargin)) t.push_back(s);
  return t;
}

void finalize(HypothesisReport& r) {
  bool hyp_fail = false, concl_fail = false, unknown = false, any_gate = false, gate_holds = false;
  for (const auto& c : r.conditions) {
    if (c.status == Status::not_checkable) unknown = true;
    if (c.role == "gate") {
      any_gate = true;
      gate_holds = gate_holds || c.status == Status::holds_on_sample;
    } else if (c.status == Status::fails_at_point) {
      (c.role == "conclusion" ? concl_fail : hyp_fail) = true;
    }
  }
  if (any_gate && !gate_holds) hyp_fail = true;
  r.verdict = hyp_fail ? "hypotheses fail on sample" : concl_fail ? "conclusion fails on sample" : "consistent on sample";
  if (unknown) r.verdict += " (global conditions not checkable at desk scale)";
}

void append(HypothesisReport& r, Condition c) { r.conditions.push_back(std::move(c)); }

void angle_conditions(HypothesisReport& r, const GraphHypersurface& M, const std::vector<PointGeometry>& ps, int m,
                      const Tolerances& tol) {
  const double t = tol.get("hypothesis");
  const double bound = static_cast<double>(thm2_bound(m));
  const auto ncc = ncc_condition(M, ps, tol);
  const auto cmc = cmc_condition(ps, tol);
  const bool base = ncc.status == Status::holds_on_sample && cmc.status == Status::holds_on_sample;
  append(r, ncc);
  append(r, cmc);

  struct Case {
    const char* gate;
    const char* bound;
    bool positive;
  };
  for (const Case k : {Case{"gate 0 < H <= rho'/rho", "angle bound (positive case)", true},
                       Case{"gate rho'/rho <= H < 0", "angle bound (reversed case)", false}}) {
    Condition g;
    g.name = k.gate;
    g.role = "gate";
    for (const auto& p : ps) {
      const double rate = p.rho[1] / p.rho[0];
      const bool ok = k.positive ? (p.H > t && p.H - rate <= t) : (p.H < -t && rate - p.H <= t);
      if (!ok) add_witness(g, p.x, p.tau, p.H - rate);
    }
    g.detail = "H - rho'/rho at failing points";
    Condition b;
    b.name = k.bound;
    b.role = "conclusion";
    b.value = bound;
    if (g.status == Status::holds_on_sample && base) {
      for (const auto& p : ps)
        if (p.sinh2_phi > bound + t) add_witness(b, p.x, p.tau, p.sinh2_phi);
      b.detail = b.violations ? "violations are evidence against the hypothesis set (global conditions unchecked)"
                              : "sinh^2(phi) <= m(m-2) at every sampled point";
    } else {
      b.detail = "vacuous: gate, NCC or CMC fails on the sample";
    }
    append(r, std::move(g));
    append(r, std::move(b));
  }
  append(r, completeness());
  append(r, volume_growth());
}

}  // namespace

HypothesisReport thm1_hypotheses(const GraphHypersurface& M, const Sample& sample, const Tolerances& tol) {
  const auto ps = frames(M, sample);
  auto r = start("teo1", M, sample);
  append(r, ncc_condition(M, ps, tol));
  append(r, cmc_condition(ps, tol));
  append(r, h_rho1_condition(ps, tol));
  append(r, inf_rate_condition(ps, sample, tol));
  append(r, completeness());
  append(r, volume_growth());
  finalize(r);
  return r;
}

long long thm2_bound(int m) {
  if (m < 2) throw InvalidArgument("the angle bound needs m >= 2");
  return static_cast<long long>(m) * (m - 2);
}

HypothesisReport check_angle_bound(const GraphHypersurface& M, const Sample& sample, int m, const Tolerances& tol) {
  if (m != M.m()) throw InvalidArgument("angle bound dimension does not match the hypersurface");
  const auto ps = frames(M, sample);
  auto r = start("teo2", M, sample);
  angle_conditions(r, M, ps, m, tol);
  finalize(r);
  return r;
}

HypothesisReport teoale_hypotheses(const ambient::Spacetime& S, std::span<const double> times,
                                   std::span<const std::vector<double>> xs, const GraphHypersurface* M,
                                   const Tolerances& tol) {
  if (times.empty() || xs.empty()) throw InvalidArgument("teoale hypotheses need time and chart samples");
  HypothesisReport r{"teoale", M ? M->label() : "", "", {}, {}};
  r.sample = std::to_string(times.size()) + " times, " + std::to_string(xs.size()) + " chart points";
  append(r, log_concavity_condition(S, times, tol));
  append(r, sectional_condition(S, xs, tol));
  if (M) {
    const Sample s{{xs.begin(), xs.end()}, r.sample};
    const auto ps = frames(*M, s);
    append(r, cmc_condition(ps, tol));
    append(r, h_rho1_condition(ps, tol));
    append(r, inf_rate_condition(ps, s, tol));
    append(r, completeness());
  }
  finalize(r);
  return r;
}

SliceVerdict slice_classifier(const GraphHypersurface& M, const Sample& sample, double tol) {
  const auto ps = frames(M, sample);
  SliceVerdict v;
  double mean = 0.0, max_trace = 0.0, diam = 0.0;
  const PointGeometry* steepest = &ps.front();
  for (const auto& p : ps) {
    mean += p.tau;
    if (p.sinh2_phi > steepest->sinh2_phi) steepest = &p;
    double tr = 0.0;
    for (int i = 0; i < p.m; ++i) tr += p.g(i, i);
    max_trace = std::max(max_trace, tr);
  }
  mean /= static_cast<double>(ps.size());
  for (const auto& p : ps) v.tau_spread = std::max(v.tau_spread, std::abs(p.tau - mean));
  for (std::size_t a = 0; a < ps.size(); ++a)
    for (std::size_t b = a + 1; b < ps.size(); ++b) {
      double d2 = 0.0;
      for (int i = 0; i < ps[a].m; ++i) d2 += (ps[a].x[i] - ps[b].x[i]) * (ps[a].x[i] - ps[b].x[i]);
      diam = std::max(diam, std::sqrt(d2));
    }
  v.max_sinh = std::sqrt(std::max(0.0, steepest->sinh2_phi));
  const double metric_diam = diam * std::sqrt(max_trace);

  const bool by_angle = v.max_sinh < tol, by_time = v.tau_spread < tol;
  std::ostringstream os;
  os << "max sinh(phi) = " << v.max_sinh << ", max |tau - mean| = " << v.tau_spread;
  if (by_angle && !by_time && v.tau_spread > kSliceBand * tol * std::max(1.0, metric_diam)) {
    throw ConsistencyFault("slice criteria disagree on '" + M.label() + "': " + os.str() +
                           " (angle vanishes but tau varies)");
  }
  v.is_slice = by_angle && by_time;
  if (!v.is_slice) v.witness = Witness{steepest->x, steepest->tau, steepest->sinh2_phi};
  if (by_angle != by_time) os << "; criteria differ within the sample resolution band";
  v.detail = os.str();
  return v;
}

HypothesisReport support_conclusion(const GraphHypersurface& M, const Sample& sample, const Tolerances& tol) {
  const auto ps = frames(M, sample);
  auto r = start("support", M, sample);
  append(r, support_condition(ps, tol));
  finalize(r);
  return r;
}

HypothesisReport bounded_future_check(const GraphHypersurface& M, const Sample& sample) {
  if (sample.points.empty()) throw InvalidArgument("theorem checks need a nonempty sample");
  auto r = start("bounded-future", M, sample);
  Condition c = not_checkable("sup tau < +inf", "estimate only: maximum of tau over the sample");
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& x : sample.points) {
    const double t = M.tau_at(x);
    if (t > hi) {
      hi = t;
      c.witnesses.assign(1, Witness{x, t, t});
    }
  }
  c.value = hi;
  append(r, std::move(c));
  finalize(r);
  return r;
}

FutureTrend bounded_future_trend(const GraphHypersurface& M, const Box& box, std::span<const double> scales,
                                 int per_axis) {
  FutureTrend out;
  for (double s : scales) {
    Box b = box;
    for (int i = 0; i < box.dim(); ++i) {
      const double c = 0.5 * (box.lo[i] + box.hi[i]), h = 0.5 * (box.hi[i] - box.lo[i]);
      b.lo[i] = c - s * h;
      b.hi[i] = c + s * h;
    }
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& x : sampling::grid(b, per_axis)) hi = std::max(hi, M.tau_at(x));
    out.scales.push_back(s);
    out.maxima.push_back(hi);
  }
  out.unbounded_trend = out.maxima.size() >= 2;
  for (std::size_t k = 1; k < out.maxima.size(); ++k)
    if (!(out.maxima[k] > out.maxima[k - 1])) out.unbounded_trend = false;
  return out;
}

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {"teo1", "teo2",   "cordim2", "teodiv", "teorib",
                                               "teo3", "teoale", "ste",     "eds",    "rad"};
  return ids;
}

bool is_theorem(const std::string& id) {
  const auto& ids = theorem_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

HypothesisReport check_theorem(const std::string& id, const GraphHypersurface& M, const Sample& sample,
                               const Tolerances& tol) {
  if (!is_theorem(id)) throw InvalidArgument("unknown theorem '" + id + "'");
  if (id == "teo1") return thm1_hypotheses(M, sample, tol);

  const auto ps = frames(M, sample);
  const auto& S = M.host();
  auto r = start(id, M, sample);

  if (id == "teo2" || id == "cordim2") {
    if (id == "cordim2") {
      Condition d;
      d.name = "spacetime dimension 3";
      d.value = S.dim();
      if (S.dim() != 3) add_witness(d, {}, kNan, S.dim());
      append(r, std::move(d));
    }
    angle_conditions(r, M, ps, M.m(), tol);
    if (id == "cordim2") {
      const auto v = slice_classifier(M, sample);
      Condition c;
      c.name = "M is a spacelike slice";
      c.role = "conclusion";
      c.value = v.max_sinh;
      c.detail = v.detail;
      bool gated = false;
      for (const auto& k : r.conditions)
        if (k.role == "gate" && k.status == Status::holds_on_sample) gated = true;
      if (!gated) c.detail = "vacuous: no gate holds on the sample; " + v.detail;
      else if (!v.is_slice) add_witness(c, v.witness->x, v.witness->tau, v.witness->value);
      append(r, std::move(c));
    }
  } else if (id == "teodiv" || id == "teo3") {
    append(r, ncc_condition(M, ps, tol));
    append(r, cmc_condition(ps, tol));
    append(r, h_rho1_condition(ps, tol));
    if (id == "teodiv") {
      append(r, not_checkable("zeta exists", "exhaustion function with bounded gradient and Laplacian control"));
      append(r, not_checkable("sinh(phi) in L^2(M)", "integrability over M"));
    } else {
      append(r, not_checkable("sinh^2(phi) in L^q(M), q > 2", "integrability over M"));
    }
    append(r, completeness());
    append(r, support_condition(ps, tol));
  } else if (id == "teorib") {
    const auto times = sample_times(S, ps);
    append(r, sectional_condition(S, sample.points, tol));
    append(r, log_concavity_condition(S, times, tol));
    append(r, cmc_condition(ps, tol));
    append(r, h_rho1_condition(ps, tol));
    append(r, not_checkable("sinh(phi) in L^2(M)", "integrability over M"));
    append(r, completeness());
    append(r, support_condition(ps, tol));
  } else {
    // teoale and its corollaries: non-existence statements, so only hypotheses are listed.
    const auto times = sample_times(S, ps);
    if (id == "ste") {
      append(r, warp_condition("warping function e^t", S, times, 1.0, false, tol));
      append(r, flat_fiber_condition(S, sample.points, tol));
    } else if (id == "eds") {
      append(r, warp_condition("warping function t^(2/3)", S, times, 2.0 / 3.0, true, tol));
      append(r, flat_fiber_condition(S, sample.points, tol));
    } else if (id == "rad") {
      append(r, warp_condition("warping function (2at)^(1/2)", S, times, 0.5, true, tol));
      append(r, flat_fiber_condition(S, sample.points, tol));
    }
    append(r, log_concavity_condition(S, times, tol));
    append(r, sectional_condition(S, sample.points, tol));
    append(r, cmc_condition(ps, tol));
    if (id == "teoale") {
      append(r, h_rho1_condition(ps, tol));
      append(r, inf_rate_condition(ps, sample, tol));
    } else {
      append(r, nonpositive_H_condition(ps, tol));
    }
    if (id == "eds" || id == "rad") {
      auto b = bounded_future_check(M, sample).conditions.front();
      b.name = "bounded away from future infinity";
      append(r, std::move(b));
    }
    append(r, completeness());
  }
  finalize(r);
  return r;
}

}  // namespace grw::theorems
