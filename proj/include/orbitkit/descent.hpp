#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbitkit/common.hpp"
#include "orbitkit/orbit_engine.hpp"
#include "orbitkit/premetric.hpp"

namespace orbitkit {

/**
 * Extended-real objective: f returns no value where it is not finite.
 * `domain` enumerates the ambient set; when `domain_size` is set the sampler
 * lists the entire space within that budget, which upgrades "sampled empty"
 * descent sets to certified ones.
 */
template <class P, class R>
struct ObjectiveFunction {
  std::string name;
  std::function<std::optional<R>(const P&)> f;
  SetSampler<P> domain;
  std::optional<int> domain_size;
  std::optional<R> lower_bound;
};

struct DescentConfig {
  double eps0 = 1.0;        // level-set probe starts at min_f + eps0
  int probe_levels = 24;    // levels eps0 * 2^-i, i = 0..probe_levels
  double residual_tol = 1e-9;
  double probe_floor = 1e-3;
  int per_step_budget = 64;
  int max_steps = 64;
  std::optional<double> divergence_floor;  // abort if f falls below -floor
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

template <class P, class R>
struct MinimizationCertificate {
  P xbar;
  R f_xbar;
  R sigma_length;   // total step length along the descent orbit
  R residual;       // stationarity defect measured on a fresh sample
  Verdict probe = Verdict::Inconclusive;  // uniqueness / stationarity probe
  int steps = 0;
  long f_evals = 0;
  std::optional<bool> length_bound_ok;  // telescoping bound, when applicable
  std::vector<std::string> notes;
};

namespace detail {

template <class P, class R>
struct CountedObjective {
  std::function<std::optional<R>(const P&)> f;
  std::shared_ptr<long> evals;
};

template <class P, class R>
CountedObjective<P, R> with_counter(const ObjectiveFunction<P, R>& obj) {
  auto evals = std::make_shared<long>(0);
  auto base = obj.f;
  return {[base, evals](const P& x) {
            ++*evals;
            return base(x);
          },
          evals};
}

template <class P, class R>
void guard_objective_range(const ObjectiveFunction<P, R>& obj, const DescentConfig& cfg,
                           const std::vector<P>& points,
                           const std::function<std::optional<R>(const P&)>& f) {
  for (const auto& x : points) {
    auto v = f(x);
    if (!v) continue;
    if (obj.lower_bound && *v < *obj.lower_bound)
      throw std::logic_error("objective '" + obj.name +
                             "' fell below its declared lower bound");
    if (!obj.lower_bound && cfg.divergence_floor &&
        *v < scalar_from_double<R>(-*cfg.divergence_floor))
      throw std::runtime_error("descent diverged below the floor: objective '" + obj.name +
                               "' appears unbounded below");
  }
}

}  // namespace detail

// S(x) = { y : f(y) < f(x) }, with everything-finite as the sublevel of a
// non-finite value.  Exact membership predicate always available; emptiness
// certificates only when the domain enumeration is exhaustive.
template <class P, class R>
SetValuedMap<P> sublevel_map(std::function<std::optional<R>(const P&)> f,
                             const ObjectiveFunction<P, R>& obj) {
  SetValuedMap<P> m;
  auto domain = obj.domain;
  m.sample = [f, domain](const P& x, int budget, std::uint64_t) {
    auto fx = f(x);
    std::vector<P> out;
    for (const auto& y : domain(4 * budget)) {
      if (static_cast<int>(out.size()) >= budget) break;
      auto fy = f(y);
      if (!fy) continue;
      if (!fx || *fy < *fx) out.push_back(y);
    }
    return out;
  };
  m.contains = [f](const P& x, const P& y) {
    auto fy = f(y);
    if (!fy) return false;
    auto fx = f(x);
    return !fx || *fy < *fx;
  };
  if (obj.domain_size) {
    int all = *obj.domain_size;
    auto sample = m.sample;
    m.is_known_empty = [sample, all](const P& x) {
      return std::optional<bool>(sample(x, all, 0).empty());
    };
  }
  return m;
}

// S(x) = { y : p(y, x) < f(x) - f(y) }: strict descent discounted by the
// cost of getting there.
template <class P, class R>
SetValuedMap<P> variational_descent_map(std::function<std::optional<R>(const P&)> f,
                                        const ObjectiveFunction<P, R>& obj,
                                        Premetric<P, R> p) {
  SetValuedMap<P> m;
  auto domain = obj.domain;
  auto admits = [f, p](const P& x, const P& y) {
    auto fx = f(x), fy = f(y);
    if (!fx || !fy) return false;  // no descent through non-finite values
    return p(y, x) < R(*fx - *fy);
  };
  m.sample = [admits, domain](const P& x, int budget, std::uint64_t) {
    std::vector<P> out;
    for (const auto& y : domain(4 * budget)) {
      if (static_cast<int>(out.size()) >= budget) break;
      if (admits(x, y)) out.push_back(y);
    }
    return out;
  };
  m.contains = admits;
  if (obj.domain_size) {
    int all = *obj.domain_size;
    auto sample = m.sample;
    m.is_known_empty = [sample, all](const P& x) {
      return std::optional<bool>(sample(x, all, 0).empty());
    };
  }
  return m;
}

/**
 * Greedy minimization along the strict sublevel dynamics, followed by a
 * uniqueness probe: s_i = sup { p(xbar, y) : f(y) <= min_f + eps0 * 2^-i }.
 * Every minimizing sequence eventually lives in each of these level sets,
 * so the sup dominates all of them at once.  probe Supported means the
 * deepest level set collapses onto xbar (strong minimum behavior on the
 * probed sample); Refuted means a far point with near-minimal value
 * survives every level (a second valley).
 */
template <class P, class R>
MinimizationCertificate<P, R> strong_min_descent(const ObjectiveFunction<P, R>& obj,
                                                 const Premetric<P, R>& p, const P& x1,
                                                 const DescentConfig& cfg) {
  auto counted = detail::with_counter(obj);
  if (!counted.f(x1))
    throw std::invalid_argument("start point is outside the finiteness domain of '" +
                                obj.name + "'");
  auto map = sublevel_map<P, R>(counted.f, obj);
  auto orbit = generate_orbit(map, x1, greedy_min_objective_selector<P, R>(counted.f),
                              cfg.max_steps, cfg.seed, cfg.per_step_budget);
  detail::guard_objective_range(obj, cfg, orbit.points, counted.f);

  MinimizationCertificate<P, R> cert{orbit.points.back(), *counted.f(orbit.points.back()),
                                     p_length(p, orbit.points), R(0)};
  cert.steps = static_cast<int>(orbit.points.size()) - 1;
  if (orbit.ended) cert.notes.push_back(orbit.end_reason);

  // fresh sample for the residual and the level-set probe
  std::vector<P> base = obj.domain(4 * cfg.per_step_budget);
  base.push_back(cert.xbar);
  std::optional<R> min_f;
  for (const auto& y : base) {
    auto fy = counted.f(y);
    if (fy && (!min_f || *fy < *min_f)) min_f = fy;
  }
  if (!min_f) {
    cert.notes.push_back("no finite objective values sampled");
    cert.f_evals = *counted.evals;
    return cert;
  }
  cert.residual = std::max(R(0), R(cert.f_xbar - *min_f));

  if (!orbit.ended) {
    cert.probe = Verdict::Inconclusive;
    cert.notes.push_back("step budget exhausted before stationarity");
  } else if (cert.residual > scalar_from_double<R>(cfg.residual_tol)) {
    cert.probe = Verdict::Refuted;
    cert.notes.push_back("a sampled point undercuts the reached value");
  } else {
    R s_last(0);
    for (int i = 0; i <= cfg.probe_levels; ++i) {
      const R eps = scalar_from_double<R>(cfg.eps0 * std::pow(2.0, -i));
      R s(0);
      for (const auto& y : base) {
        auto fy = counted.f(y);
        if (!fy || *fy > R(*min_f + eps)) continue;
        s = std::max(s, p(cert.xbar, y));
      }
      s_last = s;
    }
    if (s_last <= scalar_from_double<R>(cfg.tol)) {
      cert.probe = Verdict::Supported;
      cert.notes.push_back("deepest level set collapses onto the reached point");
    } else if (s_last >= scalar_from_double<R>(cfg.probe_floor)) {
      cert.probe = Verdict::Refuted;
      cert.notes.push_back("a far point survives every probed level set");
    } else {
      cert.notes.push_back("level sets shrink but have not collapsed at the probe depth");
    }
  }
  cert.f_evals = *counted.evals;
  return cert;
}

/**
 * Descent along S(x) = { y : p(y,x) < f(x) - f(y) } with greedy objective
 * choice.  The prefix sums of step lengths are checked exactly against the
 * telescoped objective drop (a violated check is a programming error, not a
 * data property).  probe Supported means the endpoint is stationary on a
 * fresh sample: no y with f(y) + p(y, xbar) < f(xbar) - residual_tol.
 */
template <class P, class R>
MinimizationCertificate<P, R> ekeland_descent(const ObjectiveFunction<P, R>& obj,
                                              const Premetric<P, R>& p, const P& x1,
                                              const DescentConfig& cfg) {
  auto counted = detail::with_counter(obj);
  if (!counted.f(x1))
    throw std::invalid_argument("start point is outside the finiteness domain of '" +
                                obj.name + "'");
  auto map = variational_descent_map<P, R>(counted.f, obj, p);
  auto orbit = generate_orbit(map, x1, greedy_min_objective_selector<P, R>(counted.f),
                              cfg.max_steps, cfg.seed, cfg.per_step_budget);
  detail::guard_objective_range(obj, cfg, orbit.points, counted.f);

  // exact prefix check: sum_{i<k} p(x_{i+1}, x_i) <= f(x_1) - f(x_k)
  const R f1 = *counted.f(orbit.points.front());
  R running(0);
  for (std::size_t k = 1; k < orbit.points.size(); ++k) {
    running += p(orbit.points[k], orbit.points[k - 1]);
    if (running > R(f1 - *counted.f(orbit.points[k])))
      throw std::logic_error("telescoping length bound violated along the descent orbit");
  }

  MinimizationCertificate<P, R> cert{orbit.points.back(), *counted.f(orbit.points.back()),
                                     running, R(0)};
  cert.steps = static_cast<int>(orbit.points.size()) - 1;
  cert.length_bound_ok = true;
  if (orbit.ended) cert.notes.push_back(orbit.end_reason);

  std::vector<P> base = obj.domain(4 * cfg.per_step_budget);
  for (const auto& y : base) {
    auto fy = counted.f(y);
    if (!fy) continue;
    cert.residual = std::max(cert.residual, R(cert.f_xbar - *fy - p(y, cert.xbar)));
  }
  if (!orbit.ended) {
    cert.probe = Verdict::Inconclusive;
    cert.notes.push_back("step budget exhausted before stationarity");
  } else if (cert.residual <= scalar_from_double<R>(cfg.residual_tol)) {
    cert.probe = Verdict::Supported;
    cert.notes.push_back("no sampled point descends net of travel cost");
  } else {
    cert.probe = Verdict::Refuted;
    cert.notes.push_back("a sampled point still descends net of travel cost");
  }
  cert.f_evals = *counted.evals;
  return cert;
}

template <class P, class R>
struct SelfMapStationarityReport {
  bool premise_holds = false;
  std::optional<P> premise_witness;  // point violating the descent premise
  std::optional<MinimizationCertificate<P, R>> certificate;
  std::optional<R> fixed_point_gap;  // p(T(xbar), xbar)
  Verdict conclusion = Verdict::Inconclusive;
  std::string note;
};

/**
 * Checks the single-valued descent premise f(T x) + p(T x, x) <= f(x) on a
 * sample, and when it holds runs the variational descent to look for a
 * point the map no longer moves.
 */
template <class P, class R>
SelfMapStationarityReport<P, R> caristi_check(const std::function<P(const P&)>& T,
                                              const ObjectiveFunction<P, R>& obj,
                                              const Premetric<P, R>& p, const P& x1,
                                              const DescentConfig& cfg) {
  SelfMapStationarityReport<P, R> rep;
  rep.premise_holds = true;
  for (const auto& x : obj.domain(4 * cfg.per_step_budget)) {
    auto fx = obj.f(x);
    if (!fx) continue;
    P tx = T(x);
    auto ftx = obj.f(tx);
    if (!ftx || R(*ftx + p(tx, x)) > *fx) {
      rep.premise_holds = false;
      rep.premise_witness = x;
      rep.note = "descent premise fails at a sampled point";
      return rep;
    }
  }
  rep.certificate = ekeland_descent(obj, p, x1, cfg);
  const P& xbar = rep.certificate->xbar;
  P txbar = T(xbar);
  rep.fixed_point_gap = p(txbar, xbar);
  if (*rep.fixed_point_gap <= scalar_from_double<R>(cfg.tol)) {
    rep.conclusion = Verdict::Supported;
    rep.note = "the map does not move the stationary point";
  } else {
    rep.conclusion = Verdict::Inconclusive;
    rep.note = "descent under-sampled: the mapped point still descends";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Nested-family intersection search
// ---------------------------------------------------------------------------

template <class P>
struct NestedFamily {
  std::string name;
  std::function<bool(int level, const P&)> contains;
  std::function<std::vector<P>(int level, int budget, std::uint64_t seed)> sample_set;
};

enum class IntersectStatus { Found, NoAccumulation, CannotWitnessNonempty };

inline std::string to_string(IntersectStatus s) {
  switch (s) {
    case IntersectStatus::Found: return "found";
    case IntersectStatus::NoAccumulation: return "no-accumulation";
    default: return "cannot-witness-nonempty";
  }
}

template <class P>
struct IntersectReport {
  IntersectStatus status = IntersectStatus::NoAccumulation;
  std::optional<P> xbar;
  std::vector<int> depths;  // deepest certified membership per selected point
  int depth_cap = 0;
  std::string note;
};

struct IntersectConfig {
  int max_steps = 10;
  int budget = 32;
  int depth_cap = 1 << 24;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

namespace detail {

// Deepest level (capped) containing x; membership is monotone by nestedness.
template <class P>
int deepest_membership(const NestedFamily<P>& fam, const P& x, int from, int cap) {
  if (!fam.contains(from, x)) return from - 1;
  int lo = from, step = 1;
  while (lo + step <= cap && fam.contains(lo + step, x)) {
    lo += step;
    step *= 2;
  }
  int hi = std::min(cap, lo + step);  // contains(lo), not contains(hi) unless capped
  if (lo == cap || (hi == cap && fam.contains(cap, x))) return cap;
  while (lo + 1 < hi) {
    int mid = lo + (hi - lo) / 2;
    if (fam.contains(mid, x))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace detail

/**
 * Walks x_i in C_i (first sample), certifying how deep each selected point
 * stays in the family.  A point that survives to the depth cap is returned
 * as the intersection candidate; otherwise the selection sequence is
 * scanned for an accumulation point against samples of the deepest set.
 * Nestedness is spot-checked and a violation throws.
 */
template <class P, class R>
IntersectReport<P> cantor_intersect(const NestedFamily<P>& fam, const Premetric<P, R>& p,
                                    const IntersectConfig& cfg) {
  IntersectReport<P> rep;
  rep.depth_cap = cfg.depth_cap;

  for (int i = 1; i < cfg.max_steps; ++i)
    for (const auto& y : fam.sample_set(i + 1, std::min(cfg.budget, 8),
                                        mix_seed(cfg.seed, 1000 + i)))
      if (!fam.contains(i, y))
        throw std::invalid_argument("family '" + fam.name + "' is not nested at level " +
                                    std::to_string(i));

  std::vector<P> xs;
  for (int i = 1; i <= cfg.max_steps; ++i) {
    auto pts = fam.sample_set(i, cfg.budget, mix_seed(cfg.seed, i));
    if (pts.empty()) {
      rep.status = IntersectStatus::CannotWitnessNonempty;
      rep.note = "no point exhibited in the set at level " + std::to_string(i);
      return rep;
    }
    xs.push_back(pts.front());
    int k = detail::deepest_membership(fam, xs.back(), i, cfg.depth_cap);
    rep.depths.push_back(k);
    if (k == cfg.depth_cap) {
      rep.status = IntersectStatus::Found;
      rep.xbar = xs.back();
      rep.note = "membership certified to the depth cap at step " + std::to_string(i);
      return rep;
    }
  }

  // The same witness legitimately serves several adjacent levels, so collapse
  // consecutive repeats: bookkeeping repetition is not convergence evidence.
  Orbit<P> walk;
  for (const auto& x : xs)
    if (walk.points.empty() || !(walk.points.back() == x)) walk.points.push_back(x);
  auto pool = fam.sample_set(cfg.max_steps, cfg.budget, mix_seed(cfg.seed, 0x9999));
  auto found = find_accumulation_point(walk, p, pool, cfg.tol, 3, 4);
  if (!found.empty()) {
    rep.status = IntersectStatus::Found;
    rep.xbar = found.front().point;
    rep.depths.push_back(
        detail::deepest_membership(fam, *rep.xbar, 1, cfg.depth_cap));
    rep.note = "accumulation point of the selection sequence";
  } else {
    rep.status = IntersectStatus::NoAccumulation;
    rep.note = "no accumulation point within budget";
  }
  return rep;
}

}  // namespace orbitkit
