#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbitkit/common.hpp"
#include "orbitkit/premetric.hpp"

namespace orbitkit {

/**
 * Set-valued dynamics x |-> S(x), exposed through bounded sampling.
 * `sample` must be deterministic in (x, budget, seed) and prefix-stable in
 * the budget.  The optional hooks upgrade sampled evidence to certificates:
 *   is_known_empty  definitive emptiness of S(x) when it returns a value
 *   contains        exact membership y in S(x)
 */
template <class P>
struct SetValuedMap {
  std::function<std::vector<P>(const P& x, int budget, std::uint64_t seed)> sample;
  std::function<std::optional<bool>(const P& x)> is_known_empty;
  std::function<bool(const P& x, const P& y)> contains;
};

template <class P>
struct OrbitStep {
  std::vector<P> candidates;
  std::size_t chosen_index = 0;
  std::string rationale;
};

template <class P>
struct Orbit {
  std::vector<P> points;
  std::vector<OrbitStep<P>> steps;
  bool ended = false;       // the dynamics ran out of successors
  std::string end_reason;   // certificate status when ended
};

// Picks the successor among sampled candidates.
template <class P>
struct SelectionPolicy {
  std::string name;
  std::function<std::size_t(const P& x, const std::vector<P>& candidates)> choose;
};

template <class P>
SelectionPolicy<P> first_sample_selector() {
  return {"first-sample", [](const P&, const std::vector<P>&) { return std::size_t{0}; }};
}

// argmin of the objective over the candidates; absent values rank last.
template <class P, class R>
SelectionPolicy<P> greedy_min_objective_selector(
    std::function<std::optional<R>(const P&)> f) {
  return {"greedy-min-objective", [f](const P&, const std::vector<P>& cands) {
            std::size_t best = 0;
            std::optional<R> best_v;
            for (std::size_t i = 0; i < cands.size(); ++i) {
              auto v = f(cands[i]);
              if (!v) continue;
              if (!best_v || *v < *best_v) {
                best_v = v;
                best = i;
              }
            }
            return best;
          }};
}

/**
 * One-step lookahead: rank each candidate y by the sampled estimate of
 * sup { p(z, y) : z in S(y) } and take the largest.  Favors successors whose
 * own image still spans width, i.e. the slowest-collapsing branch.
 */
template <class P, class R>
SelectionPolicy<P> greedy_max_step_selector(SetValuedMap<P> map, Premetric<P, R> p,
                                            int lookahead_budget, std::uint64_t seed) {
  return {"greedy-max-step",
          [map, p, lookahead_budget, seed](const P&, const std::vector<P>& cands) {
            std::size_t best = 0;
            R best_v(0);
            for (std::size_t i = 0; i < cands.size(); ++i) {
              SetSampler<P> img = [&](int b) {
                return map.sample(cands[i], b, mix_seed(seed, i));
              };
              R v = p_sup(p, img, cands[i], lookahead_budget);
              if (i == 0 || v > best_v) {
                best_v = v;
                best = i;
              }
            }
            return best;
          }};
}

template <class P>
Orbit<P> generate_orbit(const SetValuedMap<P>& map, const P& x1,
                        const SelectionPolicy<P>& policy, int max_steps,
                        std::uint64_t seed, int budget) {
  Orbit<P> orbit;
  orbit.points.push_back(x1);
  for (int i = 0; i < max_steps; ++i) {
    const P& x = orbit.points.back();
    if (map.is_known_empty) {
      auto known = map.is_known_empty(x);
      if (known && *known) {
        orbit.ended = true;
        orbit.end_reason = "image certified empty";
        return orbit;
      }
    }
    auto cands = map.sample(x, budget, mix_seed(seed, static_cast<std::uint64_t>(i)));
    if (cands.empty()) {
      orbit.ended = true;
      orbit.end_reason = "image sampled empty (not certified)";
      return orbit;
    }
    std::size_t k = policy.choose(x, cands);
    if (k >= cands.size()) throw std::logic_error("selection policy returned a bad index");
    orbit.steps.push_back({cands, k, policy.name});
    orbit.points.push_back(cands[k]);
  }
  return orbit;
}

// A candidate limit together with the orbit indices of the record
// subsequence that approaches it.
template <class P>
struct AccumulationCandidate {
  P point;
  std::vector<std::size_t> indices;
};

/**
 * Scans candidate limits — explicit pool first, then the final step's
 * sampled alternatives, then the orbit tail in reverse — and keeps those
 * some record subsequence of the orbit approaches.  Acceptance additionally
 * requires the orbit to sit within tol of the candidate at least min_count
 * times: the last point of a diverging walk trivially has a decreasing
 * record sequence into itself, but is visited at tol-level only once.
 * Near-duplicates of an already kept candidate (mutual p at or below tol)
 * are dropped, so exact limits supplied in the pool shadow their tail
 * approximations.
 */
template <class P, class R>
std::vector<AccumulationCandidate<P>> find_accumulation_point(
    const Orbit<P>& orbit, const Premetric<P, R>& p, const std::vector<P>& pool,
    double tol_d = 1e-9, std::size_t min_count = 3, std::size_t coverage_window = 8) {
  const R tol = scalar_from_double<R>(tol_d);
  std::vector<P> candidates = pool;
  if (!orbit.steps.empty())
    for (const auto& c : orbit.steps.back().candidates) candidates.push_back(c);
  for (auto it = orbit.points.rbegin(); it != orbit.points.rend(); ++it)
    candidates.push_back(*it);

  std::vector<AccumulationCandidate<P>> kept;
  for (const auto& c : candidates) {
    bool dup = false;
    for (const auto& k : kept)
      if (std::max(p(k.point, c), p(c, k.point)) <= tol) {
        dup = true;
        break;
      }
    if (dup) continue;
    std::vector<R> v;
    v.reserve(orbit.points.size());
    for (const auto& x : orbit.points) v.push_back(p(c, x));
    auto rec = decreasing_records(v, tol, min_count, coverage_window);
    if (!rec.accepted) continue;
    std::size_t settles = 0;
    for (const auto& val : v)
      if (val <= tol) ++settles;
    if (settles >= min_count) kept.push_back({c, rec.indices});
  }
  return kept;
}

template <class R>
struct ContractivityReport {
  std::vector<R> step_sups;           // sampled sup p(y, x_i) over y in S(x_i)
  std::vector<std::size_t> subsequence;
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
};

/**
 * Watches the sampled image spans along an orbit.  Supported when a record
 * subsequence of the spans vanishes; refuted when even these lower-bound
 * estimates stay above `refute_floor` over the second half.  Demands an
 * unterminated orbit — once the dynamics stop there is nothing to monitor.
 */
template <class P, class R>
ContractivityReport<R> monitor_p_contractive(const Orbit<P>& orbit,
                                             const Premetric<P, R>& p,
                                             const SetValuedMap<P>& map, int budget,
                                             std::uint64_t seed, double tol_d = 1e-9,
                                             double refute_floor = 1e-3) {
  if (orbit.ended)
    throw std::invalid_argument("orbit ended: the contraction monitor needs an orbit prefix "
                                "with successors at every point");
  ContractivityReport<R> rep;
  for (std::size_t i = 0; i < orbit.points.size(); ++i) {
    SetSampler<P> img = [&](int b) {
      return map.sample(orbit.points[i], b, mix_seed(seed, i));
    };
    rep.step_sups.push_back(p_sup(p, img, orbit.points[i], budget));
  }
  const R tol = scalar_from_double<R>(tol_d);
  auto rec = decreasing_records(rep.step_sups, tol, std::size_t{3},
                                std::max<std::size_t>(4, rep.step_sups.size() / 4));
  if (rec.accepted) {
    rep.subsequence = rec.indices;
    rep.verdict = Verdict::Supported;
    rep.note = "record subsequence of image spans vanishes";
  } else if (stays_above(rep.step_sups, scalar_from_double<R>(refute_floor))) {
    rep.verdict = Verdict::Refuted;
    rep.note = "sampled spans (lower bounds) stay above the floor";
  } else {
    rep.note = "spans neither vanish nor stay bounded away from zero";
  }
  return rep;
}

enum class PersistenceVariant { Approximate, ExactMembership };

struct PersistenceReport {
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
  int probed_targets = 0;
};

/**
 * Tests whether the image of an accumulation point persists along the
 * subsequence that produced it: each sampled y in S(xbar) distinct from xbar
 * must keep appearing in (exact variant) or be approached by (approximate
 * variant) the images S(x_{i_k}).  The exact variant needs the membership
 * hook and is the only one that can refute.
 */
template <class P, class R>
PersistenceReport probe_image_persistence(const SetValuedMap<P>& map, const Orbit<P>& orbit,
                                          const AccumulationCandidate<P>& acc,
                                          PersistenceVariant variant,
                                          const Premetric<P, R>& p, int budget,
                                          std::uint64_t seed, double tol_d = 1e-9) {
  PersistenceReport rep;
  if (acc.indices.size() < 2) {
    rep.note = "subsequence too short to probe";
    return rep;
  }
  if (variant == PersistenceVariant::ExactMembership && !map.contains) {
    rep.note = "exact variant requires the membership hook";
    return rep;
  }
  const R tol = scalar_from_double<R>(tol_d);

  std::vector<P> targets;
  for (const auto& y : map.sample(acc.point, budget, mix_seed(seed, 0xbeef))) {
    if (!(p(y, acc.point) > R(0))) continue;
    bool seen = false;
    for (const auto& t : targets) seen = seen || t == y;
    if (!seen) targets.push_back(y);
  }
  rep.probed_targets = static_cast<int>(targets.size());
  if (targets.empty()) {
    rep.verdict = Verdict::Supported;
    rep.note = "vacuous: no sampled image point is distinct from the base point";
    return rep;
  }

  bool any_refuted = false, all_supported = true;
  for (const auto& y : targets) {
    Verdict vy = Verdict::Inconclusive;
    if (variant == PersistenceVariant::ExactMembership) {
      std::size_t hits = 0, last_hit = 0;
      for (std::size_t k = 0; k < acc.indices.size(); ++k)
        if (map.contains(orbit.points[acc.indices[k]], y)) {
          ++hits;
          last_hit = k;
        }
      if (hits == 0)
        vy = Verdict::Refuted;  // proven absent at every probed index
      else if (hits >= std::min<std::size_t>(3, acc.indices.size()) &&
               last_hit + 4 >= acc.indices.size())
        vy = Verdict::Supported;
    } else {
      std::vector<R> gaps;
      for (std::size_t k = 0; k < acc.indices.size(); ++k) {
        auto img = map.sample(orbit.points[acc.indices[k]], budget, mix_seed(seed, k + 1));
        if (img.empty()) continue;
        R m = p(y, img[0]);
        for (const auto& z : img) m = std::min(m, p(y, z));
        gaps.push_back(m);
      }
      if (!gaps.empty() && tends_to_zero(gaps, tol)) vy = Verdict::Supported;
      // sampling cannot prove absence: never refute in this variant
    }
    any_refuted = any_refuted || vy == Verdict::Refuted;
    all_supported = all_supported && vy == Verdict::Supported;
  }
  rep.verdict = any_refuted ? Verdict::Refuted
                            : (all_supported ? Verdict::Supported : Verdict::Inconclusive);
  rep.note = any_refuted ? "an image point is absent along the whole subsequence"
                         : (all_supported ? "all distinct image points persist"
                                          : "persistence undecided for some image point");
  return rep;
}

enum class FixedPointKind { Strict, EmptyValue, Violation, Unknown };

inline std::string to_string(FixedPointKind k) {
  switch (k) {
    case FixedPointKind::Strict: return "strict-fixed-point";
    case FixedPointKind::EmptyValue: return "empty-value";
    case FixedPointKind::Violation: return "violation";
    default: return "unknown";
  }
}

template <class P>
struct FixedPointReport {
  FixedPointKind kind = FixedPointKind::Unknown;
  std::optional<P> witness;  // offending image point for violations
  std::string note;
};

/**
 * Classifies a candidate stationary point: image certified empty; image
 * sampled as exactly {xbar}; a sampled image point further than tol away
 * (violation, with witness); or not decidable from samples alone.
 */
template <class P, class R>
FixedPointReport<P> classify_fixed_point(const SetValuedMap<P>& map, const P& xbar,
                                         const Premetric<P, R>& p, double tol_d, int budget,
                                         std::uint64_t seed) {
  FixedPointReport<P> rep;
  if (map.is_known_empty) {
    auto known = map.is_known_empty(xbar);
    if (known && *known) {
      rep.kind = FixedPointKind::EmptyValue;
      rep.note = "image certified empty";
      return rep;
    }
  }
  auto cands = map.sample(xbar, budget, mix_seed(seed, 0xfade));
  if (cands.empty()) {
    rep.note = "image sampled empty without a certificate";
    return rep;
  }
  const R tol = scalar_from_double<R>(tol_d);
  bool all_equal = true;
  for (const auto& y : cands) {
    if (p(y, xbar) > tol) {
      rep.kind = FixedPointKind::Violation;
      rep.witness = y;
      rep.note = "sampled image point beyond tolerance";
      return rep;
    }
    all_equal = all_equal && y == xbar;
  }
  if (all_equal) {
    rep.kind = FixedPointKind::Strict;
    rep.note = "every sampled image point equals the base point";
  } else {
    rep.note = "image within tolerance but not pointwise equal";
  }
  return rep;
}

}  // namespace orbitkit
