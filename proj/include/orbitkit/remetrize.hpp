#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orbitkit/common.hpp"
#include "orbitkit/finite_topology.hpp"
#include "orbitkit/orbit_engine.hpp"
#include "orbitkit/rational.hpp"

namespace orbitkit {

// ---------------------------------------------------------------------------
// Contractivity notions agree on finite discrete-metric carriers
// ---------------------------------------------------------------------------

// All subsets open: the topology every metric induces on a finite carrier.
inline FiniteSpace discrete_space(int n) {
  if (n < 1 || n > 12) throw std::invalid_argument("discrete carrier size out of range");
  FiniteSpace sp;
  sp.n = n;
  for (Mask m = 0; m < (Mask(1) << n); ++m) sp.opens.push_back(m);
  return sp;
}

// Exact distance-contractivity of an eventually periodic orbit under the
// discrete metric: the image-width sup vanishes along a subsequence only if
// it is exactly zero at a recurring point, i.e. some cycle point has {c}
// itself as its whole image.
inline bool discrete_p_contractive(const FiniteSetMap& map, const OrbitDescriptor& orbit) {
  for (int c : orbit.cycle)
    if (map.images[static_cast<std::size_t>(c)] == point_bit(c)) return true;
  return false;
}

// On a finite discrete-metric carrier the cover-based and the distance-based
// orbit contractivity are both decidable exactly; this returns whether they
// agree (a property expected to hold on every valid instance).
inline bool tau_p_equivalence_test(int n, const FiniteSetMap& map,
                                   const OrbitDescriptor& orbit) {
  FiniteSpace sp = discrete_space(n);
  validate_orbit(sp, map, orbit);
  const bool tau = is_cover_contractive(sp, map, orbit).contractive;
  return tau == discrete_p_contractive(map, orbit);
}

// Random nonempty-image set map plus a validated orbit from a random start:
// fodder for the equivalence property test.
inline std::pair<FiniteSetMap, OrbitDescriptor> random_discrete_instance(
    int n, std::uint64_t seed) {
  if (n < 1 || n > 12) throw std::invalid_argument("discrete carrier size out of range");
  auto rng = make_rng(seed);
  const Mask full = (Mask(1) << n) - 1;
  FiniteSetMap map;
  for (int x = 0; x < n; ++x)
    map.images.push_back(1 + static_cast<Mask>(rng() % full));

  std::vector<int> walk{static_cast<int>(rng() % n)};
  std::vector<int> first_pos(static_cast<std::size_t>(n), -1);
  first_pos[static_cast<std::size_t>(walk[0])] = 0;
  for (;;) {
    std::vector<int> choices;
    for (int y = 0; y < n; ++y)
      if (mask_contains(map.images[static_cast<std::size_t>(walk.back())], y))
        choices.push_back(y);
    int next = choices[rng() % choices.size()];
    if (first_pos[static_cast<std::size_t>(next)] >= 0) {
      int j = first_pos[static_cast<std::size_t>(next)];
      OrbitDescriptor orbit;
      orbit.tail.assign(walk.begin(), walk.begin() + j);
      orbit.cycle.assign(walk.begin() + j, walk.end());
      return {map, orbit};
    }
    first_pos[static_cast<std::size_t>(next)] = static_cast<int>(walk.size());
    walk.push_back(next);
  }
}

// ---------------------------------------------------------------------------
// Long-orbit-or-empty-value conditions along a sampled orbit
// ---------------------------------------------------------------------------

// Three-valued report on the classic orbit conditions: (a) points never
// contain themselves in their images and memberships persist at accumulation
// candidates; (b) the orbit is Cauchy; (c) the image widths vanish.
struct LoevReport {
  Verdict exclusion = Verdict::Inconclusive;
  Verdict cauchy = Verdict::Inconclusive;
  Verdict image_width = Verdict::Inconclusive;
  std::vector<double> window_diameters;  // (b) evidence
  std::vector<double> image_sups;        // (c) evidence
  std::string note;
};

template <class P, class R>
LoevReport loev_condition_check(const Orbit<P>& orbit, const SetValuedMap<P>& map,
                                const Premetric<P, R>& d, const std::vector<P>& pool,
                                int budget, std::uint64_t seed, double tol_d = 1e-9,
                                double refute_floor = 1e-3) {
  LoevReport rep;
  const R tol = scalar_from_double<R>(tol_d);
  const R floor_v = scalar_from_double<R>(refute_floor);
  const auto& xs = orbit.points;

  // (a) exclusion: x in S(x) anywhere along the orbit refutes outright.
  bool self_member = false;
  for (const auto& x : xs) {
    if (map.contains ? map.contains(x, x) : [&] {
          for (const auto& y : map.sample(x, budget, mix_seed(seed, 0xa11)))
            if (y == x) return true;
          return false;
        }()) {
      self_member = true;
      break;
    }
  }
  if (self_member) {
    rep.exclusion = Verdict::Refuted;
    rep.note = "an orbit point belongs to its own image";
  } else {
    // Membership persistence at the accumulation candidates.
    auto cands = find_accumulation_point(orbit, d, pool, tol_d);
    if (cands.empty()) {
      rep.note = "no accumulation candidate to probe membership persistence";
    } else {
      bool all_ok = true, any_ref = false;
      for (const auto& acc : cands) {
        auto variant = map.contains ? PersistenceVariant::ExactMembership
                                    : PersistenceVariant::Approximate;
        auto pr = probe_image_persistence(map, orbit, acc, variant, d, budget, seed, tol_d);
        all_ok = all_ok && pr.verdict == Verdict::Supported;
        any_ref = any_ref || pr.verdict == Verdict::Refuted;
      }
      rep.exclusion = any_ref ? Verdict::Refuted
                              : (all_ok ? Verdict::Supported : Verdict::Inconclusive);
      if (any_ref) rep.note = "a sampled membership dies out along the approach";
    }
  }

  // (b) Cauchy surrogate: diameters of sliding windows must vanish.
  const std::size_t w = std::max<std::size_t>(4, xs.size() / 8);
  if (xs.size() > w) {
    std::vector<R> diams;
    for (std::size_t m = 0; m + w <= xs.size(); ++m) {
      R dm(0);
      for (std::size_t i = m; i < m + w; ++i)
        for (std::size_t j = m; j < m + w; ++j)
          if (i != j) dm = std::max(dm, d(xs[i], xs[j]));
      diams.push_back(dm);
    }
    for (const auto& v : diams) rep.window_diameters.push_back(scalar_to_double(v));
    if (tends_to_zero(diams, tol))
      rep.cauchy = Verdict::Supported;
    else if (stays_above(diams, floor_v))
      rep.cauchy = Verdict::Refuted;
  }

  // (c) sampled sup of d(y, x_i) over y in S(x_i).
  std::vector<R> sups;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    SetSampler<P> img = [&](int b) { return map.sample(xs[i], b, mix_seed(seed, i)); };
    sups.push_back(p_sup(d, img, xs[i], budget));
  }
  for (const auto& v : sups) rep.image_sups.push_back(scalar_to_double(v));
  if (tends_to_zero(sups, tol))
    rep.image_width = Verdict::Supported;
  else if (stays_above(sups, floor_v))
    rep.image_width = Verdict::Refuted;

  return rep;
}

// ---------------------------------------------------------------------------
// Single-valued iteration systems on a sampled metric carrier
// ---------------------------------------------------------------------------

struct IterationSystem {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double, double)> d;  // metric; spot-checked
  std::vector<double> domain_sample;        // stands in for the whole carrier
  std::vector<double> neighborhood_sample;  // the distinguished neighborhood
};

// Metric axioms on sampled triples and totality of f; violations throw.
inline void spot_check_system(const IterationSystem& sys, double tol = 1e-9) {
  if (!sys.f || !sys.d)
    throw std::invalid_argument("iteration system needs both a map and a metric");
  if (sys.domain_sample.empty() || sys.neighborhood_sample.empty())
    throw std::invalid_argument("iteration system needs nonempty samples");
  std::vector<double> pts = sys.domain_sample;
  pts.insert(pts.end(), sys.neighborhood_sample.begin(), sys.neighborhood_sample.end());
  if (pts.size() > 12) pts.resize(12);
  for (double x : pts)
    if (!std::isfinite(sys.f(x)))
      throw std::invalid_argument("map value not finite at a sampled point");
  for (double x : pts)
    for (double y : pts) {
      const double v = sys.d(x, y);
      if (!std::isfinite(v) || v < -tol)
        throw std::invalid_argument("metric negative or not finite at a sampled pair");
      if (std::abs(v - sys.d(y, x)) > tol)
        throw std::invalid_argument("metric asymmetric at a sampled pair");
    }
  for (double x : pts)
    if (sys.d(x, x) > tol)
      throw std::invalid_argument("metric has nonzero self-distance at a sampled point");
  for (double x : pts)
    for (double y : pts)
      for (double z : pts)
        if (sys.d(x, z) > sys.d(x, y) + sys.d(y, z) + tol)
          throw std::invalid_argument("triangle inequality fails on sampled points");
}

inline std::vector<double> uniform_grid(double lo, double hi, int count) {
  if (count < 2 || !(lo < hi)) throw std::invalid_argument("bad grid parameters");
  std::vector<double> out;
  for (int k = 0; k < count; ++k)
    out.push_back(lo + (hi - lo) * static_cast<double>(k) / (count - 1));
  return out;
}

inline IterationSystem halving_system(double lo = 0.0, double hi = 1.0, int count = 17) {
  auto grid = uniform_grid(lo, hi, count);
  return {"halving", [](double x) { return x / 2; },
          [](double a, double b) { return std::abs(a - b); }, grid, grid};
}

inline IterationSystem identity_system(double lo = 0.0, double hi = 1.0, int count = 17) {
  auto grid = uniform_grid(lo, hi, count);
  return {"identity", [](double x) { return x; },
          [](double a, double b) { return std::abs(a - b); }, grid, grid};
}

inline IterationSystem quadratic_system(double lo = 0.0, double hi = 0.5, int count = 17) {
  auto grid = uniform_grid(lo, hi, count);
  return {"quadratic", [](double x) { return x * x; },
          [](double a, double b) { return std::abs(a - b); }, grid, grid};
}

// Rotation of the circle (angles in [0, 2pi)) by one radian: an isometry,
// the canonical way to fail every contraction hypothesis at once.
inline IterationSystem rotation_system(int count = 8) {
  const double two_pi = 8 * std::atan(1.0);
  std::vector<double> grid;
  for (int k = 0; k < count; ++k) grid.push_back(two_pi * k / count);
  auto wrap = [two_pi](double a, double b) {
    double t = std::abs(a - b);
    t = std::fmod(t, two_pi);
    return std::min(t, two_pi - t);
  };
  return {"rotation", [two_pi](double x) { return std::fmod(x + 1.0, two_pi); }, wrap,
          grid, grid};
}

// ---------------------------------------------------------------------------
// Topological contraction tests
// ---------------------------------------------------------------------------

struct TContractionCertificate {
  bool contractive = false;
  std::pair<int, int> offending_pair{-1, -1};
  std::vector<Mask> failing_cover;  // covers the space, yet no member holds
                                    // some recurring iterate pair jointly
};

/**
 * Exact decision on a finite space: f is topologically contractive iff for
 * every pair of start points every recurring pair (u, v) of the joint
 * iterate orbit is jointly coverable — that is, the opens NOT containing
 * both u and v fail to cover the space.  If they do cover it, they are the
 * failing cover (no member of it can hold u and v together, and any other
 * cover is only coarser evidence).
 */
inline TContractionCertificate t_contractive_exact(const FiniteSpace& space,
                                                   const std::vector<int>& f) {
  if (static_cast<int>(f.size()) != space.n)
    throw std::invalid_argument("map table size must match the carrier");
  for (int v : f)
    if (v < 0 || v >= space.n) throw std::invalid_argument("map value out of carrier");

  TContractionCertificate cert;
  const int n = space.n;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      // Joint orbit of the pair; cut at the first revisited state.
      std::vector<int> seen(static_cast<std::size_t>(n) * n, -1);
      int u = a, v = b, step = 0;
      while (seen[static_cast<std::size_t>(u) * n + v] < 0) {
        seen[static_cast<std::size_t>(u) * n + v] = step++;
        u = f[static_cast<std::size_t>(u)];
        v = f[static_cast<std::size_t>(v)];
      }
      const int cycle_start = seen[static_cast<std::size_t>(u) * n + v];
      // Walk the cycle states and test joint coverability of each.
      int cu = a, cv = b;
      for (int i = 0; i < cycle_start; ++i) {
        cu = f[static_cast<std::size_t>(cu)];
        cv = f[static_cast<std::size_t>(cv)];
      }
      do {
        if (cu != cv) {
          Mask both = point_bit(cu) | point_bit(cv);
          Mask covered = 0;
          std::vector<Mask> non_witness;
          for (Mask m : space.opens)
            if (!subset_of(both, m)) {
              covered |= m;
              if (m != 0) non_witness.push_back(m);
            }
          if (covered == space.full()) {
            cert.offending_pair = {a, b};
            cert.failing_cover = non_witness;
            return cert;
          }
        }
        cu = f[static_cast<std::size_t>(cu)];
        cv = f[static_cast<std::size_t>(cv)];
      } while (!(cu == u && cv == v));
    }
  cert.contractive = true;
  return cert;
}

struct PairContractionTrend {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<double> max_curve;  // max over pairs of d(f^i(a), f^i(b))
  std::string note;
};

// Metric surrogate on a continuum carrier: for sampled pairs, the largest
// iterate gap must vanish by the horizon (joint coverability by arbitrarily
// fine ball covers reduces to exactly this, up to a factor of two).
inline PairContractionTrend t_contractive_approximate(
    const IterationSystem& sys, const std::vector<std::pair<double, double>>& pairs,
    int horizon, double tol = 1e-9, double refute_floor = 1e-3) {
  spot_check_system(sys);
  if (pairs.empty()) throw std::invalid_argument("need at least one probe pair");
  PairContractionTrend rep;
  std::vector<std::pair<double, double>> cur = pairs;
  for (int i = 0; i <= horizon; ++i) {
    double m = 0;
    for (auto& [a, b] : cur) m = std::max(m, sys.d(a, b));
    rep.max_curve.push_back(m);
    for (auto& [a, b] : cur) {
      a = sys.f(a);
      b = sys.f(b);
    }
  }
  if (tends_to_zero(rep.max_curve, tol)) {
    rep.verdict = Verdict::Supported;
    rep.note = "largest sampled iterate gap vanishes";
  } else if (stays_above(rep.max_curve, refute_floor)) {
    rep.verdict = Verdict::Refuted;
    rep.note = "a sampled pair keeps its gap through the horizon";
  } else {
    rep.note = "iterate gaps neither vanish nor stay large";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Attraction hypotheses behind the contraction-remetrization theorem
// ---------------------------------------------------------------------------

struct RemetrizeConfig {
  std::vector<double> epsilon_schedule{1e-1, 1e-3, 1e-6};
  int horizon = 64;
  double divergence_bound = 1e9;
  double tol = 1e-9;
  double refute_floor = 1e-3;
};

/**
 * Hypothesis audit only: pointwise attraction of every sampled orbit (A1),
 * uniform attraction over the distinguished neighborhood (A2), continuity
 * spot-checks, plus the sibling pair-contraction and vanishing-diameter
 * trends.  The equivalent contraction metric is never constructed; the flag
 * reports that the sampled evidence clears the hypotheses.
 */
struct RemetrizationReport {
  Verdict a1 = Verdict::Inconclusive;            // pointwise attraction
  Verdict a2 = Verdict::Inconclusive;            // uniform attraction on O
  Verdict t_contraction = Verdict::Inconclusive;
  Verdict uniform_cover = Verdict::Inconclusive;  // diam f^i(O) -> 0
  Verdict continuity = Verdict::Inconclusive;
  bool remetrizable = false;
  double xbar = 0;
  std::optional<double> a1_witness;
  std::vector<double> sup_curve;       // sup over O of d(xbar, f^i(x))
  std::vector<double> diameter_curve;  // diam of f^i(O sample)
  std::string cover_semantics = "epsilon_ball_surrogate";
  std::string note;
};

namespace detail {

// Has the trajectory entered the eps-ball and stayed, with a tail long
// enough to mean something?  1 = yes, 0 = undecided, -1 = provably outside.
inline int settled_in_ball(const std::vector<double>& v, double eps) {
  std::size_t last_violation = 0;
  bool any = false;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > eps) {
      last_violation = i;
      any = true;
    }
  const std::size_t need = std::max<std::size_t>(4, v.size() / 4);
  if (!any || v.size() - 1 - last_violation >= need) return 1;
  if (stays_above(v, eps)) return -1;
  return 0;
}

}  // namespace detail

struct DiameterTrend {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<double> diameters;
  std::string note;
};

// Diameter of the iterated neighborhood sample: the uniform joint-cover
// hypothesis collapses to this under ball covers.
inline DiameterTrend uniform_cover_condition_check(const IterationSystem& sys, int horizon,
                                                   double tol = 1e-9,
                                                   double refute_floor = 1e-3) {
  spot_check_system(sys);
  DiameterTrend rep;
  std::vector<double> cur = sys.neighborhood_sample;
  for (int i = 0; i <= horizon; ++i) {
    double diam = 0;
    for (double a : cur)
      for (double b : cur) diam = std::max(diam, sys.d(a, b));
    rep.diameters.push_back(diam);
    for (double& x : cur) x = sys.f(x);
  }
  if (tends_to_zero(rep.diameters, tol)) {
    rep.verdict = Verdict::Supported;
    rep.note = "iterated neighborhood diameter vanishes";
  } else if (stays_above(rep.diameters, refute_floor)) {
    rep.verdict = Verdict::Refuted;
    rep.note = "iterated neighborhood keeps its diameter";
  } else {
    rep.note = "diameter trend undecided within the horizon";
  }
  return rep;
}

inline RemetrizationReport a1_a2_check(const IterationSystem& sys,
                                       std::optional<double> xbar_opt,
                                       const RemetrizeConfig& cfg = {}) {
  spot_check_system(sys);
  if (cfg.epsilon_schedule.empty())
    throw std::invalid_argument("need a nonempty epsilon schedule");
  RemetrizationReport rep;

  double xbar;
  if (xbar_opt) {
    xbar = *xbar_opt;
  } else {
    xbar = sys.domain_sample.front();
    for (int i = 0; i < cfg.horizon; ++i) xbar = sys.f(xbar);
  }
  rep.xbar = xbar;

  // A1: each sampled point's trajectory settles into every eps-ball.
  {
    bool all_ok = true, undecided = false;
    for (double x : sys.domain_sample) {
      std::vector<double> v;
      double t = x;
      bool diverged = false;
      for (int i = 0; i <= cfg.horizon; ++i) {
        if (std::abs(t) > cfg.divergence_bound) {
          diverged = true;
          break;
        }
        v.push_back(sys.d(xbar, t));
        t = sys.f(t);
      }
      if (diverged) {
        rep.a1 = Verdict::Refuted;
        rep.a1_witness = x;
        rep.note = "a sampled trajectory diverged past the configured bound";
        break;
      }
      for (double eps : cfg.epsilon_schedule) {
        const int s = detail::settled_in_ball(v, eps);
        if (s < 0) {
          rep.a1 = Verdict::Refuted;
          rep.a1_witness = x;
          rep.note = "a sampled trajectory stays outside an attraction ball";
          break;
        }
        if (s == 0) undecided = true;
      }
      if (rep.a1 == Verdict::Refuted) break;
      all_ok = all_ok && !undecided;
    }
    if (rep.a1 != Verdict::Refuted)
      rep.a1 = all_ok ? Verdict::Supported : Verdict::Inconclusive;
  }

  // A2: the sup over the neighborhood sample settles uniformly.
  {
    std::vector<double> cur = sys.neighborhood_sample;
    for (int i = 0; i <= cfg.horizon; ++i) {
      double s = 0;
      for (double x : cur) s = std::max(s, sys.d(xbar, x));
      rep.sup_curve.push_back(s);
      for (double& x : cur) x = sys.f(x);
    }
    bool ok = true, undecided = false;
    for (double eps : cfg.epsilon_schedule) {
      const int s = detail::settled_in_ball(rep.sup_curve, eps);
      if (s < 0) {
        ok = false;
        break;
      }
      if (s == 0) undecided = true;
    }
    rep.a2 = !ok ? Verdict::Refuted
                 : (undecided ? Verdict::Inconclusive : Verdict::Supported);
  }

  // Continuity spot-checks: shrinking two-sided stencils at the candidate
  // and at sampled neighborhood points.
  {
    std::vector<double> probes{xbar};
    const std::size_t stride = std::max<std::size_t>(1, sys.neighborhood_sample.size() / 8);
    for (std::size_t i = 0; i < sys.neighborhood_sample.size(); i += stride)
      probes.push_back(sys.neighborhood_sample[i]);
    bool all_ok = true, any_ref = false;
    for (double x : probes) {
      std::vector<double> wiggle;
      const double scale = std::max(1.0, std::abs(x));
      for (int j = 3; j <= 40; ++j) {
        const double h = scale * std::ldexp(1.0, -j);
        wiggle.push_back(std::max(sys.d(sys.f(x + h), sys.f(x)),
                                  sys.d(sys.f(x - h), sys.f(x))));
      }
      if (!tends_to_zero(wiggle, cfg.tol)) {
        all_ok = false;
        if (stays_above(wiggle, cfg.refute_floor)) any_ref = true;
      }
    }
    rep.continuity = any_ref ? Verdict::Refuted
                             : (all_ok ? Verdict::Supported : Verdict::Inconclusive);
  }

  // Sibling trends over the same samples.
  {
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < sys.domain_sample.size() && pairs.size() < 16; ++i)
      for (std::size_t j = i + 1; j < sys.domain_sample.size() && pairs.size() < 16; ++j)
        pairs.push_back({sys.domain_sample[i], sys.domain_sample[j]});
    if (!pairs.empty())
      rep.t_contraction =
          t_contractive_approximate(sys, pairs, cfg.horizon, cfg.tol, cfg.refute_floor)
              .verdict;
    auto cover = uniform_cover_condition_check(sys, cfg.horizon, cfg.tol, cfg.refute_floor);
    rep.uniform_cover = cover.verdict;
    rep.diameter_curve = cover.diameters;
  }

  rep.remetrizable = rep.a1 == Verdict::Supported && rep.a2 == Verdict::Supported &&
                     rep.continuity == Verdict::Supported;
  if (rep.remetrizable && rep.note.empty())
    rep.note = "attraction and continuity hypotheses verified on samples";
  return rep;
}

}  // namespace orbitkit
