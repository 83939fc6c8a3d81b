#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orbitkit/descent.hpp"
#include "orbitkit/orbit_engine.hpp"
#include "orbitkit/premetric.hpp"
#include "orbitkit/rational.hpp"

namespace orbitkit {

// A ready-to-drive instance: a premetric space, dynamics on it, a start
// point, and the limit candidates worth checking first.
template <class P, class R>
struct GalleryScenario {
  std::string name;
  PSpaceInstance<P, R> space;
  SetValuedMap<P> map;
  P start;
  std::vector<P> pool;
};

// ---------------------------------------------------------------------------
// Halving dynamics on the rationals
// ---------------------------------------------------------------------------

inline Premetric<Rat, Rat> rational_abs_premetric() {
  return [](const Rat& x, const Rat& y) { return scalar_abs(Rat(x - y)); };
}

// S(x) = [0, |x|/2], sampled as |x|/2, 0, |x|/4, |x|/8, ... (prefix-stable,
// includes both the widest point and the endpoint 0 at every budget >= 2).
inline SetValuedMap<Rat> halving_interval_map() {
  SetValuedMap<Rat> m;
  m.sample = [](const Rat& x, int budget, std::uint64_t) {
    std::vector<Rat> out;
    Rat h = scalar_abs(x) / 2;
    if (budget >= 1) out.push_back(h);
    if (budget >= 2) out.push_back(Rat(0));
    Rat cur = h / 2;
    while (static_cast<int>(out.size()) < budget) {
      out.push_back(cur);
      cur /= 2;
    }
    return out;
  };
  m.contains = [](const Rat& x, const Rat& y) { return y >= 0 && y <= scalar_abs(x) / 2; };
  m.is_known_empty = [](const Rat&) { return std::optional<bool>(false); };
  return m;
}

inline GalleryScenario<Rat, Rat> rationals_halving_scenario() {
  GalleryScenario<Rat, Rat> sc;
  sc.name = "rationals";
  sc.space.name = "rationals-abs";
  sc.space.p = rational_abs_premetric();
  sc.space.carrier_sample = [](int budget, std::uint64_t) {
    std::vector<Rat> out;
    if (budget >= 1) out.push_back(Rat(0));
    for (int k = 0; static_cast<int>(out.size()) < budget; ++k) {
      out.push_back(pow2(-k));
      if (static_cast<int>(out.size()) < budget) out.push_back(Rat(-pow2(-k)));
    }
    return out;
  };
  sc.space.base.contains = [](const Rat& c, int depth, const Rat& q) {
    return scalar_abs(Rat(q - c)) < pow2(-depth);
  };
  sc.space.base.sample = [](const Rat& c, int depth, int budget, std::uint64_t) {
    std::vector<Rat> out{c};
    for (int j = 1; static_cast<int>(out.size()) < budget; ++j) {
      out.push_back(Rat(c + pow2(-depth - j)));
      if (static_cast<int>(out.size()) < budget) out.push_back(Rat(c - pow2(-depth - j)));
    }
    return out;
  };
  sc.space.converges = make_base_oracle(sc.space.base);
  sc.map = halving_interval_map();
  sc.start = Rat(1);
  sc.pool = {Rat(0)};
  return sc;
}

// ---------------------------------------------------------------------------
// The line with a doubled origin
// ---------------------------------------------------------------------------

enum class RadiusSchedule { Harmonic, Dyadic };

enum class TwoOriginKind { Real, OriginA, OriginB };

// A nonzero real number, or one of the two points glued in place of 0.
struct TwoOriginPoint {
  TwoOriginKind kind = TwoOriginKind::OriginA;
  Rat x;  // zero unless Real

  static TwoOriginPoint real(Rat v) {
    if (v == 0)
      throw std::invalid_argument("0 itself is not a carrier point: the origin is doubled");
    return {TwoOriginKind::Real, std::move(v)};
  }
  static TwoOriginPoint origin_a() { return {TwoOriginKind::OriginA, Rat(0)}; }
  static TwoOriginPoint origin_b() { return {TwoOriginKind::OriginB, Rat(0)}; }

  bool operator==(const TwoOriginPoint& o) const { return kind == o.kind && x == o.x; }
};

inline std::string to_string(const TwoOriginPoint& p) {
  switch (p.kind) {
    case TwoOriginKind::Real: return to_string(p.x);
    case TwoOriginKind::OriginA: return "origin-a";
    default: return "origin-b";
  }
}

inline Rat two_origins_radius(RadiusSchedule sched, int depth) {
  if (depth < 1) throw std::invalid_argument("neighborhood depth starts at 1");
  return sched == RadiusSchedule::Dyadic ? pow2(-depth) : rat(1, depth);
}

/**
 * Premetric: |x - y| between reals, |t| between a real t and either origin,
 * and 1 between the two origins.  Either origin detects a real sequence
 * vanishing in magnitude, which is exactly the failure of uniqueness of
 * limits this carrier exists to exhibit.
 */
inline PSpaceInstance<TwoOriginPoint, Rat> two_origins_instance(RadiusSchedule sched) {
  PSpaceInstance<TwoOriginPoint, Rat> inst;
  inst.name = sched == RadiusSchedule::Dyadic ? "two-origins-dyadic" : "two-origins-harmonic";
  inst.p = [](const TwoOriginPoint& u, const TwoOriginPoint& v) {
    if (u == v) return Rat(0);
    const bool ur = u.kind == TwoOriginKind::Real, vr = v.kind == TwoOriginKind::Real;
    if (ur && vr) return scalar_abs(Rat(u.x - v.x));
    if (ur) return scalar_abs(u.x);
    if (vr) return scalar_abs(v.x);
    return Rat(1);  // the two origins
  };
  inst.carrier_sample = [](int budget, std::uint64_t) {
    std::vector<TwoOriginPoint> out{TwoOriginPoint::origin_a(), TwoOriginPoint::origin_b()};
    for (int k = 0; static_cast<int>(out.size()) < budget; ++k) {
      out.push_back(TwoOriginPoint::real(pow2(-k)));
      if (static_cast<int>(out.size()) < budget)
        out.push_back(TwoOriginPoint::real(Rat(-pow2(-k))));
    }
    if (static_cast<int>(out.size()) > budget) out.resize(budget);
    return out;
  };
  inst.base.contains = [sched](const TwoOriginPoint& c, int depth, const TwoOriginPoint& q) {
    const Rat r = two_origins_radius(sched, depth);
    if (c.kind == TwoOriginKind::Real) {
      if (q.kind != TwoOriginKind::Real) return false;
      Rat rho = std::min(r, scalar_abs(c.x));  // keep the punctured origin out
      return scalar_abs(Rat(q.x - c.x)) < rho;
    }
    if (q.kind == c.kind) return true;
    if (q.kind != TwoOriginKind::Real) return false;  // the twin origin
    return scalar_abs(q.x) < r;
  };
  inst.base.sample = [sched](const TwoOriginPoint& c, int depth, int budget, std::uint64_t) {
    const Rat r = two_origins_radius(sched, depth);
    std::vector<TwoOriginPoint> out{c};
    const Rat rho = c.kind == TwoOriginKind::Real ? std::min(r, scalar_abs(c.x)) : r;
    const Rat center = c.kind == TwoOriginKind::Real ? c.x : Rat(0);
    for (int j = 1; static_cast<int>(out.size()) < budget; ++j) {
      out.push_back(TwoOriginPoint::real(Rat(center + rho / pow2(j))));
      if (static_cast<int>(out.size()) < budget)
        out.push_back(TwoOriginPoint::real(Rat(center - rho / pow2(j))));
    }
    if (static_cast<int>(out.size()) > budget) out.resize(budget);
    return out;
  };
  inst.converges = make_base_oracle(inst.base);
  return inst;
}

// ---------------------------------------------------------------------------
// Double-limit sequences and their witness dynamics
// ---------------------------------------------------------------------------

template <class P>
struct DoubleLimitSequence {
  std::vector<P> points;
  std::vector<int> depths;  // depth each point was drawn from; strictly increasing
};

/**
 * Builds a sequence lying ever deeper in the neighborhood bases of BOTH a
 * and b.  Exists only for non-separated pairs: if no sampled common point
 * shows up at some probed depth, the pair looks Hausdorff and construction
 * refuses.  Next depth = deepest common containment of the point just
 * picked, plus one, so the depths strictly increase.
 */
template <class P>
DoubleLimitSequence<P> build_double_limit_sequence(const NeighborhoodBase<P>& base, const P& a,
                                                   const P& b, int length, int budget,
                                                   std::uint64_t seed,
                                                   int depth_cap = 1 << 20) {
  auto common_at = [&](int d, const P* prev) -> std::optional<P> {
    for (const auto& q : base.sample(a, d, budget, mix_seed(seed, d))) {
      if (q == a || q == b) continue;
      if (!base.contains(b, d, q)) continue;
      if (prev && q == *prev) continue;
      return q;
    }
    return std::nullopt;
  };
  for (int d = 1; d <= 8; ++d)
    if (!common_at(d, nullptr))
      throw std::invalid_argument(
          "separation detected (the pair looks Hausdorff): no sampled common point at depth " +
          std::to_string(d));

  DoubleLimitSequence<P> out;
  int d = 1;
  for (int i = 0; i < length; ++i) {
    auto q = common_at(d, out.points.empty() ? nullptr : &out.points.back());
    if (!q)
      throw std::runtime_error("no common witness sampled at depth " + std::to_string(d));
    out.points.push_back(*q);
    out.depths.push_back(d);

    auto member = [&](int n) { return base.contains(a, n, *q) && base.contains(b, n, *q); };
    int lo = d, step = 1;
    while (lo + step <= depth_cap && member(lo + step)) {
      lo += step;
      step *= 2;
    }
    if (lo == depth_cap)
      throw std::runtime_error("common membership did not terminate within the depth cap");
    int hi = std::min(depth_cap + 1, lo + step);
    while (lo + 1 < hi) {
      int mid = lo + (hi - lo) / 2;
      if (member(mid))
        lo = mid;
      else
        hi = mid;
    }
    d = lo + 1;
  }
  return out;
}

enum class WitnessAnchoring {
  ChainOnly,  // S(x_i) = {x_{i+1}}
  Anchored    // S(x_i) = {x_{i+1}, a, b}
};

/**
 * Finite-support dynamics built over a double-limit sequence: the chain
 * advances along the sequence, the two limits swap into each other, and the
 * final chain point feeds both limits.  Off-structure points have certified
 * empty images.
 */
template <class P>
SetValuedMap<P> double_limit_witness_map(std::vector<P> xs, P a, P b,
                                         WitnessAnchoring anchoring) {
  if (xs.size() < 2)
    throw std::invalid_argument("witness dynamics need at least two chain points");
  auto lookup = [xs, a, b, anchoring](const P& q) -> std::optional<std::vector<P>> {
    if (q == a) return std::vector<P>{b};
    if (q == b) return std::vector<P>{a};
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (xs[i] == q) {
        if (i + 1 == xs.size()) return std::vector<P>{a, b};
        if (anchoring == WitnessAnchoring::Anchored)
          return std::vector<P>{xs[i + 1], a, b};
        return std::vector<P>{xs[i + 1]};
      }
    return std::nullopt;
  };
  SetValuedMap<P> m;
  m.sample = [lookup](const P& q, int budget, std::uint64_t) {
    auto v = lookup(q);
    if (!v) return std::vector<P>{};
    if (budget >= 0 && v->size() > static_cast<std::size_t>(budget))
      v->resize(static_cast<std::size_t>(budget));
    return *v;
  };
  m.contains = [lookup](const P& x, const P& y) {
    auto v = lookup(x);
    if (!v) return false;
    for (const auto& z : *v)
      if (z == y) return true;
    return false;
  };
  m.is_known_empty = [lookup](const P& q) {
    return std::optional<bool>(!lookup(q).has_value());
  };
  return m;
}

inline GalleryScenario<TwoOriginPoint, Rat> two_origins_scenario(RadiusSchedule sched,
                                                                 int chain_length = 40,
                                                                 WitnessAnchoring anchoring =
                                                                     WitnessAnchoring::Anchored) {
  GalleryScenario<TwoOriginPoint, Rat> sc;
  sc.space = two_origins_instance(sched);
  sc.name = sc.space.name;
  const auto a = TwoOriginPoint::origin_a(), b = TwoOriginPoint::origin_b();
  auto seq = build_double_limit_sequence(sc.space.base, a, b, chain_length, 16, 7);
  sc.start = seq.points.front();
  sc.map = double_limit_witness_map(seq.points, a, b, anchoring);
  sc.pool = {a, b};
  return sc;
}

// ---------------------------------------------------------------------------
// Tangent-disk half-plane
// ---------------------------------------------------------------------------

// Closed upper half-plane point with exact rational coordinates.
struct MoorePoint {
  Rat x;
  Rat y;
  MoorePoint(Rat px, Rat py) : x(std::move(px)), y(std::move(py)) {
    if (y < 0) throw std::invalid_argument("carrier is the closed upper half-plane");
  }
  bool operator==(const MoorePoint& o) const { return x == o.x && y == o.y; }
};

inline std::string to_string(const MoorePoint& p) {
  return "(" + to_string(p.x) + "," + to_string(p.y) + ")";
}

/**
 * Membership of q in the n-th basic neighborhood of c: radius-1/n balls at
 * interior points; at boundary points, the open disk of radius 1/(2n)
 * tangent from above plus the point itself.  All comparisons exact.
 */
inline bool moore_in_base(const MoorePoint& c, long n, const MoorePoint& q) {
  if (n < 1) throw std::invalid_argument("neighborhood index starts at 1");
  if (c.y > 0) {
    Rat d2 = (q.x - c.x) * (q.x - c.x) + (q.y - c.y) * (q.y - c.y);
    return Rat(n) * Rat(n) * d2 < 1;
  }
  if (q == c) return true;
  if (q.y == 0) return false;  // other boundary points never enter
  Rat d2 = (q.x - c.x) * (q.x - c.x) + q.y * q.y;
  return Rat(n) * d2 < Rat(2) * q.y;
}

// Deepest n >= 1 with q inside the n-th basic neighborhood of c (0 if none).
inline mpz_class moore_base_depth(const MoorePoint& c, const MoorePoint& q) {
  if (c.y > 0) {
    Rat d2 = (q.x - c.x) * (q.x - c.x) + (q.y - c.y) * (q.y - c.y);
    if (d2 == 0) throw std::logic_error("depth of a point in its own base is unbounded");
    // n^2 d2 < 1  <=>  n^2 * num <= den - 1
    mpz_class cap = (d2.get_den() - 1) / d2.get_num();
    mpz_class n;
    mpz_sqrt(n.get_mpz_t(), cap.get_mpz_t());
    return n;
  }
  if (q.y == 0) return 0;
  Rat ratio = Rat(2) * q.y / ((q.x - c.x) * (q.x - c.x) + q.y * q.y);  // n < ratio
  mpz_class n;
  mpz_cdiv_q(n.get_mpz_t(), ratio.get_num().get_mpz_t(), ratio.get_den().get_mpz_t());
  n -= 1;
  if (n < 0) n = 0;
  return n;
}

// p(c, q) = reciprocal of q's depth in the bases of c; 1 when q misses even
// the widest neighborhood, 0 exactly on the diagonal.
inline Premetric<MoorePoint, Rat> moore_premetric() {
  return [](const MoorePoint& c, const MoorePoint& q) {
    if (c == q) return Rat(0);
    mpz_class n = moore_base_depth(c, q);
    if (n == 0) return Rat(1);
    return Rat(Rat(1) / Rat(mpq_class(n)));
  };
}

inline PSpaceInstance<MoorePoint, Rat> moore_plane_instance() {
  PSpaceInstance<MoorePoint, Rat> inst;
  inst.name = "tangent-disk-half-plane";
  inst.p = moore_premetric();
  inst.carrier_sample = [](int budget, std::uint64_t) {
    std::vector<MoorePoint> out{{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {rat(1, 2), rat(1, 2)},
                                {Rat(1), Rat(1)}, {Rat(2), Rat(0)}, {rat(1, 4), rat(1, 4)},
                                {Rat(0), Rat(1)}, {rat(3, 2), Rat(0)}};
    if (static_cast<int>(out.size()) > budget)
      out.erase(out.begin() + std::max(budget, 0), out.end());
    return out;
  };
  inst.base.contains = [](const MoorePoint& c, int depth, const MoorePoint& q) {
    return moore_in_base(c, depth, q);
  };
  inst.base.sample = [](const MoorePoint& c, int depth, int budget, std::uint64_t) {
    std::vector<MoorePoint> out{c};
    for (int j = 1; static_cast<int>(out.size()) < budget; ++j) {
      if (c.y > 0) {
        out.push_back(MoorePoint(c.x, Rat(c.y + rat(1, depth) / pow2(j))));
        if (static_cast<int>(out.size()) < budget)
          out.push_back(MoorePoint(Rat(c.x + rat(1, depth) / pow2(j)), c.y));
      } else {
        out.push_back(MoorePoint(c.x, Rat(rat(1, depth) / pow2(j))));
      }
    }
    return out;
  };
  inst.converges = make_base_oracle(inst.base);
  return inst;
}

// Boundary points dive to the diagonal at half scale; interior points drop
// to their shadow on the axis.  From (1,0) the walk alternates between the
// axis and the diagonal while halving, and only the corner stays put.
inline SetValuedMap<MoorePoint> moore_dance_map() {
  SetValuedMap<MoorePoint> m;
  m.sample = [](const MoorePoint& u, int, std::uint64_t) {
    if (u.y == 0) return std::vector<MoorePoint>{MoorePoint(Rat(u.x / 2), Rat(u.x / 2))};
    return std::vector<MoorePoint>{MoorePoint(u.x, Rat(0))};
  };
  m.contains = [](const MoorePoint& u, const MoorePoint& v) {
    if (u.y == 0) return v == MoorePoint(Rat(u.x / 2), Rat(u.x / 2));
    return v == MoorePoint(u.x, Rat(0));
  };
  m.is_known_empty = [](const MoorePoint&) { return std::optional<bool>(false); };
  return m;
}

inline GalleryScenario<MoorePoint, Rat> moore_plane_scenario() {
  return {"half-plane", moore_plane_instance(), moore_dance_map(),
          MoorePoint(Rat(1), Rat(0)), {MoorePoint(Rat(0), Rat(0))}};
}

// ---------------------------------------------------------------------------
// Ordinal-interval dynamics (order topology, no premetric)
// ---------------------------------------------------------------------------

// (k, m) stands for the k-th limit block, m-th successor; lexicographic.
struct OrdinalPoint {
  int level = 0;
  long long index = 0;
  bool operator==(const OrdinalPoint& o) const {
    return level == o.level && index == o.index;
  }
  bool operator<(const OrdinalPoint& o) const {
    return level != o.level ? level < o.level : index < o.index;
  }
};

inline std::string to_string(const OrdinalPoint& p) {
  return "(" + std::to_string(p.level) + "," + std::to_string(p.index) + ")";
}

struct OrdinalScenario {
  int levels = 1;                   // blocks below the top element
  OrdinalPoint top;                 // (levels, 0)
  SetValuedMap<OrdinalPoint> next;  // strict upper set; empty at the top (certified)
  SetValuedMap<OrdinalPoint> self;  // same, but the top maps to itself
  NeighborhoodBase<OrdinalPoint> base;
  ConvergenceOracle<OrdinalPoint> converges;
};

/**
 * Carrier: {(k, m) : 0 <= k < levels, m >= 0} plus the top (levels, 0).
 * `next` sends x to points strictly above it (the top is sampled early so
 * bounded budgets can reach it); its value at the top is empty and certified
 * so.  Order topology: points with a direct predecessor are isolated, and
 * the base of a limit (k, 0), k >= 1, at depth n is the tail
 * {(k-1, m) : m > n} together with the point itself.
 */
inline OrdinalScenario ordinal_scenario(int levels = 1) {
  if (levels < 1) throw std::invalid_argument("need at least one block");
  OrdinalScenario sc;
  sc.levels = levels;
  sc.top = {levels, 0};
  const OrdinalPoint top = sc.top;

  auto valid = [levels, top](const OrdinalPoint& q) {
    return (q.level >= 0 && q.level < levels && q.index >= 0) || q == top;
  };
  sc.next.contains = [valid, top](const OrdinalPoint& x, const OrdinalPoint& y) {
    return valid(x) && valid(y) && x < y;
  };
  sc.next.sample = [valid, top](const OrdinalPoint& x, int budget, std::uint64_t) {
    std::vector<OrdinalPoint> out;
    if (!valid(x) || x == top) return out;
    if (budget >= 1) out.push_back({x.level, x.index + 1});
    if (budget >= 2) out.push_back(top);
    for (long long j = 2; static_cast<long long>(out.size()) < budget; ++j)
      out.push_back({x.level, x.index + j});
    return out;
  };
  sc.next.is_known_empty = [top](const OrdinalPoint& x) {
    return std::optional<bool>(x == top);
  };

  sc.self = sc.next;
  auto next_sample = sc.next.sample;
  sc.self.sample = [next_sample, top](const OrdinalPoint& x, int budget, std::uint64_t s) {
    if (x == top) return std::vector<OrdinalPoint>{top};
    return next_sample(x, budget, s);
  };
  auto next_contains = sc.next.contains;
  sc.self.contains = [next_contains, top](const OrdinalPoint& x, const OrdinalPoint& y) {
    if (x == top) return y == top;
    return next_contains(x, y);
  };
  sc.self.is_known_empty = [](const OrdinalPoint&) { return std::optional<bool>(false); };

  sc.base.contains = [valid](const OrdinalPoint& c, int depth, const OrdinalPoint& q) {
    if (!valid(c) || !valid(q)) return false;
    if (c.index == 0 && c.level >= 1)
      return q == c || (q.level == c.level - 1 && q.index > depth);
    return q == c;
  };
  sc.base.sample = [](const OrdinalPoint& c, int depth, int budget, std::uint64_t) {
    std::vector<OrdinalPoint> out{c};
    if (c.index == 0 && c.level >= 1)
      for (long long j = 1; static_cast<long long>(out.size()) < budget; ++j)
        out.push_back({c.level - 1, depth + j});
    return out;
  };
  sc.converges = make_base_oracle(sc.base);
  return sc;
}

// ---------------------------------------------------------------------------
// Nested shells around an irrational square root
// ---------------------------------------------------------------------------

// k-th convergent of sqrt(2): (p, q) -> (p + 2q, p + q) from (1, 1); the
// recurrence keeps |p^2 - 2 q^2| = 1, so |c_k^2 - 2| = 1/q_k^2 exactly.
inline Rat sqrt2_convergent(int k) {
  if (k < 0) throw std::invalid_argument("convergent index starts at 0");
  mpz_class p = 1, q = 1;
  for (int i = 0; i < k; ++i) {
    mpz_class np = p + 2 * q, nq = p + q;
    p = np;
    q = nq;
  }
  return Rat(mpq_class(p) / mpq_class(q));
}

/**
 * C_level = { x in [1, 2] : |x^2 - 2| <= 2^-level }: nonempty nested closed
 * shells around sqrt(2) whose rational intersection is empty.  Sampled by
 * convergents, which are pairwise distinct with mutual gaps far above any
 * realistic tolerance, so a bounded walk honestly finds no accumulation.
 */
inline NestedFamily<Rat> sqrt2_shell_family() {
  NestedFamily<Rat> fam;
  fam.name = "sqrt2-shells";
  fam.contains = [](int level, const Rat& x) {
    if (level < 1) throw std::invalid_argument("shell level starts at 1");
    return x >= 1 && x <= 2 && scalar_abs(Rat(x * x - 2)) <= pow2(-level);
  };
  fam.sample_set = [](int level, int budget, std::uint64_t) {
    std::vector<Rat> out;
    mpz_class p = 1, q = 1;
    mpz_class need = 1;
    need <<= level;  // q^2 >= 2^level  <=>  1/q^2 <= 2^-level
    while (static_cast<int>(out.size()) < budget) {
      if (q * q >= need) out.push_back(Rat(mpq_class(p) / mpq_class(q)));
      mpz_class np = p + 2 * q, nq = p + q;
      p = np;
      q = nq;
    }
    return out;
  };
  return fam;
}

}  // namespace orbitkit
