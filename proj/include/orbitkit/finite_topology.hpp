#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace orbitkit {

// Points of an n-point space are 0..n-1; subsets are bitmasks.
using Mask = std::uint32_t;

inline Mask point_bit(int x) { return Mask(1) << x; }
inline bool mask_contains(Mask m, int x) { return (m >> x) & 1u; }
inline bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }

/**
 * Finite topological space: point count plus the family of open sets.
 * `opens` is kept sorted and must contain the empty set and the full set
 * and be closed under pairwise union and intersection (see validate()).
 */
struct FiniteSpace {
  int n = 0;
  std::vector<Mask> opens;

  Mask full() const { return (Mask(1) << n) - 1; }
  bool is_open(Mask m) const;
  void validate() const;  // throws std::invalid_argument on axiom violation
};

// m[x] = intersection of all opens containing x (itself open in finite spaces).
struct MinimalBase {
  std::vector<Mask> m;
};

// Set-valued self-map: images[x] is the (possibly empty) image S(x).
struct FiniteSetMap {
  std::vector<Mask> images;
};

/**
 * Eventually periodic orbit x_0, x_1, ... stored as finite tail + repeating
 * cycle.  The cycle must be nonempty and of minimal period; consecutive
 * membership x_{i+1} in S(x_i) (including the tail->cycle junction and the
 * cycle wrap) is what validate_orbit enforces.
 */
struct OrbitDescriptor {
  std::vector<int> tail;
  std::vector<int> cycle;

  int first_point() const { return tail.empty() ? cycle.front() : tail.front(); }
  // Point at sequence position i.
  int at(std::size_t i) const {
    if (i < tail.size()) return tail[i];
    return cycle[(i - tail.size()) % cycle.size()];
  }
  bool operator==(const OrbitDescriptor&) const = default;
};

struct SeparationClass {
  bool t0 = false, t1 = false, hausdorff = false, discrete = false;
};

struct CoverContractivityResult {
  bool contractive = false;
  // Populated iff !contractive: an open cover of the space in which no
  // member contains some orbit point together with its whole image.
  std::vector<Mask> failing_cover;
};

struct FixedPointAudit {
  bool closed_graph = false;
  bool cover_condition = false;  // every cover has U with S(x_i) in U and x_{i+2} in U
  std::vector<int> fixed_points; // all x with x in S(x)
  bool consistent = false;       // premises imply a fixed point exists
};

// ---------------------------------------------------------------------------

/**
 * Every topology on n labeled points, each exactly once, via the bijection
 * with reflexive transitive relations (minimal-open-set assignments).
 * Counts for n = 1..4: 1, 4, 29, 355.  n = 5 (6942 topologies) is gated
 * behind allow_large and prints a runtime warning to stderr.
 */
std::vector<FiniteSpace> enumerate_topologies(int n, bool allow_large = false);

// Independent oracle: filter all subset families for the closure axioms.
// Kept deliberately naive; n <= 4.
std::vector<FiniteSpace> enumerate_topologies_brute_force(int n);

SeparationClass separation_class(const FiniteSpace& space);

MinimalBase minimal_base(const FiniteSpace& space);

// Eventual containment of the orbit in every neighborhood of x.
bool converges_to(const FiniteSpace& space, const OrbitDescriptor& seq, int x);
// Finite list shorthand: interpreted as eventually constant at its last entry.
bool converges_to(const FiniteSpace& space, const std::vector<int>& seq, int x);

void validate_orbit(const FiniteSpace& space, const FiniteSetMap& map,
                    const OrbitDescriptor& orbit);

/**
 * Cover contractivity of an orbit: for every open cover some member U
 * contains an orbit point x_i with S(x_i) entirely inside U.
 *
 * Decided by non-witness reduction: collect the opens that witness no orbit
 * index; the orbit fails exactly when those non-witness opens already cover
 * the space (and they then form the returned failing cover).
 */
CoverContractivityResult is_cover_contractive(const FiniteSpace& space,
                                              const FiniteSetMap& map,
                                              const OrbitDescriptor& orbit);

// Oracle path used for cross-checks: enumerate every subfamily of opens that
// covers the space and test each for a witness directly.
bool is_cover_contractive_exhaustive(const FiniteSpace& space, const FiniteSetMap& map,
                                     const OrbitDescriptor& orbit);

/**
 * Points xbar admitting a subsequence x_{i_k} -> xbar along which every
 * selection from S(x_{i_k}) also converges to xbar.  On finite spaces this
 * reduces to: some cycle point c has both c and S(c) inside the minimal
 * open set of xbar.
 */
std::vector<int> strong_accumulation_points(const FiniteSpace& space, const FiniteSetMap& map,
                                            const OrbitDescriptor& orbit);

// Graph of S closed in the product topology; finite-space criterion via
// minimal basic boxes around points outside the graph.
bool is_closed_graph(const FiniteSpace& space, const FiniteSetMap& map);

// Oracle path: complement of the graph is a union of open boxes, quantifying
// over all pairs of opens rather than minimal sets.
bool is_closed_graph_via_complement(const FiniteSpace& space, const FiniteSetMap& map);

/**
 * Audit of the closed-graph fixed-point principle on one orbit:
 * if the graph is closed and every open cover has a member containing some
 * S(x_i) together with the point x_{i+2}, then S must have a fixed point.
 * `consistent` is false exactly when premises hold but no fixed point exists.
 */
FixedPointAudit audit_closed_graph_fixed_point(const FiniteSpace& space, const FiniteSetMap& map,
                                               const OrbitDescriptor& orbit);

// All set-valued maps on n points, reachable by index: 0 <= code < (2^n)^n.
std::uint64_t set_map_count(int n);
FiniteSetMap decode_set_map(int n, std::uint64_t code);

/**
 * Every eventually periodic S-orbit starting at `start` with tail length
 * <= max_tail and cycle length <= max_cycle, in canonical form (minimal
 * cycle period, tail not absorbable into the cycle), each exactly once.
 */
void enumerate_orbits(const FiniteSpace& space, const FiniteSetMap& map, int start, int max_tail,
                      int max_cycle, const std::function<void(const OrbitDescriptor&)>& yield);

}  // namespace orbitkit
