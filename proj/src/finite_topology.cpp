#include "orbitkit/finite_topology.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>

namespace orbitkit {

bool FiniteSpace::is_open(Mask m) const {
  return std::binary_search(opens.begin(), opens.end(), m);
}

void FiniteSpace::validate() const {
  if (n < 1 || n > 31) throw std::invalid_argument("space: n out of range");
  if (!std::is_sorted(opens.begin(), opens.end()))
    throw std::invalid_argument("space: opens not sorted");
  if (std::adjacent_find(opens.begin(), opens.end()) != opens.end())
    throw std::invalid_argument("space: duplicate open");
  if (opens.empty() || opens.front() != 0 || opens.back() != full())
    throw std::invalid_argument("space: empty set or full set missing");
  for (Mask u : opens) {
    if (u & ~full()) throw std::invalid_argument("space: open outside carrier");
    for (Mask v : opens) {
      if (!is_open(u | v) || !is_open(u & v))
        throw std::invalid_argument("space: opens not closed under union/intersection");
    }
  }
}

namespace {

// rows[x] = candidate minimal open set of x.  Valid iff reflexive and
// transitive; each valid assignment corresponds to exactly one topology.
bool rows_transitive(const std::vector<Mask>& rows, int n) {
  for (int x = 0; x < n; ++x) {
    Mask r = rows[x];
    for (int y = 0; y < n; ++y)
      if (mask_contains(r, y) && !subset_of(rows[y], r)) return false;
  }
  return true;
}

FiniteSpace space_from_rows(const std::vector<Mask>& rows, int n) {
  FiniteSpace s;
  s.n = n;
  const Mask full = (Mask(1) << n) - 1;
  for (Mask u = 0; u <= full; ++u) {
    bool open = true;
    for (int x = 0; x < n && open; ++x)
      if (mask_contains(u, x) && !subset_of(rows[x], u)) open = false;
    if (open) s.opens.push_back(u);
  }
  return s;
}

}  // namespace

std::vector<FiniteSpace> enumerate_topologies(int n, bool allow_large) {
  if (n < 1 || n > 5) throw std::invalid_argument("enumerate_topologies: n must be 1..5");
  if (n == 5) {
    if (!allow_large)
      throw std::invalid_argument("enumerate_topologies: n=5 requires allow_large");
    std::fprintf(stderr,
                 "orbitkit: warning: enumerating all 6942 topologies on 5 points; "
                 "downstream sweeps at this size can be slow\n");
  }
  const int free_bits = n * (n - 1);
  std::vector<FiniteSpace> out;
  std::vector<Mask> rows(n);
  for (std::uint64_t code = 0; code < (std::uint64_t(1) << free_bits); ++code) {
    std::uint64_t c = code;
    for (int x = 0; x < n; ++x) {
      Mask r = point_bit(x);
      for (int y = 0; y < n; ++y) {
        if (y == x) continue;
        if (c & 1) r |= point_bit(y);
        c >>= 1;
      }
      rows[x] = r;
    }
    if (rows_transitive(rows, n)) out.push_back(space_from_rows(rows, n));
  }
  return out;
}

std::vector<FiniteSpace> enumerate_topologies_brute_force(int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("brute force enumeration: n must be 1..4");
  const Mask full = (Mask(1) << n) - 1;
  // Candidate families: any subset of the proper nonempty subsets, plus the
  // forced members {} and X.
  std::vector<Mask> proper;
  for (Mask u = 1; u < full; ++u) proper.push_back(u);
  std::vector<FiniteSpace> out;
  for (std::uint64_t pick = 0; pick < (std::uint64_t(1) << proper.size()); ++pick) {
    std::vector<Mask> fam{0};
    for (std::size_t i = 0; i < proper.size(); ++i)
      if ((pick >> i) & 1) fam.push_back(proper[i]);
    fam.push_back(full);
    bool closed = true;
    for (std::size_t i = 0; i < fam.size() && closed; ++i)
      for (std::size_t j = i + 1; j < fam.size() && closed; ++j) {
        if (!std::binary_search(fam.begin(), fam.end(), fam[i] | fam[j])) closed = false;
        if (!std::binary_search(fam.begin(), fam.end(), fam[i] & fam[j])) closed = false;
      }
    if (closed) out.push_back(FiniteSpace{n, fam});
  }
  return out;
}

MinimalBase minimal_base(const FiniteSpace& space) {
  MinimalBase b;
  b.m.assign(space.n, space.full());
  for (Mask u : space.opens)
    for (int x = 0; x < space.n; ++x)
      if (mask_contains(u, x)) b.m[x] &= u;
  return b;
}

SeparationClass separation_class(const FiniteSpace& space) {
  SeparationClass c;
  const int n = space.n;
  // T0: some open separates each pair one way.
  c.t0 = true;
  for (int x = 0; x < n && c.t0; ++x)
    for (int y = x + 1; y < n && c.t0; ++y) {
      bool sep = false;
      for (Mask u : space.opens)
        if (mask_contains(u, x) != mask_contains(u, y)) { sep = true; break; }
      c.t0 = sep;
    }
  // T1: complements of singletons are open.
  c.t1 = true;
  for (int x = 0; x < n; ++x)
    if (!space.is_open(space.full() & ~point_bit(x))) { c.t1 = false; break; }
  // Hausdorff: disjoint open neighborhoods, quantified over the open family.
  c.hausdorff = true;
  for (int x = 0; x < n && c.hausdorff; ++x)
    for (int y = x + 1; y < n && c.hausdorff; ++y) {
      bool sep = false;
      for (Mask u : space.opens) {
        if (!mask_contains(u, x)) continue;
        for (Mask v : space.opens)
          if (mask_contains(v, y) && (u & v) == 0) { sep = true; break; }
        if (sep) break;
      }
      c.hausdorff = sep;
    }
  c.discrete = space.opens.size() == (std::size_t(1) << n);
  // On finite spaces these coincide; guard the implementation against itself.
  if (c.t1 != c.discrete || c.t1 != c.hausdorff)
    throw std::logic_error("separation_class: finite T1/Hausdorff/discrete mismatch");
  return c;
}

bool converges_to(const FiniteSpace& space, const OrbitDescriptor& seq, int x) {
  if (x < 0 || x >= space.n) throw std::invalid_argument("converges_to: point out of range");
  if (seq.cycle.empty()) throw std::invalid_argument("converges_to: empty cycle");
  const Mask mx = minimal_base(space).m[x];
  for (int p : seq.cycle)
    if (!mask_contains(mx, p)) return false;
  return true;
}

bool converges_to(const FiniteSpace& space, const std::vector<int>& seq, int x) {
  if (seq.empty()) throw std::invalid_argument("converges_to: empty sequence");
  OrbitDescriptor d;
  d.tail.assign(seq.begin(), seq.end() - 1);
  d.cycle = {seq.back()};
  return converges_to(space, d, x);
}

void validate_orbit(const FiniteSpace& space, const FiniteSetMap& map,
                    const OrbitDescriptor& orbit) {
  if (static_cast<int>(map.images.size()) != space.n)
    throw std::invalid_argument("orbit: map size mismatch");
  if (orbit.cycle.empty())
    throw std::invalid_argument("orbit ended: finite orbits have no cover semantics");
  auto in_range = [&](int p) { return p >= 0 && p < space.n; };
  auto step_ok = [&](int a, int b) { return mask_contains(map.images[a], b); };
  for (int p : orbit.tail)
    if (!in_range(p)) throw std::invalid_argument("orbit: point out of range");
  for (int p : orbit.cycle)
    if (!in_range(p)) throw std::invalid_argument("orbit: point out of range");
  for (std::size_t i = 0; i + 1 < orbit.tail.size(); ++i)
    if (!step_ok(orbit.tail[i], orbit.tail[i + 1]))
      throw std::invalid_argument("orbit: not an S-orbit (tail step)");
  if (!orbit.tail.empty() && !step_ok(orbit.tail.back(), orbit.cycle.front()))
    throw std::invalid_argument("orbit: not an S-orbit (junction step)");
  for (std::size_t i = 0; i + 1 < orbit.cycle.size(); ++i)
    if (!step_ok(orbit.cycle[i], orbit.cycle[i + 1]))
      throw std::invalid_argument("orbit: not an S-orbit (cycle step)");
  if (!step_ok(orbit.cycle.back(), orbit.cycle.front()))
    throw std::invalid_argument("orbit: not an S-orbit (cycle wrap)");
  // Minimal period.
  const std::size_t L = orbit.cycle.size();
  for (std::size_t d = 1; d < L; ++d) {
    if (L % d) continue;
    bool rep = true;
    for (std::size_t i = d; i < L && rep; ++i)
      if (orbit.cycle[i] != orbit.cycle[i % d]) rep = false;
    if (rep) throw std::invalid_argument("orbit: cycle not of minimal period");
  }
}

namespace {

Mask visited_mask(const OrbitDescriptor& orbit) {
  Mask v = 0;
  for (int p : orbit.tail) v |= point_bit(p);
  for (int p : orbit.cycle) v |= point_bit(p);
  return v;
}

// Opens U such that some visited point x has x in U and S(x) inside U.
// Returned as a bitmask over indices into space.opens.
std::uint64_t witness_open_set(const FiniteSpace& space, const FiniteSetMap& map, Mask visited) {
  std::uint64_t w = 0;
  for (std::size_t ui = 0; ui < space.opens.size(); ++ui) {
    const Mask u = space.opens[ui];
    for (int x = 0; x < space.n; ++x) {
      if (!mask_contains(visited, x) || !mask_contains(u, x)) continue;
      if (subset_of(map.images[x], u)) { w |= std::uint64_t(1) << ui; break; }
    }
  }
  return w;
}

}  // namespace

CoverContractivityResult is_cover_contractive(const FiniteSpace& space, const FiniteSetMap& map,
                                              const OrbitDescriptor& orbit) {
  validate_orbit(space, map, orbit);
  const Mask visited = visited_mask(orbit);
  const std::uint64_t witnesses = witness_open_set(space, map, visited);
  Mask non_witness_union = 0;
  for (std::size_t ui = 0; ui < space.opens.size(); ++ui)
    if (!((witnesses >> ui) & 1)) non_witness_union |= space.opens[ui];
  CoverContractivityResult r;
  r.contractive = non_witness_union != space.full();
  if (!r.contractive) {
    for (std::size_t ui = 0; ui < space.opens.size(); ++ui)
      if (!((witnesses >> ui) & 1) && space.opens[ui] != 0)
        r.failing_cover.push_back(space.opens[ui]);
  }
  return r;
}

bool is_cover_contractive_exhaustive(const FiniteSpace& space, const FiniteSetMap& map,
                                     const OrbitDescriptor& orbit) {
  validate_orbit(space, map, orbit);
  if (space.opens.size() > 20)
    throw std::invalid_argument("exhaustive cover oracle: too many opens");
  const Mask visited = visited_mask(orbit);
  const std::uint64_t witnesses = witness_open_set(space, map, visited);
  const std::uint64_t n_fams = std::uint64_t(1) << space.opens.size();
  for (std::uint64_t fam = 1; fam < n_fams; ++fam) {
    Mask covered = 0;
    for (std::size_t ui = 0; ui < space.opens.size(); ++ui)
      if ((fam >> ui) & 1) covered |= space.opens[ui];
    if (covered != space.full()) continue;      // not a cover of X
    if ((fam & witnesses) == 0) return false;   // cover with no witness member
  }
  return true;
}

std::vector<int> strong_accumulation_points(const FiniteSpace& space, const FiniteSetMap& map,
                                            const OrbitDescriptor& orbit) {
  validate_orbit(space, map, orbit);
  const MinimalBase base = minimal_base(space);
  std::vector<int> out;
  for (int xb = 0; xb < space.n; ++xb) {
    const Mask m = base.m[xb];
    bool hit = false;
    for (int c : orbit.cycle)
      if (mask_contains(m, c) && subset_of(map.images[c], m)) { hit = true; break; }
    if (hit) out.push_back(xb);
  }
  return out;
}

bool is_closed_graph(const FiniteSpace& space, const FiniteSetMap& map) {
  const MinimalBase base = minimal_base(space);
  for (int a = 0; a < space.n; ++a)
    for (int b = 0; b < space.n; ++b) {
      if (mask_contains(map.images[a], b)) continue;
      // minimal box around (a,b) must avoid the graph entirely
      for (int a2 = 0; a2 < space.n; ++a2) {
        if (!mask_contains(base.m[a], a2)) continue;
        if (map.images[a2] & base.m[b]) return false;
      }
    }
  return true;
}

bool is_closed_graph_via_complement(const FiniteSpace& space, const FiniteSetMap& map) {
  // The complement of the graph is open iff around every non-member pair
  // there is an open box disjoint from the graph.
  for (int a = 0; a < space.n; ++a)
    for (int b = 0; b < space.n; ++b) {
      if (mask_contains(map.images[a], b)) continue;
      bool boxed = false;
      for (Mask u : space.opens) {
        if (!mask_contains(u, a)) continue;
        for (Mask v : space.opens) {
          if (!mask_contains(v, b)) continue;
          bool clear = true;
          for (int a2 = 0; a2 < space.n && clear; ++a2)
            if (mask_contains(u, a2) && (map.images[a2] & v)) clear = false;
          if (clear) { boxed = true; break; }
        }
        if (boxed) break;
      }
      if (!boxed) return false;
    }
  return true;
}

FixedPointAudit audit_closed_graph_fixed_point(const FiniteSpace& space, const FiniteSetMap& map,
                                               const OrbitDescriptor& orbit) {
  validate_orbit(space, map, orbit);
  FixedPointAudit a;
  a.closed_graph = is_closed_graph(space, map);

  // Pairs (S(x_i), x_{i+2}) over one tail pass plus one full cycle period.
  const std::size_t span = orbit.tail.size() + orbit.cycle.size();
  std::uint64_t witnesses = 0;
  for (std::size_t ui = 0; ui < space.opens.size(); ++ui) {
    const Mask u = space.opens[ui];
    for (std::size_t i = 0; i < span; ++i) {
      const Mask img = map.images[orbit.at(i)];
      if (subset_of(img, u) && mask_contains(u, orbit.at(i + 2))) {
        witnesses |= std::uint64_t(1) << ui;
        break;
      }
    }
  }
  Mask non_witness_union = 0;
  for (std::size_t ui = 0; ui < space.opens.size(); ++ui)
    if (!((witnesses >> ui) & 1)) non_witness_union |= space.opens[ui];
  a.cover_condition = non_witness_union != space.full();

  for (int x = 0; x < space.n; ++x)
    if (mask_contains(map.images[x], x)) a.fixed_points.push_back(x);
  a.consistent = !(a.closed_graph && a.cover_condition && a.fixed_points.empty());
  return a;
}

std::uint64_t set_map_count(int n) {
  return std::uint64_t(1) << (n * n);
}

FiniteSetMap decode_set_map(int n, std::uint64_t code) {
  FiniteSetMap m;
  m.images.resize(n);
  const Mask full = (Mask(1) << n) - 1;
  for (int x = 0; x < n; ++x) {
    m.images[x] = Mask(code) & full;
    code >>= n;
  }
  return m;
}

namespace {

struct OrbitEnumState {
  const FiniteSetMap* map;
  int n, max_tail, max_cycle;
  const std::function<void(const OrbitDescriptor&)>* yield;
  std::unordered_set<std::uint64_t> seen;
  std::vector<int> tail, cycle;

  std::uint64_t encode(const std::vector<int>& t, const std::vector<int>& c) const {
    std::uint64_t k = 0;
    for (int p : t) k = k * 9 + std::uint64_t(p) + 1;
    k = k * 9;  // separator digit
    for (int p : c) k = k * 9 + std::uint64_t(p) + 1;
    return k;
  }

  void emit() {
    std::vector<int> t = tail, c = cycle;
    // minimal period
    const std::size_t L = c.size();
    for (std::size_t d = 1; d < L; ++d) {
      if (L % d) continue;
      bool rep = true;
      for (std::size_t i = d; i < L && rep; ++i)
        if (c[i] != c[i % d]) rep = false;
      if (rep) { c.resize(d); break; }
    }
    // absorb tail suffix into the cycle where the sequence allows it
    while (!t.empty() && t.back() == c.back()) {
      t.pop_back();
      std::rotate(c.rbegin(), c.rbegin() + 1, c.rend());
    }
    if (seen.insert(encode(t, c)).second) (*yield)(OrbitDescriptor{t, c});
  }

  void grow_cycle() {
    const int last = cycle.back();
    if (mask_contains(map->images[last], cycle.front())) emit();
    if (static_cast<int>(cycle.size()) == max_cycle) return;
    for (int next = 0; next < n; ++next) {
      if (!mask_contains(map->images[last], next)) continue;
      cycle.push_back(next);
      grow_cycle();
      cycle.pop_back();
    }
  }

  void start_cycles_from(int c0) {
    cycle.assign(1, c0);
    grow_cycle();
  }

  void grow_tail() {
    const int last = tail.back();
    for (int next = 0; next < n; ++next) {
      if (!mask_contains(map->images[last], next)) continue;
      start_cycles_from(next);
      if (static_cast<int>(tail.size()) < max_tail) {
        tail.push_back(next);
        grow_tail();
        tail.pop_back();
      }
    }
  }
};

}  // namespace

void enumerate_orbits(const FiniteSpace& space, const FiniteSetMap& map, int start, int max_tail,
                      int max_cycle, const std::function<void(const OrbitDescriptor&)>& yield) {
  if (start < 0 || start >= space.n) throw std::invalid_argument("enumerate_orbits: bad start");
  if (max_cycle < 1) throw std::invalid_argument("enumerate_orbits: max_cycle must be >= 1");
  if (space.n > 6) throw std::invalid_argument("enumerate_orbits: supported for n <= 6");
  OrbitEnumState st;
  st.map = &map;
  st.n = space.n;
  st.max_tail = max_tail;
  st.max_cycle = max_cycle;
  st.yield = &yield;
  st.start_cycles_from(start);   // empty tail: cycle begins at the start point
  if (max_tail >= 1) {
    st.tail.assign(1, start);
    st.grow_tail();
  }
}

}  // namespace orbitkit
