#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbitkit/common.hpp"
#include "orbitkit/rational.hpp"

namespace orbitkit {

// Distance-like functional; no symmetry or triangle inequality assumed.
// Argument order matters throughout: convergence tests use p(limit, x_n).
template <class P, class R>
using Premetric = std::function<R(const P&, const P&)>;

// Bounded enumerator of a subset of the carrier.  Samplers own their seed and
// must be prefix-stable: growing the budget extends the list, never reorders.
template <class P>
using SetSampler = std::function<std::vector<P>(int budget)>;

template <class P>
using CarrierSampler = std::function<std::vector<P>(int budget, std::uint64_t seed)>;

// Finite-prefix convergence judgement (sequence, candidate limit).
template <class P>
using ConvergenceOracle = std::function<bool(const std::vector<P>&, const P&)>;

// Countable nested neighborhood base at each point; deeper = smaller.
template <class P>
struct NeighborhoodBase {
  std::function<bool(const P& center, int depth, const P& q)> contains;
  std::function<std::vector<P>(const P& center, int depth, int budget, std::uint64_t seed)> sample;
};

// Builds the canonical oracle of a declared base: every base level up to
// `depth` must absorb a suffix of the sequence.
template <class P>
ConvergenceOracle<P> make_base_oracle(const NeighborhoodBase<P>& base, int depth = 8) {
  auto contains = base.contains;
  return [contains, depth](const std::vector<P>& seq, const P& limit) {
    if (seq.empty()) return false;
    for (int k = 1; k <= depth; ++k) {
      // longest suffix inside base level k must be nonempty
      std::size_t inside = 0;
      for (std::size_t j = seq.size(); j-- > 0;) {
        if (!contains(limit, k, seq[j])) break;
        ++inside;
      }
      if (inside == 0) return false;
    }
    return true;
  };
}

template <class P, class R>
struct PSpaceInstance {
  std::string name;
  CarrierSampler<P> carrier_sample;
  Premetric<P, R> p;
  ConvergenceOracle<P> converges;
  NeighborhoodBase<P> base;  // optional hooks; contains/sample may be null
};

// Declared probe: a sequence together with the limit its generator promises.
template <class P>
struct ProbeSequence {
  std::string name;
  std::vector<P> points;
  P declared_limit;
};

struct CheckResult {
  Verdict verdict = Verdict::Inconclusive;
  std::string witness;  // human-readable failure/trigger note
  int triggers = 0;     // how many times the hypothesis of the axiom fired
};

/**
 * Audit record for the three defining axioms and the two derived
 * consequences of a premetric convergence structure:
 *   zero_dichotomy          p(x,y) = 0 exactly when x = y (checked exactly)
 *   null_implies_converges  p(c, x_n) -> 0 forces x_n -> c
 *   step_vanishing          x_n -> c forces p(x_{n+1}, x_n) -> 0
 *   null_equivalence        x_n -> c forces p(c, x_n) -> 0   (converse half)
 *   step_vanishing_reversed x_n -> c forces p(x_n, x_{n+1}) -> 0 as well
 */
struct AxiomReport {
  CheckResult zero_dichotomy;
  CheckResult null_implies_converges;
  CheckResult step_vanishing;
  CheckResult null_equivalence;
  CheckResult step_vanishing_reversed;

  bool all_supported() const {
    return zero_dichotomy.verdict == Verdict::Supported &&
           null_implies_converges.verdict == Verdict::Supported &&
           step_vanishing.verdict == Verdict::Supported &&
           null_equivalence.verdict == Verdict::Supported &&
           step_vanishing_reversed.verdict == Verdict::Supported;
  }
};

namespace detail {

template <class P, class R>
std::vector<R> pointwise_p(const Premetric<P, R>& p, const P& c, const std::vector<P>& seq) {
  std::vector<R> v;
  v.reserve(seq.size());
  for (const auto& x : seq) v.push_back(p(c, x));
  return v;
}

}  // namespace detail

/**
 * Runs the axiom audit against declared probe sequences.  Probes whose
 * declared limit the oracle rejects are invalid fixtures and throw.
 * A check that never fires its hypothesis stays inconclusive rather than
 * claiming a pass from zero evidence.
 */
template <class P, class R>
AxiomReport audit_axioms(const PSpaceInstance<P, R>& inst,
                         const std::vector<ProbeSequence<P>>& probes, int pair_budget,
                         std::uint64_t seed, double tol_d = 1e-9) {
  const R tol = scalar_from_double<R>(tol_d);
  for (const auto& pr : probes)
    if (!inst.converges(pr.points, pr.declared_limit))
      throw std::invalid_argument("audit_axioms: probe '" + pr.name +
                                  "' rejected by the convergence oracle");

  AxiomReport rep;

  // --- zero dichotomy, on sampled pairs, exact zero compare ---------------
  {
    auto& c = rep.zero_dichotomy;
    auto pts = inst.carrier_sample(pair_budget, seed);
    c.verdict = pts.empty() ? Verdict::Inconclusive : Verdict::Supported;
    for (std::size_t i = 0; i < pts.size() && c.verdict == Verdict::Supported; ++i)
      for (std::size_t j = 0; j < pts.size(); ++j) {
        ++c.triggers;
        const R v = inst.p(pts[i], pts[j]);
        if (v < R(0)) {
          c.verdict = Verdict::Refuted;
          c.witness = "negative value at sampled pair";
          break;
        }
        const bool zero = v == R(0);
        const bool equal = pts[i] == pts[j];
        if (zero != equal) {
          c.verdict = Verdict::Refuted;
          c.witness = equal ? "p(x,x) != 0 at a sampled point"
                            : "p(x,y) == 0 for distinct sampled points";
          break;
        }
      }
  }

  // Candidate limits: every declared limit plus a slice of the carrier.
  std::vector<P> candidates;
  for (const auto& pr : probes) candidates.push_back(pr.declared_limit);
  for (auto& x : inst.carrier_sample(8, mix_seed(seed, 17))) candidates.push_back(x);

  // --- null_implies_converges ---------------------------------------------
  {
    auto& c = rep.null_implies_converges;
    bool fired = false, failed = false;
    for (const auto& pr : probes) {
      for (const auto& cand : candidates) {
        auto v = detail::pointwise_p(inst.p, cand, pr.points);
        if (!tends_to_zero(v, tol)) continue;
        fired = true;
        ++c.triggers;
        if (!inst.converges(pr.points, cand)) {
          failed = true;
          c.witness = "p-null candidate rejected by oracle on probe '" + pr.name + "'";
        }
      }
    }
    c.verdict = failed ? Verdict::Refuted : (fired ? Verdict::Supported : Verdict::Inconclusive);
  }

  // --- step_vanishing (+ reversed) on oracle-accepted sequences ------------
  {
    auto& c = rep.step_vanishing;
    auto& cr = rep.step_vanishing_reversed;
    bool fail_fwd = false, fail_rev = false;
    for (const auto& pr : probes) {
      ++c.triggers;
      ++cr.triggers;
      std::vector<R> fwd, rev;
      for (std::size_t i = 0; i + 1 < pr.points.size(); ++i) {
        fwd.push_back(inst.p(pr.points[i + 1], pr.points[i]));
        rev.push_back(inst.p(pr.points[i], pr.points[i + 1]));
      }
      if (!tends_to_zero(fwd, tol)) {
        fail_fwd = true;
        c.witness = "consecutive p stays large on probe '" + pr.name + "'";
      }
      if (!tends_to_zero(fwd, tol) || !tends_to_zero(rev, tol)) {
        fail_rev = true;
        cr.witness = "a consecutive orientation stays large on probe '" + pr.name + "'";
      }
    }
    c.verdict = probes.empty() ? Verdict::Inconclusive
                               : (fail_fwd ? Verdict::Refuted : Verdict::Supported);
    cr.verdict = probes.empty() ? Verdict::Inconclusive
                                : (fail_rev ? Verdict::Refuted : Verdict::Supported);
  }

  // --- null_equivalence: oracle-accepted limits must be p-null -------------
  {
    auto& c = rep.null_equivalence;
    bool fired = false, failed = false;
    for (const auto& pr : probes) {
      for (const auto& cand : candidates) {
        if (!inst.converges(pr.points, cand)) continue;
        fired = true;
        ++c.triggers;
        auto v = detail::pointwise_p(inst.p, cand, pr.points);
        if (!tends_to_zero(v, tol)) {
          failed = true;
          c.witness = "accepted limit with non-null p on probe '" + pr.name + "'";
        }
      }
    }
    c.verdict = failed ? Verdict::Refuted : (fired ? Verdict::Supported : Verdict::Inconclusive);
  }

  return rep;
}

// Enumerates [lo, hi] by dyadic midpoints: endpoints, then midpoint, then
// odd multiples of (hi-lo)/2^d per depth d.  Prefix-stable and dense at
// every budget, so bounded samples of the interval stay representative.
inline SetSampler<Rat> dyadic_interval_sampler(Rat lo, Rat hi, int max_depth) {
  if (max_depth < 0 || max_depth > 30)
    throw std::invalid_argument("dyadic sampler depth out of range");
  if (hi < lo) throw std::invalid_argument("dyadic sampler needs lo <= hi");
  return [lo, hi, max_depth](int budget) {
    std::vector<Rat> out;
    if (budget <= 0) return out;
    out.push_back(lo);
    if (static_cast<int>(out.size()) < budget && hi != lo) out.push_back(hi);
    const Rat span = hi - lo;
    for (int d = 1; d <= max_depth && static_cast<int>(out.size()) < budget; ++d)
      for (long k = 1; k < (1L << d) && static_cast<int>(out.size()) < budget; k += 2)
        out.push_back(Rat(lo + span * rat(k, 1L << d)));
    return out;
  };
}

// sup of p(y, x) over a bounded enumeration of C; empty C gives 0.
template <class P, class R>
R p_sup(const Premetric<P, R>& p, const SetSampler<P>& sample_c, const P& x, int budget) {
  R best(0);
  bool first = true;
  for (const auto& y : sample_c(budget)) {
    R v = p(y, x);
    if (first || v > best) best = v;
    first = false;
  }
  return best;
}

// Total step length sum p(x_{i+1}, x_i) over a finite orbit prefix.
template <class P, class R>
R p_length(const Premetric<P, R>& p, const std::vector<P>& prefix) {
  R total(0);
  for (std::size_t i = 0; i + 1 < prefix.size(); ++i) total += p(prefix[i + 1], prefix[i]);
  return total;
}

template <class R>
struct LengthCauchyResult {
  Verdict verdict = Verdict::Inconclusive;
  R partial_length{};
  std::string note;
};

/**
 * Finite-horizon judgement of "the step lengths have finite sum":
 * supported when the tail window contributes at most `tol`, refuted when the
 * partial sums already exceed `divergence_bound`, inconclusive otherwise.
 */
template <class P, class R>
LengthCauchyResult<R> p_length_cauchy_check(const Premetric<P, R>& p,
                                            const std::vector<P>& prefix, double tol_d,
                                            double divergence_bound, std::size_t min_len = 8) {
  LengthCauchyResult<R> r;
  r.partial_length = p_length(p, prefix);
  if (prefix.size() < min_len) {
    r.note = "prefix shorter than minimum horizon";
    return r;
  }
  if (scalar_to_double(r.partial_length) > divergence_bound) {
    r.verdict = Verdict::Refuted;
    r.note = "partial sums exceed the divergence bound";
    return r;
  }
  R tail(0);
  const std::size_t cut = prefix.size() - prefix.size() / 4;
  for (std::size_t i = cut; i + 1 < prefix.size(); ++i) tail += p(prefix[i + 1], prefix[i]);
  if (tail <= scalar_from_double<R>(tol_d)) {
    r.verdict = Verdict::Supported;
  } else {
    r.note = "tail window still accumulating length";
  }
  return r;
}

}  // namespace orbitkit
