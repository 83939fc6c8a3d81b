#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "orbitkit/rational.hpp"

namespace orbitkit {

// Three-valued outcome for sampled/finite-horizon checks.  `Supported` and
// `Refuted` are only reported when the evidence is sound at the given
// tolerance and budget; everything else stays `Inconclusive`.
enum class Verdict { Supported, Refuted, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Supported: return "supported";
    case Verdict::Refuted: return "refuted";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 step; stable across platforms, used to derive per-component
  // streams from one user-facing seed.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t salt = 0) {
  return std::mt19937_64(mix_seed(seed, salt));
}

/**
 * Finite-horizon operationalization of "v_i -> 0": split the series into
 * `windows` consecutive chunks, require the chunk maxima to be nonincreasing
 * and the final chunk max to sit at or below `tol`.
 */
template <class R>
bool tends_to_zero(const std::vector<R>& v, const R& tol, int windows = 4) {
  if (v.empty()) return false;
  if (windows < 2) windows = 2;
  if (static_cast<int>(v.size()) < windows) windows = static_cast<int>(v.size());
  const std::size_t n = v.size();
  std::vector<R> maxima;
  for (int w = 0; w < windows; ++w) {
    std::size_t lo = n * w / windows, hi = n * (w + 1) / windows;
    if (lo == hi) continue;
    R m = v[lo];
    for (std::size_t i = lo + 1; i < hi; ++i)
      if (v[i] > m) m = v[i];
    maxima.push_back(m);
  }
  for (std::size_t i = 1; i < maxima.size(); ++i)
    if (maxima[i] > maxima[i - 1]) return false;
  return maxima.back() <= tol;
}

/// True when the series stays at or above `floor` over its second half:
// sound refutation evidence when the values are lower bounds of the
// quantity that would need to vanish.
template <class R>
bool stays_above(const std::vector<R>& v, const R& floor_value) {
  if (v.empty()) return false;
  for (std::size_t i = v.size() / 2; i < v.size(); ++i)
    if (v[i] < floor_value) return false;
  return true;
}

/**
 * Running-minimum subsequence extraction: indices i with v_i <= min(v_0..v_{i-1}).
 * Used to operationalize "some subsequence converges to the candidate".
 * Acceptance requires: enough record indices, the last record at or below
 * `tol`, and records still being set near the end of the data
 * (a candidate the sequence drifts away from fails the coverage test).
 */
template <class R>
struct RecordSubsequence {
  std::vector<std::size_t> indices;
  bool accepted = false;
};

template <class R>
RecordSubsequence<R> decreasing_records(const std::vector<R>& v, const R& tol,
                                        std::size_t min_count, std::size_t coverage_window) {
  RecordSubsequence<R> out;
  if (v.empty()) return out;
  bool have_min = false;
  R running_min{};
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!have_min || v[i] <= running_min) {
      running_min = v[i];
      have_min = true;
      out.indices.push_back(i);
    }
  }
  const std::size_t last = out.indices.back();
  out.accepted = out.indices.size() >= min_count && running_min <= tol &&
                 last + coverage_window >= v.size();
  return out;
}

}  // namespace orbitkit
