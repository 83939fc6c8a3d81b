#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace orbitkit {

// Exact rational scalar used by carriers that promise exact arithmetic
// (dyadic grids, halving maps, base-index premetrics).
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// 2^e for e of either sign.
inline Rat pow2(int e) {
  Rat q;
  if (e >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), Rat(1).get_mpq_t(), static_cast<unsigned>(e));
  } else {
    mpq_div_2exp(q.get_mpq_t(), Rat(1).get_mpq_t(), static_cast<unsigned>(-e));
  }
  return q;
}

// Accepts "3", "-7/2"; doubles are converted exactly (binary expansion).
inline Rat parse_rational(const std::string& s) {
  Rat q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rat& q) { return q.get_str(); }

inline double to_double(const Rat& q) { return q.get_d(); }

// ---- scalar shims shared by double/Rat template code ----------------------

template <class R>
inline R scalar_abs(const R& v) {
  return v < R(0) ? R(-v) : v;
}
inline double scalar_abs(double v) { return std::fabs(v); }
inline Rat scalar_abs(const Rat& v) { return abs(v); }

template <class R>
inline double scalar_to_double(const R& v) {
  return static_cast<double>(v);
}
inline double scalar_to_double(const Rat& v) { return v.get_d(); }

// Exact conversion of a double tolerance into scalar type R.
template <class R>
inline R scalar_from_double(double v) {
  return static_cast<R>(v);
}
template <>
inline Rat scalar_from_double<Rat>(double v) {
  return Rat(v);  // mpq from double is exact
}

template <class R>
inline std::string scalar_str(const R& v) {
  return std::to_string(static_cast<double>(v));
}
inline std::string scalar_str(const Rat& v) { return v.get_str(); }

}  // namespace orbitkit
