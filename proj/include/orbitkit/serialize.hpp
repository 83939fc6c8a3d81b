#pragma once

#include <optional>
#include <string>

#include "orbitkit/finite_topology.hpp"

namespace orbitkit {

// One finite instance per document: a space, optionally set-valued dynamics
// on it, optionally an eventually periodic orbit of those dynamics.
struct FiniteInstance {
  FiniteSpace space;
  std::optional<FiniteSetMap> map;
  std::optional<OrbitDescriptor> orbit;
};

/**
 * Plain-text wire format, line oriented.  `#` starts a comment, blank lines
 * are ignored.  A document is
 *
 *   space <n>
 *   open <points...>        # one line per open set; empty list = empty set
 *   map                     # optional section
 *   image <x> : <points...>
 *   orbit                   # optional section, requires map
 *   tail <points...>        # optional line
 *   cycle <points...>
 *
 * Point lists are written sorted; the reader accepts any order.
 */
std::string write_instance(const FiniteInstance& inst);

// Parses and fully validates (space axioms, image arity, orbit membership).
// Malformed input throws std::invalid_argument naming the offending line.
FiniteInstance read_instance(const std::string& text);

}  // namespace orbitkit
