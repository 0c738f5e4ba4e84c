#pragma once

#include <string_view>

#include "gwlab/offspring.hpp"

namespace gwlab {

/// Parses the textual distribution syntax.
///
/// Grammar (whitespace-insensitive):
///   pmf        := pair ("," pair)*          e.g. "0:0.25,2:0.75"
///   pair       := <non-negative int> ":" <probability>
///   parametric := "poisson(" lambda ")"     lambda in [0, 700]
///               | "geometric(" p ")"        P(k) = (1-p)^k p, p in (0,1]
///               | "delta(" k ")"            point mass at k
///
/// Finite pmfs must total 1 within kMassTol. Parametric laws are stored as
/// a table truncated at `cap` with exact tail mass and a descriptor for
/// exact sampling. Throws std::invalid_argument on malformed input.
OffspringLaw parse_offspring(std::string_view text,
                             std::size_t cap = kDefaultCap);

}  // namespace gwlab
