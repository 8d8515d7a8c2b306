#pragma once

#include <cstdint>

#include "pclor/circuit.hpp"

namespace pclor {

struct RandomCircuitShape {
  unsigned latches = 3;
  unsigned inputs = 1;
  unsigned depth = 2;  // nesting of next-state expressions
};

// Latches l0.., inputs i0..; the property forbids one random cube of two
// latch literals. Same seed, same circuit.
Circuit random_circuit(std::uint64_t seed, const RandomCircuitShape& shape = {});

}  // namespace pclor
