#pragma once

#include <cstdint>

namespace hashlearn {

/// Deterministic Miller-Rabin over the 12-base set, exact for all uint64.
bool is_prime(uint64_t n);

/// Smallest prime strictly greater than n.
uint64_t next_prime_above(uint64_t n);

} // namespace hashlearn
