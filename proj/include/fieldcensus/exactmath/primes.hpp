#pragma once

#include <cstdint>
#include <vector>

namespace fieldcensus {

/// Primes up to limit by the sieve of Eratosthenes.
inline std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

/// Shared table of the primes below 10^6.
inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> table = primes_up_to(1000000);
  return table;
}

}  // namespace fieldcensus
