#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace dyadcert {

// Lowercase hex SHA-256 of the bytes.
std::string Sha256Hex(std::string_view bytes);

// All randomness: std::mt19937_64 seeded with the 64-bit seed, bounded draws
// by rejection sampling so sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  // Uniform in [0, bound). bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed (splitmix64 finalizer).
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

}  // namespace dyadcert
