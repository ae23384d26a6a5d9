#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace smv2n {

/// SplitMix64 finalizer. Used both as a stream-derivation hash and as the
/// state transition of SplitMix64Engine.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds an ordered list of words into one 64-bit seed. Order matters:
/// derive_seed({a, b}) != derive_seed({b, a}) in general.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (auto w : words) {
    h = mix64(h ^ mix64(w + 0x9e3779b97f4a7c15ULL));
  }
  return h;
}

/// Small counter-based engine satisfying UniformRandomBitGenerator.
/// Cheap to construct, so a fresh engine can be spun up per link.
class SplitMix64Engine {
 public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64Engine(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

// Domain tags for sub-stream derivation.
namespace stream {
inline constexpr std::uint64_t kTrial = 0x7472'6961'6cULL;
inline constexpr std::uint64_t kVehicles = 0x7665'6869'636cULL;
inline constexpr std::uint64_t kMeters = 0x736d'6574'6572ULL;
inline constexpr std::uint64_t kFading = 0x6661'6469'6e67ULL;
inline constexpr std::uint64_t kCell = 0x6365'6c6cULL;
}  // namespace stream

}  // namespace smv2n
