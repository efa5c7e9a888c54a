#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <utility>

namespace eegvote {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for the index-th independent stream under a parent seed. Streams are
// derived, never shared, so results do not depend on scheduling order.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ mix64(index ^ 0x6a09e667f3bcc909ULL));
}

// Anything producing uniformly distributed 64-bit words.
template <class G>
concept WordSource = requires(G g) {
  { g() } -> std::convertible_to<std::uint64_t>;
};

// xoshiro256** seeded through SplitMix64. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept {
    for (std::uint64_t k = 0; k < 4; ++k) state_[k] = mix64(seed + k * 0x9e3779b97f4a7c15ULL);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Child generator for the index-th substream; does not advance this one.
  Rng split(std::uint64_t index) const noexcept {
    return Rng(derive_stream(state_[0] ^ rotl(state_[2], 32), index));
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4]{};
};

// Index in [0, n) from exactly one word (multiply-shift). Consuming one word
// per draw keeps draw transcripts replayable.
template <WordSource G>
std::uint64_t uniform_below(G& gen, std::uint64_t n) noexcept {
  const std::uint64_t w = gen();
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(w) * n) >> 64);
}

// Uniform double in [0, 1) from one word.
template <WordSource G>
double uniform_unit(G& gen) noexcept {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

template <WordSource G, class T>
void shuffle(std::span<T> items, G& gen) noexcept {
  for (std::size_t i = items.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(uniform_below(gen, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace eegvote
