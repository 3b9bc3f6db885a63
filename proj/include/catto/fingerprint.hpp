#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace catto {

// 64-bit FNV-1a. Stable across runs, platforms and thread counts; not
// cryptographic. Collisions at desk scale are treated as a defect and
// checked exhaustively by the corpus tests.
class Fnv1a64 {
public:
  static constexpr uint64_t kOffset = 0xcbf29ce484222325ull;
  static constexpr uint64_t kPrime = 0x100000001b3ull;

  void update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= kPrime;
    }
  }

  void update_byte(unsigned char c) {
    state_ ^= c;
    state_ *= kPrime;
  }

  uint64_t digest() const { return state_; }

private:
  uint64_t state_ = kOffset;
};

std::string fingerprint_to_hex(uint64_t fp);

// Parses a 16-digit lowercase hex fingerprint; nullopt on malformed input.
std::optional<uint64_t> fingerprint_from_hex(std::string_view hex);

} // namespace catto
