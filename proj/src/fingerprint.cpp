#include "catto/fingerprint.hpp"

namespace catto {

std::string fingerprint_to_hex(uint64_t fp) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[fp & 0xf];
    fp >>= 4;
  }
  return out;
}

std::optional<uint64_t> fingerprint_from_hex(std::string_view hex) {
  if (hex.size() != 16)
    return std::nullopt;
  uint64_t value = 0;
  for (char c : hex) {
    value <<= 4;
    if (c >= '0' && c <= '9')
      value |= static_cast<uint64_t>(c - '0');
    else if (c >= 'a' && c <= 'f')
      value |= static_cast<uint64_t>(c - 'a' + 10);
    else
      return std::nullopt;
  }
  return value;
}

} // namespace catto
