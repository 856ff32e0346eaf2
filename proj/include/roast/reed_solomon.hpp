#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "roast/gf32.hpp"

namespace roast {

// Systematic narrow-sense RS(31,15) over GF(2^5). Codeword layout: message
// symbols first (coefficients of x^30..x^16), then 16 parity symbols.
class ReedSolomon {
 public:
  static constexpr int kN = 31;
  static constexpr int kK = 15;
  static constexpr int kParity = kN - kK;
  static constexpr int kT = kParity / 2;

  using Message = std::array<std::uint8_t, kK>;
  using Codeword = std::array<std::uint8_t, kN>;

  struct DecodeResult {
    Message message{};
    bool ok = false;
    int corrected = 0;
  };

  ReedSolomon();

  Codeword encode(std::span<const std::uint8_t, kK> message) const;
  DecodeResult decode(std::span<const std::uint8_t, kN> word) const;

  // S_j = c(alpha^j), j = 1..16.
  static std::array<GfElement, kParity> syndromes(std::span<const std::uint8_t, kN> word);

  // Generator coefficients, highest degree first (monic, degree 16).
  const std::array<GfElement, kParity + 1>& generator() const { return generator_; }

 private:
  std::array<GfElement, kParity + 1> generator_{};
};

}  // namespace roast
