#pragma once

#include <array>
#include <cstdint>

namespace roast {

// Element of GF(2^5) with primitive polynomial x^5 + x^2 + 1.
class GfElement {
 public:
  static constexpr int kOrder = 32;
  static constexpr unsigned kPrimitive = 0x25;

  constexpr GfElement() = default;
  constexpr explicit GfElement(unsigned v) : value_(static_cast<std::uint8_t>(v & 31u)) {}

  constexpr unsigned value() const { return value_; }
  constexpr bool is_zero() const { return value_ == 0; }

  // alpha^e for any integer exponent.
  static GfElement alpha_pow(int e);
  // Discrete log base alpha; undefined for zero.
  int log() const;
  GfElement inverse() const;
  GfElement pow(int e) const;

  friend constexpr GfElement operator+(GfElement a, GfElement b) { return GfElement(a.value_ ^ b.value_); }
  friend constexpr GfElement operator-(GfElement a, GfElement b) { return a + b; }
  friend GfElement operator*(GfElement a, GfElement b);
  friend GfElement operator/(GfElement a, GfElement b);
  GfElement& operator+=(GfElement o) { return *this = *this + o; }
  GfElement& operator*=(GfElement o) { return *this = *this * o; }
  friend constexpr bool operator==(GfElement, GfElement) = default;

 private:
  std::uint8_t value_ = 0;
};

}  // namespace roast
