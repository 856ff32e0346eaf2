#include "roast/gf32.hpp"

#include "roast/common.hpp"

namespace roast {

namespace {

struct Tables {
  std::array<std::uint8_t, 62> exp{};
  std::array<int, 32> log{};

  Tables() {
    unsigned x = 1;
    for (int i = 0; i < 31; ++i) {
      exp[i] = static_cast<std::uint8_t>(x);
      exp[i + 31] = static_cast<std::uint8_t>(x);
      log[x] = i;
      x <<= 1;
      if (x & 32u) x ^= GfElement::kPrimitive;
    }
    log[0] = -1;
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

GfElement GfElement::alpha_pow(int e) {
  e %= 31;
  if (e < 0) e += 31;
  return GfElement(tables().exp[e]);
}

int GfElement::log() const {
  if (value_ == 0) throw ParameterError("log of zero in GF(32)");
  return tables().log[value_];
}

GfElement GfElement::inverse() const {
  if (value_ == 0) throw ParameterError("zero has no inverse in GF(32)");
  return alpha_pow(31 - log());
}

GfElement GfElement::pow(int e) const {
  if (value_ == 0) return e == 0 ? GfElement(1) : GfElement(0);
  return alpha_pow(static_cast<int>((static_cast<long long>(log()) * e) % 31));
}

GfElement operator*(GfElement a, GfElement b) {
  if (a.is_zero() || b.is_zero()) return GfElement(0);
  return GfElement(tables().exp[tables().log[a.value()] + tables().log[b.value()]]);
}

GfElement operator/(GfElement a, GfElement b) { return a * b.inverse(); }

}  // namespace roast
