#include "roast/reed_solomon.hpp"

#include <algorithm>

namespace roast {

namespace {

using Poly = std::vector<GfElement>;  // index = degree

GfElement eval(const Poly& p, GfElement x) {
  GfElement acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

ReedSolomon::ReedSolomon() {
  // g(x) = prod_{j=1}^{16} (x - alpha^j), built lowest degree first then reversed.
  Poly g{GfElement(1)};
  for (int j = 1; j <= kParity; ++j) {
    Poly next(g.size() + 1, GfElement(0));
    const GfElement root = GfElement::alpha_pow(j);
    for (std::size_t i = 0; i < g.size(); ++i) {
      next[i + 1] += g[i];
      next[i] += g[i] * root;
    }
    g = std::move(next);
  }
  for (int i = 0; i <= kParity; ++i) generator_[i] = g[kParity - i];
}

ReedSolomon::Codeword ReedSolomon::encode(std::span<const std::uint8_t, kK> message) const {
  // LFSR division of m(x) x^16 by g(x).
  std::array<GfElement, kParity> reg{};
  for (int i = 0; i < kK; ++i) {
    const GfElement feedback = GfElement(message[i]) + reg[0];
    for (int j = 0; j < kParity - 1; ++j) reg[j] = reg[j + 1] + feedback * generator_[j + 1];
    reg[kParity - 1] = feedback * generator_[kParity];
  }
  Codeword c{};
  for (int i = 0; i < kK; ++i) c[i] = message[i] & 31u;
  for (int j = 0; j < kParity; ++j) c[kK + j] = static_cast<std::uint8_t>(reg[j].value());
  return c;
}

std::array<GfElement, ReedSolomon::kParity> ReedSolomon::syndromes(std::span<const std::uint8_t, kN> word) {
  std::array<GfElement, kParity> s{};
  for (int j = 1; j <= kParity; ++j) {
    const GfElement x = GfElement::alpha_pow(j);
    GfElement acc(0);
    for (int i = 0; i < kN; ++i) acc = acc * x + GfElement(word[i]);
    s[j - 1] = acc;
  }
  return s;
}

ReedSolomon::DecodeResult ReedSolomon::decode(std::span<const std::uint8_t, kN> word) const {
  DecodeResult result;
  Codeword c{};
  for (int i = 0; i < kN; ++i) c[i] = word[i] & 31u;
  for (int i = 0; i < kK; ++i) result.message[i] = c[i];

  const auto s = syndromes(c);
  if (std::all_of(s.begin(), s.end(), [](GfElement e) { return e.is_zero(); })) {
    result.ok = true;
    return result;
  }

  // Berlekamp-Massey.
  Poly lambda{GfElement(1)};
  Poly prev{GfElement(1)};
  int length = 0;
  int shift = 1;
  GfElement last_discrepancy(1);
  for (int n = 0; n < kParity; ++n) {
    GfElement d = s[n];
    for (int i = 1; i <= length && i < static_cast<int>(lambda.size()); ++i) d += lambda[i] * s[n - i];
    if (d.is_zero()) {
      ++shift;
      continue;
    }
    Poly updated = lambda;
    const GfElement factor = d / last_discrepancy;
    if (updated.size() < prev.size() + shift) updated.resize(prev.size() + shift, GfElement(0));
    for (std::size_t i = 0; i < prev.size(); ++i) updated[i + shift] += factor * prev[i];
    if (2 * length <= n) {
      prev = lambda;
      length = n + 1 - length;
      last_discrepancy = d;
      shift = 1;
    } else {
      ++shift;
    }
    lambda = std::move(updated);
  }
  while (lambda.size() > 1 && lambda.back().is_zero()) lambda.pop_back();
  const int degree = static_cast<int>(lambda.size()) - 1;
  if (degree != length || degree > kT) return result;

  // Omega(x) = S(x) Lambda(x) mod x^16, S(x) = sum S_{j+1} x^j.
  Poly omega(kParity, GfElement(0));
  for (int i = 0; i < kParity; ++i) {
    for (std::size_t j = 0; j < lambda.size() && i + j < static_cast<std::size_t>(kParity); ++j) {
      omega[i + j] += s[i] * lambda[j];
    }
  }
  Poly derivative(std::max<std::size_t>(lambda.size() - 1, 1), GfElement(0));
  for (std::size_t i = 1; i < lambda.size(); i += 2) derivative[i - 1] = lambda[i];

  // Chien search + Forney. Position i holds the coefficient of x^(30 - i).
  int found = 0;
  for (int i = 0; i < kN; ++i) {
    const int degree_of_position = kN - 1 - i;
    const GfElement x_inv = GfElement::alpha_pow(-degree_of_position);
    if (!eval(lambda, x_inv).is_zero()) continue;
    const GfElement denom = eval(derivative, x_inv);
    if (denom.is_zero()) return result;
    const GfElement magnitude = eval(omega, x_inv) / denom;
    c[i] = static_cast<std::uint8_t>((GfElement(c[i]) + magnitude).value());
    ++found;
  }
  if (found != degree) return result;

  const auto check = syndromes(c);
  if (!std::all_of(check.begin(), check.end(), [](GfElement e) { return e.is_zero(); })) return result;

  for (int i = 0; i < kK; ++i) result.message[i] = c[i];
  result.ok = true;
  result.corrected = found;
  return result;
}

}  // namespace roast
