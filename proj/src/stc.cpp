#include "roast/stc.hpp"

#include <algorithm>
#include <random>

namespace roast {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ParameterError(std::string("length mismatch: ") + what);
}

}  // namespace

SyndromeTrellisCode::SyndromeTrellisCode(const StcKey& key, std::size_t cover_length, std::size_t message_length)
    : h_(key.h), n_(cover_length), m_(message_length) {
  if (h_ < 2 || h_ > 20) throw ParameterError("constraint height must be in [2, 20]");
  if (m_ > n_) throw CapacityError("message longer than cover");
  if (m_ == 0) return;

  const std::size_t width = (n_ + m_ - 1) / m_;
  std::mt19937_64 rng(key.seed);
  const std::uint32_t mask = (1u << h_) - 1u;
  const std::uint32_t forced = 1u | (1u << (h_ - 1));
  submatrix_.resize(width);
  for (auto& col : submatrix_) col = (static_cast<std::uint32_t>(rng()) & mask) | forced;

  block_start_.resize(m_ + 1);
  for (std::size_t b = 0; b <= m_; ++b) block_start_[b] = b * n_ / m_;
  block_of_.resize(n_);
  for (std::size_t b = 0; b < m_; ++b) {
    for (std::size_t j = block_start_[b]; j < block_start_[b + 1]; ++j) block_of_[j] = static_cast<std::uint32_t>(b);
  }
}

std::uint32_t SyndromeTrellisCode::column(std::size_t j) const {
  const std::size_t b = block_of_[j];
  std::uint32_t c = submatrix_[j - block_start_[b]];
  const std::size_t rows_left = m_ - b;
  if (rows_left < static_cast<std::size_t>(h_)) c &= (1u << rows_left) - 1u;
  return c;
}

StcResult SyndromeTrellisCode::embed(std::span<const std::uint8_t> cover, std::span<const double> costs,
                                     std::span<const std::uint8_t> message) const {
  check_lengths(cover.size(), n_, "cover");
  check_lengths(costs.size(), n_, "costs");
  check_lengths(message.size(), m_, "message");

  StcResult result;
  result.stego.assign(cover.begin(), cover.end());
  if (m_ == 0) return result;

  const std::size_t states = std::size_t{1} << h_;
  const std::size_t words = std::max<std::size_t>(1, states / 64);
  std::vector<std::uint64_t> path(n_ * words, 0);
  std::vector<double> cost(states, kInfinity), next(states);
  cost[0] = 0.0;

  for (std::size_t b = 0; b < m_; ++b) {
    for (std::size_t j = block_start_[b]; j < block_start_[b + 1]; ++j) {
      const std::uint32_t c = column(j);
      const double r = costs[j];
      const double keep0 = cover[j] ? r : 0.0;
      const double keep1 = cover[j] ? 0.0 : r;
      std::uint64_t* bits = &path[j * words];
      for (std::size_t s = 0; s < states; ++s) {
        const double a = cost[s] + keep0;
        const double z = cost[s ^ c] + keep1;
        if (z < a) {
          next[s] = z;
          bits[s >> 6] |= std::uint64_t{1} << (s & 63);
        } else {
          next[s] = a;
        }
      }
      cost.swap(next);
    }
    const std::size_t bit = message[b] & 1u;
    const std::size_t half = states / 2;
    for (std::size_t s = 0; s < half; ++s) next[s] = cost[(s << 1) | bit];
    std::fill(next.begin() + static_cast<std::ptrdiff_t>(half), next.end(), kInfinity);
    cost.swap(next);
  }

  if (!(cost[0] < kInfinity)) throw EmbeddingError("no stego satisfies the syndrome with finite cost");

  std::size_t state = 0;
  for (std::size_t b = m_; b-- > 0;) {
    state = (state << 1) | (message[b] & 1u);
    for (std::size_t j = block_start_[b + 1]; j-- > block_start_[b];) {
      const bool one = (path[j * words + (state >> 6)] >> (state & 63)) & 1u;
      result.stego[j] = one ? 1 : 0;
      if (one) state ^= column(j);
    }
  }

  for (std::size_t j = 0; j < n_; ++j) {
    if ((result.stego[j] & 1u) != (cover[j] & 1u)) result.cost += costs[j];
  }
  return result;
}

std::vector<std::uint8_t> SyndromeTrellisCode::extract(std::span<const std::uint8_t> stego) const {
  check_lengths(stego.size(), n_, "stego");
  std::vector<std::uint8_t> msg(m_, 0);
  for (std::size_t j = 0; j < n_; ++j) {
    if (!(stego[j] & 1u) || m_ == 0) continue;
    const std::uint32_t c = column(j);
    const std::size_t row = block_of_[j];
    for (int k = 0; k < h_; ++k) {
      if ((c >> k) & 1u) msg[row + k] ^= 1u;
    }
  }
  return msg;
}

StcResult stc_embed(std::span<const std::uint8_t> cover, std::span<const double> costs,
                    std::span<const std::uint8_t> message, const StcKey& key) {
  return SyndromeTrellisCode(key, cover.size(), message.size()).embed(cover, costs, message);
}

std::vector<std::uint8_t> stc_extract(std::span<const std::uint8_t> stego, std::size_t message_length,
                                      const StcKey& key) {
  return SyndromeTrellisCode(key, stego.size(), message_length).extract(stego);
}

StcKey layer_key(const StcKey& key, int layer) {
  return StcKey{key.h, splitmix64(key.seed ^ splitmix64(static_cast<std::uint64_t>(layer)))};
}

namespace {

// Embedding domains are AC only.
double direction_cost(int x, int dir, double plus, double minus) {
  const int y = x + dir;
  if (y < kAcCoefMin || y > kCoefMax) return kInfinity;
  return dir > 0 ? plus : minus;
}

}  // namespace

TernaryResult ternary_embed(std::span<const int> cover, std::span<const double> cost_plus,
                            std::span<const double> cost_minus, std::span<const std::uint8_t> message,
                            const StcKey& key) {
  const std::size_t n = cover.size();
  check_lengths(cost_plus.size(), n, "cost_plus");
  check_lengths(cost_minus.size(), n, "cost_minus");
  const std::size_t m1 = ternary_layer1_bits(message.size());
  const std::size_t m2 = message.size() - m1;
  if (m1 > n) throw CapacityError("message does not fit the cover");

  TernaryResult result;
  result.stego.assign(cover.begin(), cover.end());

  // Layer 1: second-bit plane. Even x flips it with -1, odd x with +1.
  std::vector<std::uint8_t> plane(n);
  std::vector<double> costs(n);
  std::vector<int> dir1(n);
  for (std::size_t j = 0; j < n; ++j) {
    const int x = cover[j];
    plane[j] = second_lsb(x);
    dir1[j] = (x & 1) ? 1 : -1;
    costs[j] = direction_cost(x, dir1[j], cost_plus[j], cost_minus[j]);
  }
  const auto l1 = stc_embed(plane, costs, message.first(m1), layer_key(key, 1));
  std::vector<bool> moved(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    if (l1.stego[j] != plane[j]) {
      result.stego[j] += dir1[j];
      moved[j] = true;
    }
  }

  // Layer 2: LSB plane; elements already moved are frozen, others move
  // without touching the second-bit plane (even +1, odd -1).
  std::vector<int> dir2(n);
  for (std::size_t j = 0; j < n; ++j) {
    const int x = cover[j];
    plane[j] = lsb(result.stego[j]);
    dir2[j] = (x & 1) ? -1 : 1;
    costs[j] = moved[j] ? kInfinity : direction_cost(x, dir2[j], cost_plus[j], cost_minus[j]);
  }
  const auto l2 = stc_embed(plane, costs, message.subspan(m1, m2), layer_key(key, 2));
  for (std::size_t j = 0; j < n; ++j) {
    if (l2.stego[j] != plane[j]) result.stego[j] += dir2[j];
  }

  for (std::size_t j = 0; j < n; ++j) {
    const int d = result.stego[j] - cover[j];
    if (d == 0) continue;
    ++result.changes;
    result.cost += d > 0 ? cost_plus[j] : cost_minus[j];
  }
  return result;
}

std::vector<std::uint8_t> ternary_extract(std::span<const int> stego, std::size_t message_length,
                                          const StcKey& key) {
  const std::size_t m1 = ternary_layer1_bits(message_length);
  std::vector<std::uint8_t> plane(stego.size());
  std::transform(stego.begin(), stego.end(), plane.begin(), second_lsb);
  auto msg = stc_extract(plane, m1, layer_key(key, 1));
  std::transform(stego.begin(), stego.end(), plane.begin(), lsb);
  const auto rest = stc_extract(plane, message_length - m1, layer_key(key, 2));
  msg.insert(msg.end(), rest.begin(), rest.end());
  return msg;
}

TernaryResult binary_embed(std::span<const int> cover, std::span<const double> costs,
                           std::span<const int> directions, std::span<const std::uint8_t> message,
                           const StcKey& key) {
  const std::size_t n = cover.size();
  check_lengths(costs.size(), n, "costs");
  check_lengths(directions.size(), n, "directions");
  std::vector<std::uint8_t> plane(n);
  std::vector<double> flip(n);
  for (std::size_t j = 0; j < n; ++j) {
    plane[j] = lsb(cover[j]);
    const int y = cover[j] + directions[j];
    flip[j] = (directions[j] == 0 || y < kAcCoefMin || y > kCoefMax) ? kInfinity : costs[j];
  }
  const auto l = stc_embed(plane, flip, message, layer_key(key, 1));
  TernaryResult result;
  result.stego.assign(cover.begin(), cover.end());
  for (std::size_t j = 0; j < n; ++j) {
    if (l.stego[j] == plane[j]) continue;
    result.stego[j] += directions[j];
    ++result.changes;
    result.cost += costs[j];
  }
  return result;
}

std::vector<std::uint8_t> binary_extract(std::span<const int> stego, std::size_t message_length,
                                         const StcKey& key) {
  std::vector<std::uint8_t> plane(stego.size());
  std::transform(stego.begin(), stego.end(), plane.begin(), lsb);
  return stc_extract(plane, message_length, layer_key(key, 1));
}

}  // namespace roast
