#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "roast/common.hpp"

namespace roast {

// Shared secret of a syndrome-trellis code.
struct StcKey {
  int h = 10;              // constraint height
  std::uint64_t seed = 0;  // drives the submatrix columns
};

struct StcResult {
  std::vector<std::uint8_t> stego;
  double cost = 0.0;
};

// Binary STC for a fixed cover length n and message length m <= n.
// The parity-check matrix stacks an h x w submatrix along the diagonal,
// shifting one row per message bit; block b covers a contiguous run of
// columns so that widths differ by at most one.
class SyndromeTrellisCode {
 public:
  SyndromeTrellisCode(const StcKey& key, std::size_t cover_length, std::size_t message_length);

  std::size_t cover_length() const { return n_; }
  std::size_t message_length() const { return m_; }
  int height() const { return h_; }

  // Minimum-cost stego with H * stego = message. Infinite cost forbids a flip.
  StcResult embed(std::span<const std::uint8_t> cover, std::span<const double> costs,
                  std::span<const std::uint8_t> message) const;

  std::vector<std::uint8_t> extract(std::span<const std::uint8_t> stego) const;

  // Syndrome rows touched by column j (bit k = row first_row(j) + k).
  std::uint32_t column(std::size_t j) const;
  std::size_t first_row(std::size_t j) const { return block_of_[j]; }

 private:
  int h_;
  std::size_t n_;
  std::size_t m_;
  std::vector<std::uint32_t> submatrix_;
  std::vector<std::uint32_t> block_of_;
  std::vector<std::size_t> block_start_;
};

StcResult stc_embed(std::span<const std::uint8_t> cover, std::span<const double> costs,
                    std::span<const std::uint8_t> message, const StcKey& key);
std::vector<std::uint8_t> stc_extract(std::span<const std::uint8_t> stego, std::size_t message_length,
                                      const StcKey& key);

// Independent seeds for the layers of a multi-layer embedding.
StcKey layer_key(const StcKey& key, int layer);

// Second bit plane: floor(x / 2) mod 2 (arithmetic shift keeps negatives consistent).
inline std::uint8_t lsb(int x) { return static_cast<std::uint8_t>(x & 1); }
inline std::uint8_t second_lsb(int x) { return static_cast<std::uint8_t>((x >> 1) & 1); }

struct TernaryResult {
  std::vector<int> stego;
  double cost = 0.0;
  std::size_t changes = 0;
};

// Double-layered +-1 embedding. The second-bit plane carries ceil(L/2) bits
// (layer 1), the LSB plane the remaining bits (layer 2) given layer 1's choices.
TernaryResult ternary_embed(std::span<const int> cover, std::span<const double> cost_plus,
                            std::span<const double> cost_minus, std::span<const std::uint8_t> message,
                            const StcKey& key);
std::vector<std::uint8_t> ternary_extract(std::span<const int> stego, std::size_t message_length,
                                          const StcKey& key);

inline std::size_t ternary_layer1_bits(std::size_t total) { return (total + 1) / 2; }

// Single-layer (LSB) embedding where a flip moves each element in a fixed
// direction (+1 or -1) at a symmetric cost.
TernaryResult binary_embed(std::span<const int> cover, std::span<const double> costs,
                           std::span<const int> directions, std::span<const std::uint8_t> message,
                           const StcKey& key);
std::vector<std::uint8_t> binary_extract(std::span<const int> stego, std::size_t message_length,
                                         const StcKey& key);

}  // namespace roast
