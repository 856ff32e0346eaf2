#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "roast/block_transform.hpp"
#include "roast/key.hpp"
#include "roast/overflow.hpp"

namespace roast {

// Mid-frequency band of the dither-modulation baselines: u + v in [low, high],
// 0-indexed frequency coordinates.
inline constexpr int kMidFrequencyLow = 7;
inline constexpr int kMidFrequencyHigh = 9;

constexpr std::array<bool, kBlockSize> mid_frequency_mask() {
  std::array<bool, kBlockSize> mask{};
  for (int u = 0; u < kBlockSide; ++u) {
    for (int v = 0; v < kBlockSide; ++v) {
      mask[block_index(u, v)] = u + v >= kMidFrequencyLow && u + v <= kMidFrequencyHigh;
    }
  }
  return mask;
}

inline constexpr std::array<bool, kBlockSize> kMidFrequencyMask = mid_frequency_mask();

constexpr std::array<bool, kBlockSize> all_ac_mask() {
  std::array<bool, kBlockSize> mask{};
  mask.fill(true);
  mask[0] = false;
  return mask;
}

inline constexpr std::array<bool, kBlockSize> kAllAcMask = all_ac_mask();

const std::array<bool, kBlockSize>& domain_mask(Scheme s);
bool is_ternary(Scheme s);

// Flat coefficient indices of the embedding domain in key order.
std::vector<std::size_t> embedding_positions(const CoefficientImage& img, Scheme s, std::uint64_t seed);

struct PayloadAccount {
  std::size_t message_bits = 0;
  std::size_t nzac = 0;  // nonzero AC count of the original cover

  double relative() const { return nzac == 0 ? 0.0 : static_cast<double>(message_bits) / nzac; }
};

// Message bytes for a relative payload: floor(payload * nzac / 8).
std::size_t message_bytes_for(const CoefficientImage& cover, double payload);

// Framed bits (32-bit length header included) the scheme can carry:
// 75 * floor(n * r / 155) with r = 1 (binary) or log2(3) (ternary).
std::size_t capacity(const CoefficientImage& cover, const SchemeParams& params);

// Length header + payload + zero padding, split into RS codewords and
// interleaved symbol by symbol across codewords.
std::vector<std::uint8_t> frame_message(std::span<const std::uint8_t> message, std::size_t& codewords);

struct DeframeResult {
  std::vector<std::uint8_t> data;  // decoded bytes after the header (best effort)
  std::vector<std::uint8_t> message;
  std::size_t failed_codewords = 0;
  bool length_valid = false;
};

DeframeResult deframe_message(std::span<const std::uint8_t> bits, std::size_t codewords);

struct EmbedResult {
  CoefficientImage stego;
  CoefficientImage preprocessed;  // robust cover (ROAST) or the cover itself
  StegoKey key;
  PayloadAccount payload;
  std::size_t preprocessing_changes = 0;
  std::size_t embedding_changes = 0;
  std::size_t domain_size = 0;
  double omega_before = 0.0;
  double omega_after = 0.0;
  double distortion = 0.0;
};

EmbedResult roast_os_embed(const CoefficientImage& cover, std::span<const std::uint8_t> msg, std::uint64_t seed,
                           const SchemeParams& params);
EmbedResult roast_st_embed(const CoefficientImage& cover, std::span<const std::uint8_t> msg, std::uint64_t seed,
                           const SchemeParams& params);
EmbedResult gmas_embed(const CoefficientImage& cover, std::span<const std::uint8_t> msg, std::uint64_t seed,
                       const SchemeParams& params);
EmbedResult dmas_embed(const CoefficientImage& cover, std::span<const std::uint8_t> msg, std::uint64_t seed,
                       const SchemeParams& params);

// Dispatches on params.scheme.
EmbedResult embed(const CoefficientImage& cover, std::span<const std::uint8_t> msg, std::uint64_t seed,
                  const SchemeParams& params);

struct ExtractResult {
  std::vector<std::uint8_t> message;
  std::vector<std::uint8_t> data;
  std::size_t codewords = 0;
  std::size_t failed_codewords = 0;
  bool length_valid = false;
};

ExtractResult extract(const PixelImage& stego_pixels, const StegoKey& key);
// From already restored coefficients (aligned with the key's cover table).
ExtractResult extract_coefficients(const CoefficientImage& restored, const StegoKey& key);

// Fraction of reference bits that differ from the recovered data. Missing
// bits count as errors.
double bit_error_rate(std::span<const std::uint8_t> reference, const ExtractResult& result);

}  // namespace roast
