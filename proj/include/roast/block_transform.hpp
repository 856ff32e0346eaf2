#pragma once

#include <array>
#include <cstdint>

#include "roast/common.hpp"
#include "roast/jpeg_io.hpp"

namespace roast {

// Real-valued 8x8 block. The tag keeps spatial and frequency data apart.
template <class Tag>
struct RealBlock {
  std::array<double, kBlockSize> values{};

  double& operator[](int i) { return values[i]; }
  double operator[](int i) const { return values[i]; }
  double& operator()(int row, int col) { return values[block_index(row, col)]; }
  double operator()(int row, int col) const { return values[block_index(row, col)]; }
};

struct SpatialTag {};
struct DctTag {};

// Level-shifted spatial values, nominally -128..127 but allowed to overflow.
using SpatialBlock = RealBlock<SpatialTag>;
// Unquantized DCT coefficients.
using DctBlock = RealBlock<DctTag>;

// T.81 forward DCT: F(u,v) = 1/4 C(u) C(v) sum s(i,j) cos((2i+1)u pi/16) cos((2j+1)v pi/16),
// C(0) = 1/sqrt(2), C(k) = 1 otherwise. idct2 is its exact inverse.
DctBlock dct2(const SpatialBlock& block);
SpatialBlock idct2(const DctBlock& block);

// Contribution of coefficient (u,v) = 1 to spatial value (i,j).
double idct_basis(int u, int v, int i, int j);

inline double tru(double x) {
  if (x > kSpatialMax) return kSpatialMax;
  if (x < kSpatialMin) return kSpatialMin;
  return x;
}

CoefBlock quantize_round(const DctBlock& block, const QuantTable& q);
CoefBlock fix_quantize(const DctBlock& block, const QuantTable& q);
DctBlock dequantize(const CoefBlock& block, const QuantTable& q);

inline SpatialBlock block_to_spatial(const CoefBlock& block, const QuantTable& q) {
  return idct2(dequantize(block, q));
}

// Which lossy spatial stages of the channel are applied.
struct AblationFlags {
  bool apply_truncation = true;
  bool apply_rounding = true;
};

// Spatial stage of one block: TRU, then round(s + 128) - 128, each optional.
SpatialBlock apply_spatial_stages(SpatialBlock s, AblationFlags flags);

// Simulated channel recompression to target_qf (or an explicit target table).
CoefficientImage recompress(const CoefficientImage& img, int target_qf, AblationFlags flags = {});
CoefficientImage recompress(const CoefficientImage& img, const QuantTable& target, AblationFlags flags = {});

// Receiver side: shift by -128, DCT, round-quantize with the embedding-time table.
// Pixel dimensions that are not multiples of 8 are replicate-padded.
CoefficientImage restore_coefficients(const PixelImage& pixels, const QuantTable& embed_table);

// Same as above starting from a received JPEG without going through 8-bit pixels;
// the spatial stages of the receiver's decoder are controlled by flags.
CoefficientImage restore_coefficients(const CoefficientImage& received, const QuantTable& embed_table,
                                      AblationFlags flags = {});

// Unquantized coefficients of pixels, blockwise (used by the dither-modulation baselines).
std::vector<DctBlock> pixels_to_dct(const PixelImage& pixels);

struct SurvivalEstimate {
  double probability = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
};

// Monte Carlo estimate of P{-q/2 <= w < q/2} where W = DCT(E) and E has i.i.d.
// uniform [-0.5, 0.5) entries. Pooled over all 64 frequencies.
SurvivalEstimate rounding_survival_probability(int q, std::uint64_t trials, std::uint64_t seed);

}  // namespace roast
