#pragma once

#include <limits>
#include <vector>

#include "roast/block_transform.hpp"
#include "roast/jpeg_io.hpp"

namespace roast {

struct OverflowPosition {
  int row = 0;
  int col = 0;
  double value = 0.0;   // spatial value before truncation
  double excess = 0.0;  // delta: |s| - 127 above, |s| - 128 below
};

// Overflow of one block. omega is the sum of per-position excesses.
struct OverflowReport {
  double omega = 0.0;
  std::vector<OverflowPosition> positions;
  double s_absmax = 0.0;  // signed spatial value with the largest magnitude

  bool overflows() const { return !positions.empty(); }
};

struct SuppressionParams {
  int t1 = 8;        // truncation depth, 0..127
  double t2 = 0.0;   // block is processed when omega > t2

  void validate() const;
};

enum class SuppressionMethod { OverallScale, SpecificTruncation };

struct CoverPair {
  CoefficientImage robust_cover;
  CoefficientImage reference_cover;
};

// Excess of one spatial value beyond [-128, 127].
inline double overflow_excess(double s) {
  if (s > kSpatialMax) return s - kSpatialMax;
  if (s < kSpatialMin) return -s + kSpatialMin;
  return 0.0;
}

OverflowReport inspect_spatial(const SpatialBlock& s);
OverflowReport inspect_block(const CoefBlock& block, const QuantTable& q);

// Scale the whole block so its extreme spatial value lands on the range
// boundary, then FIX-quantize. Blocks without overflow are returned unchanged.
CoefBlock overall_scale_block(const CoefBlock& block, const QuantTable& q);

// Scale factor the overall-scale step uses for a spatial block (1 when clean).
double overall_scale_factor(const OverflowReport& report);

// Replace out-of-range spatial values with 127 - t1 / -128 + t1, then
// FIX-quantize. Blocks without overflow are returned unchanged.
CoefBlock specific_truncate_block(const CoefBlock& block, const QuantTable& q, int t1);

// The spatial block specific truncation quantizes (exposed for tests).
SpatialBlock specific_truncate_spatial(const SpatialBlock& s, int t1);

// OS processes every block with omega > 0; ST processes blocks with omega > t2.
CoefficientImage suppress_image(const CoefficientImage& img, SuppressionMethod method,
                                const SuppressionParams& params);

// Robust cover: one ST pass. Reference cover: a second ST pass over the robust cover.
CoverPair build_cover_pair(const CoefficientImage& img, const SuppressionParams& params);

std::vector<OverflowReport> inspect_image(const CoefficientImage& img);
double total_omega(const CoefficientImage& img);
std::size_t overflowing_blocks(const CoefficientImage& img);

// Number of coefficients that differ between two aligned images.
std::size_t count_changed(const CoefficientImage& a, const CoefficientImage& b);

}  // namespace roast
