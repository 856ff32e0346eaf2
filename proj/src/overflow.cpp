#include "roast/overflow.hpp"

#include <cmath>

namespace roast {

void SuppressionParams::validate() const {
  if (t1 < 0 || t1 > 127) throw ParameterError("T1 must be in 0..127");
  if (!(t2 >= 0.0)) throw ParameterError("T2 must be >= 0");
}

OverflowReport inspect_spatial(const SpatialBlock& s) {
  OverflowReport report;
  for (int i = 0; i < kBlockSide; ++i) {
    for (int j = 0; j < kBlockSide; ++j) {
      const double v = s(i, j);
      if (std::abs(v) > std::abs(report.s_absmax)) report.s_absmax = v;
      const double excess = overflow_excess(v);
      if (excess > 0.0) {
        report.positions.push_back({i, j, v, excess});
        report.omega += excess;
      }
    }
  }
  return report;
}

OverflowReport inspect_block(const CoefBlock& block, const QuantTable& q) {
  return inspect_spatial(block_to_spatial(block, q));
}

double overall_scale_factor(const OverflowReport& report) {
  if (!report.overflows() || report.s_absmax == 0.0) return 1.0;
  const double target = report.s_absmax > 0 ? kSpatialMax : -kSpatialMin;
  return target / std::abs(report.s_absmax);
}

CoefBlock overall_scale_block(const CoefBlock& block, const QuantTable& q) {
  const OverflowReport report = inspect_block(block, q);
  if (!report.overflows()) return block;
  // IDCT and DCT are linear, so scaling the spatial block scales every coefficient by alpha.
  const double alpha = overall_scale_factor(report);
  DctBlock scaled = dequantize(block, q);
  for (double& x : scaled.values) x *= alpha;
  return fix_quantize(scaled, q);
}

SpatialBlock specific_truncate_spatial(const SpatialBlock& s, int t1) {
  SpatialBlock out = s;
  for (double& x : out.values) {
    if (x > kSpatialMax) {
      x = kSpatialMax - t1;
    } else if (x < kSpatialMin) {
      x = kSpatialMin + t1;
    }
  }
  return out;
}

CoefBlock specific_truncate_block(const CoefBlock& block, const QuantTable& q, int t1) {
  if (t1 < 0 || t1 > 127) throw ParameterError("T1 must be in 0..127");
  const SpatialBlock s = block_to_spatial(block, q);
  if (!inspect_spatial(s).overflows()) return block;
  return fix_quantize(dct2(specific_truncate_spatial(s, t1)), q);
}

CoefficientImage suppress_image(const CoefficientImage& img, SuppressionMethod method,
                                const SuppressionParams& params) {
  params.validate();
  CoefficientImage out = img;
  for (int b = 0; b < img.block_count(); ++b) {
    const OverflowReport report = inspect_block(img.block(b), img.qtable());
    if (method == SuppressionMethod::OverallScale) {
      if (report.omega > 0.0) out.block(b) = overall_scale_block(img.block(b), img.qtable());
    } else {
      if (report.omega > params.t2) out.block(b) = specific_truncate_block(img.block(b), img.qtable(), params.t1);
    }
  }
  return out;
}

CoverPair build_cover_pair(const CoefficientImage& img, const SuppressionParams& params) {
  CoverPair pair;
  pair.robust_cover = suppress_image(img, SuppressionMethod::SpecificTruncation, params);
  pair.reference_cover = suppress_image(pair.robust_cover, SuppressionMethod::SpecificTruncation, params);
  return pair;
}

std::vector<OverflowReport> inspect_image(const CoefficientImage& img) {
  std::vector<OverflowReport> reports;
  reports.reserve(img.block_count());
  for (const auto& b : img.blocks()) reports.push_back(inspect_block(b, img.qtable()));
  return reports;
}

double total_omega(const CoefficientImage& img) {
  double total = 0.0;
  for (const auto& b : img.blocks()) total += inspect_block(b, img.qtable()).omega;
  return total;
}

std::size_t overflowing_blocks(const CoefficientImage& img) {
  std::size_t n = 0;
  for (const auto& b : img.blocks()) n += inspect_block(b, img.qtable()).overflows();
  return n;
}

std::size_t count_changed(const CoefficientImage& a, const CoefficientImage& b) {
  if (a.block_count() != b.block_count()) throw ParameterError("images are not aligned");
  std::size_t n = 0;
  for (int i = 0; i < a.block_count(); ++i) {
    for (int k = 0; k < kBlockSize; ++k) n += a.block(i)[k] != b.block(i)[k];
  }
  return n;
}

}  // namespace roast
