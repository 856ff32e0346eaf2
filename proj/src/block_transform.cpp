#include "roast/block_transform.hpp"

#include <numbers>
#include <random>

namespace roast {

namespace {

// basis[u][i] = C(u)/2 * cos((2i+1) u pi / 16)
struct DctMatrix {
  std::array<std::array<double, kBlockSide>, kBlockSide> m{};

  DctMatrix() {
    for (int u = 0; u < kBlockSide; ++u) {
      const double c = u == 0 ? 1.0 / std::numbers::sqrt2 : 1.0;
      for (int i = 0; i < kBlockSide; ++i) {
        m[u][i] = 0.5 * c * std::cos((2 * i + 1) * u * std::numbers::pi / 16.0);
      }
    }
  }
};

const DctMatrix& dct_matrix() {
  static const DctMatrix matrix;
  return matrix;
}

}  // namespace

DctBlock dct2(const SpatialBlock& block) {
  const auto& m = dct_matrix().m;
  std::array<double, kBlockSize> tmp{};
  // tmp = M * S
  for (int u = 0; u < kBlockSide; ++u) {
    for (int j = 0; j < kBlockSide; ++j) {
      double acc = 0.0;
      for (int i = 0; i < kBlockSide; ++i) acc += m[u][i] * block(i, j);
      tmp[block_index(u, j)] = acc;
    }
  }
  DctBlock out;
  for (int u = 0; u < kBlockSide; ++u) {
    for (int v = 0; v < kBlockSide; ++v) {
      double acc = 0.0;
      for (int j = 0; j < kBlockSide; ++j) acc += tmp[block_index(u, j)] * m[v][j];
      out(u, v) = acc;
    }
  }
  return out;
}

SpatialBlock idct2(const DctBlock& block) {
  const auto& m = dct_matrix().m;
  std::array<double, kBlockSize> tmp{};
  // tmp = M^T * F
  for (int i = 0; i < kBlockSide; ++i) {
    for (int v = 0; v < kBlockSide; ++v) {
      double acc = 0.0;
      for (int u = 0; u < kBlockSide; ++u) acc += m[u][i] * block(u, v);
      tmp[block_index(i, v)] = acc;
    }
  }
  SpatialBlock out;
  for (int i = 0; i < kBlockSide; ++i) {
    for (int j = 0; j < kBlockSide; ++j) {
      double acc = 0.0;
      for (int v = 0; v < kBlockSide; ++v) acc += tmp[block_index(i, v)] * m[v][j];
      out(i, j) = acc;
    }
  }
  return out;
}

double idct_basis(int u, int v, int i, int j) {
  const auto& m = dct_matrix().m;
  return m[u][i] * m[v][j];
}

CoefBlock quantize_round(const DctBlock& block, const QuantTable& q) {
  CoefBlock out{};
  for (int k = 0; k < kBlockSize; ++k) out[k] = clamp_coef(round_half_away(block[k] / q[k]), k != 0);
  return out;
}

CoefBlock fix_quantize(const DctBlock& block, const QuantTable& q) {
  CoefBlock out{};
  for (int k = 0; k < kBlockSize; ++k) out[k] = clamp_coef(fix_toward_zero(block[k] / q[k]), k != 0);
  return out;
}

DctBlock dequantize(const CoefBlock& block, const QuantTable& q) {
  DctBlock out;
  for (int k = 0; k < kBlockSize; ++k) out[k] = static_cast<double>(block[k]) * q[k];
  return out;
}

SpatialBlock apply_spatial_stages(SpatialBlock s, AblationFlags flags) {
  for (double& x : s.values) {
    if (flags.apply_truncation) x = tru(x);
    if (flags.apply_rounding) x = round_half_away(x + 128.0) - 128.0;
  }
  return s;
}

CoefficientImage recompress(const CoefficientImage& img, int target_qf, AblationFlags flags) {
  return recompress(img, build_qtable(target_qf), flags);
}

CoefficientImage recompress(const CoefficientImage& img, const QuantTable& target, AblationFlags flags) {
  CoefficientImage out(img.width(), img.height(), target);
  for (int b = 0; b < img.block_count(); ++b) {
    const SpatialBlock s = apply_spatial_stages(block_to_spatial(img.block(b), img.qtable()), flags);
    out.block(b) = quantize_round(dct2(s), target);
  }
  return out;
}

namespace {

SpatialBlock pixel_block(const PixelImage& pixels, int bx, int by) {
  SpatialBlock s;
  for (int i = 0; i < kBlockSide; ++i) {
    const int y = std::min(by * kBlockSide + i, pixels.height() - 1);
    for (int j = 0; j < kBlockSide; ++j) {
      const int x = std::min(bx * kBlockSide + j, pixels.width() - 1);
      s(i, j) = static_cast<double>(pixels.at(x, y)) - 128.0;
    }
  }
  return s;
}

}  // namespace

CoefficientImage restore_coefficients(const PixelImage& pixels, const QuantTable& embed_table) {
  CoefficientImage out(pixels.width(), pixels.height(), embed_table);
  for (int by = 0; by < out.blocks_high(); ++by) {
    for (int bx = 0; bx < out.blocks_wide(); ++bx) {
      out.block(bx, by) = quantize_round(dct2(pixel_block(pixels, bx, by)), embed_table);
    }
  }
  return out;
}

CoefficientImage restore_coefficients(const CoefficientImage& received, const QuantTable& embed_table,
                                      AblationFlags flags) {
  return recompress(received, embed_table, flags);
}

std::vector<DctBlock> pixels_to_dct(const PixelImage& pixels) {
  const int bw = (pixels.width() + kBlockSide - 1) / kBlockSide;
  const int bh = (pixels.height() + kBlockSide - 1) / kBlockSide;
  std::vector<DctBlock> out;
  out.reserve(static_cast<std::size_t>(bw) * bh);
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) out.push_back(dct2(pixel_block(pixels, bx, by)));
  }
  return out;
}

SurvivalEstimate rounding_survival_probability(int q, std::uint64_t trials, std::uint64_t seed) {
  if (q < 1) throw ParameterError("quantization step must be >= 1");
  if (trials == 0) throw ParameterError("trials must be positive");
  std::mt19937_64 rng(seed);
  const double half = 0.5 * q;
  std::uint64_t hits = 0;
  SpatialBlock e;
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (double& x : e.values) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    const DctBlock w = dct2(e);
    for (double x : w.values) hits += (x >= -half && x < half);
  }
  SurvivalEstimate est;
  est.samples = trials * kBlockSize;
  est.probability = static_cast<double>(hits) / static_cast<double>(est.samples);
  est.standard_error = std::sqrt(est.probability * (1.0 - est.probability) / static_cast<double>(est.samples));
  return est;
}

}  // namespace roast
