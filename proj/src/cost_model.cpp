#include "roast/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace roast {

std::vector<double> uerd_costs(const CoefficientImage& img) {
  const QuantTable& q = img.qtable();
  const int bw = img.blocks_wide();
  const int bh = img.blocks_high();

  std::vector<double> energy(img.block_count(), 0.0);
  for (int b = 0; b < img.block_count(); ++b) {
    double e = 0.0;
    for (int k = 1; k < kBlockSize; ++k) e += std::abs(static_cast<double>(img.block(b)[k]) * q[k]);
    energy[b] = e;
  }

  const double dc_mode = 0.5 * (q.at(0, 1) + q.at(1, 0));
  std::vector<double> rho(img.coef_count());
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      const int b = by * bw + bx;
      double neighbours = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int nx = bx + dx;
          const int ny = by + dy;
          if (nx < 0 || ny < 0 || nx >= bw || ny >= bh) continue;
          neighbours += energy[ny * bw + nx];
        }
      }
      const double denom = energy[b] + 0.25 * neighbours;
      for (int k = 0; k < kBlockSize; ++k) {
        const double mode = k == 0 ? dc_mode : q[k];
        rho[static_cast<std::size_t>(b) * kBlockSize + k] = denom < kEnergyEpsilon ? kWetCost : mode / denom;
      }
    }
  }
  return rho;
}

std::vector<double> base_costs(const CoefficientImage& img) { return uerd_costs(img); }

ReferenceSpatial mean_filter3x3(const PixelImage& pixels) {
  ReferenceSpatial ref;
  ref.width = pixels.width();
  ref.height = pixels.height();
  ref.values.resize(static_cast<std::size_t>(ref.width) * ref.height);
  for (int y = 0; y < ref.height; ++y) {
    for (int x = 0; x < ref.width; ++x) {
      double acc = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        const int yy = std::clamp(y + dy, 0, ref.height - 1);
        for (int dx = -1; dx <= 1; ++dx) acc += pixels.at(std::clamp(x + dx, 0, ref.width - 1), yy);
      }
      ref.values[static_cast<std::size_t>(y) * ref.width + x] = acc / 9.0;
    }
  }
  return ref;
}

ReferenceSpatial gmas_reference(const CoefficientImage& img) { return mean_filter3x3(decode_to_pixels(img)); }

std::vector<DctBlock> reference_coefficients(const ReferenceSpatial& ref) {
  const int bw = (ref.width + kBlockSide - 1) / kBlockSide;
  const int bh = (ref.height + kBlockSide - 1) / kBlockSide;
  std::vector<DctBlock> out;
  out.reserve(static_cast<std::size_t>(bw) * bh);
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      SpatialBlock s;
      for (int i = 0; i < kBlockSide; ++i) {
        const int y = std::min(by * kBlockSide + i, ref.height - 1);
        for (int j = 0; j < kBlockSide; ++j) {
          s(i, j) = ref.at(std::min(bx * kBlockSide + j, ref.width - 1), y) - 128.0;
        }
      }
      out.push_back(dct2(s));
    }
  }
  return out;
}

CostMap gmas_asymmetric_costs(const std::vector<int>& values, const std::vector<double>& reference_over_q,
                              const std::vector<double>& rho, double lambda) {
  if (!(lambda > 0.0) || lambda > 1.0) throw ParameterError("lambda must be in (0, 1]");
  if (values.size() != rho.size() || values.size() != reference_over_q.size()) {
    throw ParameterError("cost inputs are not aligned");
  }
  CostMap out(rho);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i];
    if (d < reference_over_q[i]) out.plus[i] = lambda * rho[i];
    if (d > reference_over_q[i]) out.minus[i] = lambda * rho[i];
  }
  return out;
}

CostMap gmas_asymmetric_costs(const CoefficientImage& img, const std::vector<double>& rho, double lambda,
                              const ReferenceSpatial& ref) {
  const auto dbar = reference_coefficients(ref);
  if (static_cast<int>(dbar.size()) != img.block_count()) throw ParameterError("reference grid mismatch");
  std::vector<int> values(img.coef_count());
  std::vector<double> target(img.coef_count());
  for (int b = 0; b < img.block_count(); ++b) {
    for (int k = 0; k < kBlockSize; ++k) {
      const std::size_t i = static_cast<std::size_t>(b) * kBlockSize + k;
      values[i] = img.block(b)[k];
      target[i] = dbar[b][k] / img.qtable()[k];
    }
  }
  return gmas_asymmetric_costs(values, target, rho, lambda);
}

GeneralizedDmCosts generalized_dm_costs(double dtilde, int q, double rho_plus, double rho_minus) {
  if (q < 1) throw ParameterError("quantization step must be >= 1");
  GeneralizedDmCosts c;
  c.k = static_cast<int>(round_half_away(dtilde / q));
  c.h_plus = (c.k + 1) * static_cast<double>(q) - dtilde;
  c.h_minus = dtilde - (c.k - 1) * static_cast<double>(q);
  c.xi_plus = rho_plus / q * c.h_plus;
  c.xi_minus = rho_minus / q * c.h_minus;
  return c;
}

CostMap roast_asymmetric_costs(const CoefficientImage& robust, const CoefficientImage& reference,
                               const CostMap& costs, double mu) {
  if (!(mu > 0.0) || mu > 1.0) throw ParameterError("mu must be in (0, 1]");
  if (robust.block_count() != reference.block_count() || costs.size() != robust.coef_count()) {
    throw ParameterError("robust cover, reference cover and costs are not aligned");
  }
  CostMap out = costs;
  for (std::size_t i = 0; i < robust.coef_count(); ++i) {
    const int d_o = robust.coef(i);
    const int d_e = reference.coef(i);
    if (d_e > d_o) out.plus[i] = mu * costs.plus[i];
    if (d_e < d_o) out.minus[i] = mu * costs.minus[i];
  }
  return out;
}

void apply_wet_rules(CostMap& costs, const CoefficientImage& img) {
  for (std::size_t i = 0; i < img.coef_count(); ++i) {
    if (i % kBlockSize == 0) {
      costs.plus[i] = kInfinity;
      costs.minus[i] = kInfinity;
      continue;
    }
    const int d = img.coef(i);
    if (d >= kCoefMax) costs.plus[i] = kInfinity;
    if (d <= kAcCoefMin) costs.minus[i] = kInfinity;
  }
}

void dump_costs(const CostMap& costs, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  for (std::size_t i = 0; i < costs.size(); ++i) {
    const float pair[2] = {static_cast<float>(costs.plus[i]), static_cast<float>(costs.minus[i])};
    f.write(reinterpret_cast<const char*>(pair), sizeof(pair));
  }
}

}  // namespace roast
