#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include "roast/block_transform.hpp"
#include "roast/jpeg_io.hpp"

namespace roast {

// Cost of a +1 / -1 change per coefficient, flat index block * 64 + u * 8 + v.
// +infinity marks a wet (unmodifiable) element.
struct CostMap {
  std::vector<double> plus;
  std::vector<double> minus;

  CostMap() = default;
  explicit CostMap(const std::vector<double>& symmetric) : plus(symmetric), minus(symmetric) {}

  std::size_t size() const { return plus.size(); }
};

// Finite stand-in for "do not touch" used by the energy guard of UERD.
inline constexpr double kWetCost = 1e13;
// Block energies below this are treated as zero.
inline constexpr double kEnergyEpsilon = 1e-10;

// Symmetric distortion over all coefficients of an image.
using DistortionFunction = std::function<std::vector<double>(const CoefficientImage&)>;

// UERD: rho = q_{u,v} / (E_b + 0.25 * sum of the 8 neighbouring block energies),
// E = sum over AC of |d * q|. DC uses 0.5 (q01 + q10) as its mode term.
std::vector<double> uerd_costs(const CoefficientImage& img);

// The default base distortion (UERD).
std::vector<double> base_costs(const CoefficientImage& img);

// Decoded image smoothed with the 3x3 mean filter (replicate borders), as reals.
struct ReferenceSpatial {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

ReferenceSpatial mean_filter3x3(const PixelImage& pixels);
ReferenceSpatial gmas_reference(const CoefficientImage& img);

// Blockwise unquantized DCT of the reference (level shifted by -128).
std::vector<DctBlock> reference_coefficients(const ReferenceSpatial& ref);

// Plus is discounted by lambda where d < dbar/q, minus where d > dbar/q.
CostMap gmas_asymmetric_costs(const CoefficientImage& img, const std::vector<double>& rho, double lambda,
                              const ReferenceSpatial& ref);

// Same rule for an arbitrary element list: values[i] vs reference[i] (already divided by q).
CostMap gmas_asymmetric_costs(const std::vector<int>& values, const std::vector<double>& reference_over_q,
                              const std::vector<double>& rho, double lambda);

struct GeneralizedDmCosts {
  int k = 0;            // nearest segment centre index
  double h_plus = 0.0;  // distance to (k+1) q
  double h_minus = 0.0; // distance to (k-1) q
  double xi_plus = 0.0;
  double xi_minus = 0.0;
};

// xi = (rho / q) * h for a coefficient dtilde in ((k - 1/2) q, (k + 1/2) q).
GeneralizedDmCosts generalized_dm_costs(double dtilde, int q, double rho_plus, double rho_minus);

// Discount plus by mu where the reference exceeds the robust cover, minus where it is below.
CostMap roast_asymmetric_costs(const CoefficientImage& robust, const CoefficientImage& reference,
                               const CostMap& costs, double mu);

// DC and range-boundary directions become wet.
void apply_wet_rules(CostMap& costs, const CoefficientImage& img);

// Row-major float32 (plus, minus) pairs.
void dump_costs(const CostMap& costs, const std::filesystem::path& path);

}  // namespace roast
