#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace roast {

// Error hierarchy. Everything thrown by the library derives from roast::Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class EmbeddingError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kBlockSide = 8;
inline constexpr int kBlockSize = 64;
inline constexpr int kCoefMin = -1024;
inline constexpr int kCoefMax = 1023;
// Baseline Huffman coding has no magnitude category 11 for AC terms.
inline constexpr int kAcCoefMin = -1023;
inline constexpr double kSpatialMax = 127.0;
inline constexpr double kSpatialMin = -128.0;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Half-integers closer than this are treated as exact ties. Transform output
// that is mathematically rational (DC-only blocks, the cos(pi/4) modes) only
// hits the tie up to a few ulps.
inline constexpr double kTieEpsilon = 1e-9;

// Nearest integer, ties away from zero.
inline double round_half_away(double x) {
  const double r = std::floor(std::abs(x) + 0.5 + kTieEpsilon);
  return x < 0 ? -r : r;
}

// Nearest integer with smaller magnitude (floor for x >= 0, ceil otherwise).
inline double fix_toward_zero(double x) {
  const double r = std::floor(std::abs(x) + kTieEpsilon);
  return x < 0 ? -r : r;
}

inline int clamp_coef(double x, bool ac = false) {
  const int lo = ac ? kAcCoefMin : kCoefMin;
  if (x < lo) return lo;
  if (x > kCoefMax) return kCoefMax;
  return static_cast<int>(x);
}

// Row-major 8x8 integer block, index u * 8 + v.
using CoefBlock = std::array<int, kBlockSize>;

inline constexpr int block_index(int row, int col) { return row * kBlockSide + col; }

}  // namespace roast
