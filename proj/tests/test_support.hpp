#pragma once

#include <algorithm>
#include <filesystem>
#include <random>
#include <vector>

#include "roast/jpeg_io.hpp"

namespace roast::fixtures {

inline std::filesystem::path corpus_dir() { return ROAST_CORPUS_DIR; }
inline std::filesystem::path demo_image() { return ROAST_DEMO_IMAGE; }

inline std::vector<std::filesystem::path> corpus_files(std::size_t limit = 0) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir())) {
    if (e.path().extension() == ".jpg") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (limit > 0 && files.size() > limit) files.resize(limit);
  return files;
}

// Random coefficients with magnitudes decaying by frequency.
inline CoefficientImage random_image(int width, int height, const QuantTable& q, std::uint64_t seed, int scale = 40) {
  CoefficientImage img(width, height, q);
  std::mt19937_64 rng(seed);
  for (auto& block : img.blocks()) {
    for (int k = 0; k < kBlockSize; ++k) {
      const int limit = std::max(1, scale / (1 + k / 4));
      block[k] = static_cast<int>(rng() % (2 * limit + 1)) - limit;
    }
  }
  return img;
}

inline std::vector<std::uint8_t> random_bytes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

}  // namespace roast::fixtures
