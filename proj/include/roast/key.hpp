#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "roast/jpeg_io.hpp"

namespace roast {

enum class Scheme { Dmas, Gmas, RoastOs, RoastSt };

std::string scheme_name(Scheme s);
// Accepts "dmas", "gmas", "roast-os", "roast-st" (case-insensitive, '_' or '-').
Scheme parse_scheme(const std::string& name);

struct SchemeParams {
  Scheme scheme = Scheme::RoastSt;
  double payload = 0.1;  // bits per nonzero AC coefficient of the original cover
  int t1 = 8;
  double t2 = 0.0;
  double lambda = 0.5;
  double mu = 0.5;
  int stc_h = 10;

  void validate() const;
};

// Everything the receiver needs besides the stego image.
struct StegoKey {
  std::uint64_t seed = 0;
  int h = 10;
  int rs_n = 31;
  int rs_k = 15;
  int cover_qf = 0;          // 0 when the cover table is not an IJG-scaled table
  QuantTable cover_table;    // restoration table
  Scheme scheme = Scheme::RoastSt;
  SchemeParams params;
  std::size_t codewords = 0; // RS codewords carried by the stego
};

std::string key_to_json(const StegoKey& key);
StegoKey key_from_json(const std::string& text);

void save_key(const StegoKey& key, const std::filesystem::path& path);
StegoKey load_key(const std::filesystem::path& path);

}  // namespace roast
