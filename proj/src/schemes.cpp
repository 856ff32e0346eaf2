#include "roast/schemes.hpp"

#include <cmath>
#include <bit>
#include <random>

#include "roast/cost_model.hpp"
#include "roast/reed_solomon.hpp"
#include "roast/stc.hpp"

namespace roast {

namespace {

constexpr int kSymbolBits = 5;
constexpr std::size_t kDataBitsPerCodeword = ReedSolomon::kK * kSymbolBits;   // 75
constexpr std::size_t kCodeBitsPerCodeword = ReedSolomon::kN * kSymbolBits;   // 155
constexpr std::size_t kHeaderBits = 32;
constexpr std::uint64_t kPermutationSalt = 0x70657266756d6521ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, n) without modulo bias; fixed algorithm so permutations
// agree across standard libraries.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

int infer_quality(const QuantTable& table) {
  if (table.quality_factor() > 0) return table.quality_factor();
  for (int qf = 1; qf <= 100; ++qf) {
    if (build_qtable(qf) == table) return qf;
  }
  return 0;
}

StegoKey make_key(const CoefficientImage& cover, std::uint64_t seed, const SchemeParams& params,
                  std::size_t codewords) {
  StegoKey key;
  key.seed = seed;
  key.h = params.stc_h;
  key.cover_qf = infer_quality(cover.qtable());
  key.cover_table = cover.qtable();
  key.scheme = params.scheme;
  key.params = params;
  key.codewords = codewords;
  return key;
}

void check_capacity(std::size_t codewords, std::size_t domain, bool ternary) {
  const double rate = ternary ? std::log2(3.0) : 1.0;
  if (static_cast<double>(codewords * kCodeBitsPerCodeword) > domain * rate) {
    throw CapacityError("message does not fit: " + std::to_string(codewords * kCodeBitsPerCodeword) +
                        " coded bits for " + std::to_string(domain) + " domain coefficients");
  }
}

struct DomainElements {
  std::vector<int> values;
  std::vector<double> plus;
  std::vector<double> minus;
};

CoefficientImage write_back(CoefficientImage img, const std::vector<std::size_t>& positions,
                            const std::vector<int>& values) {
  for (std::size_t i = 0; i < positions.size(); ++i) img.set_coef(positions[i], values[i]);
  return img;
}

EmbedResult roast_embed(const CoefficientImage& cover, std::span<const std::uint8_t> msg, std::uint64_t seed,
                        SchemeParams params, SuppressionMethod method) {
  params.scheme = method == SuppressionMethod::OverallScale ? Scheme::RoastOs : Scheme::RoastSt;
  params.validate();

  EmbedResult out;
  out.payload.nzac = count_nzac(cover);
  out.payload.message_bits = msg.size() * 8;
  out.omega_before = total_omega(cover);

  const SuppressionParams sp{params.t1, params.t2};
  CoefficientImage reference;
  if (method == SuppressionMethod::OverallScale) {
    out.preprocessed = suppress_image(cover, method, sp);
  } else {
    auto pair = build_cover_pair(cover, sp);
    out.preprocessed = std::move(pair.robust_cover);
    reference = std::move(pair.reference_cover);
  }
  const CoefficientImage& robust = out.preprocessed;
  out.omega_after = total_omega(robust);
  out.preprocessing_changes = count_changed(cover, robust);

  std::size_t codewords = 0;
  const auto framed = frame_message(msg, codewords);
  const auto positions = embedding_positions(robust, params.scheme, seed);
  out.domain_size = positions.size();
  out.key = make_key(cover, seed, params, codewords);
  check_capacity(codewords, positions.size(), true);

  if (codewords == 0) {
    out.stego = robust;
    return out;
  }

  const auto rho = uerd_costs(robust);
  CostMap costs = gmas_asymmetric_costs(robust, rho, params.lambda, gmas_reference(robust));
  if (method == SuppressionMethod::SpecificTruncation) {
    costs = roast_asymmetric_costs(robust, reference, costs, params.mu);
  }
  apply_wet_rules(costs, robust);

  DomainElements el;
  for (std::size_t p : positions) {
    el.values.push_back(robust.coef(p));
    el.plus.push_back(costs.plus[p]);
    el.minus.push_back(costs.minus[p]);
  }
  const auto r = ternary_embed(el.values, el.plus, el.minus, framed, StcKey{params.stc_h, seed});
  out.stego = write_back(robust, positions, r.stego);
  out.embedding_changes = r.changes;
  out.distortion = r.cost;
  return out;
}

// Shared setup of the dither-modulation baselines: centre indices k = [dtilde / q]
// of the decoded cover and the lambda-adjusted base costs on the mid band.
struct DmSetup {
  std::vector<std::size_t> positions;
  std::vector<double> dtilde;
  std::vector<int> steps;
  std::vector<int> centres;
  CostMap rho;
};

DmSetup dm_setup(const CoefficientImage& cover, std::uint64_t seed, const SchemeParams& params, bool asymmetric) {
  DmSetup s;
  s.positions = embedding_positions(cover, params.scheme, seed);
  const auto coefficients = pixels_to_dct(decode_to_pixels(cover));
  const auto rho = uerd_costs(cover);
  std::vector<double> rho_at, ref_over_q;
  const auto ref = asymmetric ? reference_coefficients(gmas_reference(cover)) : std::vector<DctBlock>{};
  for (std::size_t p : s.positions) {
    const int k = static_cast<int>(p % kBlockSize);
    const int q = cover.qtable()[k];
    const double d = coefficients[p / kBlockSize][k];
    s.dtilde.push_back(d);
    s.steps.push_back(q);
    s.centres.push_back(clamp_coef(round_half_away(d / q), true));
    rho_at.push_back(rho[p]);
    if (asymmetric) ref_over_q.push_back(ref[p / kBlockSize][k] / q);
  }
  s.rho = asymmetric ? gmas_asymmetric_costs(s.centres, ref_over_q, rho_at, params.lambda) : CostMap(rho_at);
  return s;
}

void fill_common(EmbedResult& out, const CoefficientImage& cover, std::span<const std::uint8_t> msg) {
  out.payload.nzac = count_nzac(cover);
  out.payload.message_bits = msg.size() * 8;
  out.omega_before = total_omega(cover);
  out.omega_after = out.omega_before;
  out.preprocessed = cover;
}

}  // namespace

const std::array<bool, kBlockSize>& domain_mask(Scheme s) {
  return (s == Scheme::Dmas || s == Scheme::Gmas) ? kMidFrequencyMask : kAllAcMask;
}

bool is_ternary(Scheme s) { return s != Scheme::Dmas; }

std::vector<std::size_t> embedding_positions(const CoefficientImage& img, Scheme s, std::uint64_t seed) {
  const auto& mask = domain_mask(s);
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < img.coef_count(); ++i) {
    if (mask[i % kBlockSize]) positions.push_back(i);
  }
  std::mt19937_64 rng(splitmix64(seed ^ kPermutationSalt));
  for (std::size_t i = positions.size(); i > 1; --i) {
    std::swap(positions[i - 1], positions[bounded(rng, i)]);
  }
  return positions;
}

std::size_t message_bytes_for(const CoefficientImage& cover, double payload) {
  if (payload < 0.0) throw ParameterError("payload must be non-negative");
  return static_cast<std::size_t>(std::floor(payload * static_cast<double>(count_nzac(cover)) / 8.0));
}

std::size_t capacity(const CoefficientImage& cover, const SchemeParams& params) {
  const auto& mask = domain_mask(params.scheme);
  std::size_t per_block = 0;
  for (bool b : mask) per_block += b ? 1 : 0;
  const double n = static_cast<double>(per_block) * cover.block_count();
  const double rate = is_ternary(params.scheme) ? std::log2(3.0) : 1.0;
  return kDataBitsPerCodeword * static_cast<std::size_t>(std::floor(n * rate / kCodeBitsPerCodeword));
}

std::vector<std::uint8_t> frame_message(std::span<const std::uint8_t> message, std::size_t& codewords) {
  codewords = 0;
  if (message.empty()) return {};
  if (message.size() > 0xffffffffULL) throw CapacityError("message too long");

  std::vector<std::uint8_t> data;
  const auto len = static_cast<std::uint32_t>(message.size());
  for (int shift = 24; shift >= 0; shift -= 8) {
    for (int b = 7; b >= 0; --b) data.push_back(static_cast<std::uint8_t>((len >> (shift + b)) & 1u));
  }
  for (std::uint8_t byte : message) {
    for (int b = 7; b >= 0; --b) data.push_back(static_cast<std::uint8_t>((byte >> b) & 1u));
  }
  codewords = (data.size() + kDataBitsPerCodeword - 1) / kDataBitsPerCodeword;
  data.resize(codewords * kDataBitsPerCodeword, 0);

  const ReedSolomon rs;
  std::vector<std::uint8_t> out(codewords * kCodeBitsPerCodeword, 0);
  for (std::size_t c = 0; c < codewords; ++c) {
    ReedSolomon::Message m{};
    for (int i = 0; i < ReedSolomon::kK; ++i) {
      unsigned sym = 0;
      for (int b = 0; b < kSymbolBits; ++b) sym = (sym << 1) | data[c * kDataBitsPerCodeword + i * kSymbolBits + b];
      m[i] = static_cast<std::uint8_t>(sym);
    }
    const auto word = rs.encode(m);
    for (int i = 0; i < ReedSolomon::kN; ++i) {
      const std::size_t t = static_cast<std::size_t>(i) * codewords + c;
      for (int b = 0; b < kSymbolBits; ++b) {
        out[t * kSymbolBits + b] = static_cast<std::uint8_t>((word[i] >> (kSymbolBits - 1 - b)) & 1u);
      }
    }
  }
  return out;
}

DeframeResult deframe_message(std::span<const std::uint8_t> bits, std::size_t codewords) {
  DeframeResult out;
  if (codewords == 0) {
    out.length_valid = true;
    return out;
  }
  if (bits.size() != codewords * kCodeBitsPerCodeword) throw ParameterError("coded bit count mismatch");

  const ReedSolomon rs;
  std::vector<std::uint8_t> data(codewords * kDataBitsPerCodeword);
  for (std::size_t c = 0; c < codewords; ++c) {
    ReedSolomon::Codeword word{};
    for (int i = 0; i < ReedSolomon::kN; ++i) {
      const std::size_t t = static_cast<std::size_t>(i) * codewords + c;
      unsigned sym = 0;
      for (int b = 0; b < kSymbolBits; ++b) sym = (sym << 1) | (bits[t * kSymbolBits + b] & 1u);
      word[i] = static_cast<std::uint8_t>(sym);
    }
    const auto r = rs.decode(word);
    if (!r.ok) ++out.failed_codewords;
    for (int i = 0; i < ReedSolomon::kK; ++i) {
      for (int b = 0; b < kSymbolBits; ++b) {
        data[c * kDataBitsPerCodeword + i * kSymbolBits + b] =
            static_cast<std::uint8_t>((r.message[i] >> (kSymbolBits - 1 - b)) & 1u);
      }
    }
  }

  std::uint32_t len = 0;
  for (std::size_t i = 0; i < kHeaderBits; ++i) len = (len << 1) | data[i];
  const std::size_t available = (data.size() - kHeaderBits) / 8;
  out.data.resize(available);
  for (std::size_t byte = 0; byte < available; ++byte) {
    unsigned v = 0;
    for (int b = 0; b < 8; ++b) v = (v << 1) | data[kHeaderBits + byte * 8 + b];
    out.data[byte] = static_cast<std::uint8_t>(v);
  }
  out.length_valid = len <= available;
  out.message.assign(out.data.begin(), out.data.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(len, available)));
  return out;
}

EmbedResult roast_os_embed(const CoefficientImage& cover, std::span<const std::uint8_t> msg, std::uint64_t seed,
                           const SchemeParams& params) {
  return roast_embed(cover, msg, seed, params, SuppressionMethod::OverallScale);
}

EmbedResult roast_st_embed(const CoefficientImage& cover, std::span<const std::uint8_t> msg, std::uint64_t seed,
                           const SchemeParams& params) {
  return roast_embed(cover, msg, seed, params, SuppressionMethod::SpecificTruncation);
}

EmbedResult gmas_embed(const CoefficientImage& cover, std::span<const std::uint8_t> msg, std::uint64_t seed,
                       const SchemeParams& in) {
  SchemeParams params = in;
  params.scheme = Scheme::Gmas;
  params.validate();

  EmbedResult out;
  fill_common(out, cover, msg);
  std::size_t codewords = 0;
  const auto framed = frame_message(msg, codewords);
  out.key = make_key(cover, seed, params, codewords);
  if (codewords == 0) {
    out.stego = cover;
    out.domain_size = embedding_positions(cover, params.scheme, seed).size();
    return out;
  }

  const auto s = dm_setup(cover, seed, params, true);
  out.domain_size = s.positions.size();
  check_capacity(codewords, s.positions.size(), true);

  DomainElements el;
  el.values = s.centres;
  for (std::size_t i = 0; i < s.positions.size(); ++i) {
    const auto g = generalized_dm_costs(s.dtilde[i], s.steps[i], s.rho.plus[i], s.rho.minus[i]);
    el.plus.push_back(g.xi_plus);
    el.minus.push_back(g.xi_minus);
  }
  const auto r = ternary_embed(el.values, el.plus, el.minus, framed, StcKey{params.stc_h, seed});
  out.stego = write_back(cover, s.positions, r.stego);
  out.embedding_changes = count_changed(cover, out.stego);
  out.distortion = r.cost;
  return out;
}

EmbedResult dmas_embed(const CoefficientImage& cover, std::span<const std::uint8_t> msg, std::uint64_t seed,
                       const SchemeParams& in) {
  SchemeParams params = in;
  params.scheme = Scheme::Dmas;
  params.validate();

  EmbedResult out;
  fill_common(out, cover, msg);
  std::size_t codewords = 0;
  const auto framed = frame_message(msg, codewords);
  out.key = make_key(cover, seed, params, codewords);
  if (codewords == 0) {
    out.stego = cover;
    out.domain_size = embedding_positions(cover, params.scheme, seed).size();
    return out;
  }

  const auto s = dm_setup(cover, seed, params, false);
  out.domain_size = s.positions.size();
  check_capacity(codewords, s.positions.size(), false);

  std::vector<int> directions(s.positions.size());
  for (std::size_t i = 0; i < s.positions.size(); ++i) {
    directions[i] = s.dtilde[i] >= static_cast<double>(s.centres[i]) * s.steps[i] ? 1 : -1;
  }
  const auto r = binary_embed(s.centres, s.rho.plus, directions, framed, StcKey{params.stc_h, seed});
  out.stego = write_back(cover, s.positions, r.stego);
  out.embedding_changes = count_changed(cover, out.stego);
  out.distortion = r.cost;
  return out;
}

EmbedResult embed(const CoefficientImage& cover, std::span<const std::uint8_t> msg, std::uint64_t seed,
                  const SchemeParams& params) {
  switch (params.scheme) {
    case Scheme::Dmas: return dmas_embed(cover, msg, seed, params);
    case Scheme::Gmas: return gmas_embed(cover, msg, seed, params);
    case Scheme::RoastOs: return roast_os_embed(cover, msg, seed, params);
    case Scheme::RoastSt: return roast_st_embed(cover, msg, seed, params);
  }
  throw ParameterError("unknown scheme");
}

ExtractResult extract_coefficients(const CoefficientImage& restored, const StegoKey& key) {
  ExtractResult out;
  out.codewords = key.codewords;
  if (key.codewords == 0) {
    out.length_valid = true;
    return out;
  }
  const auto positions = embedding_positions(restored, key.scheme, key.seed);
  std::vector<int> values;
  values.reserve(positions.size());
  for (std::size_t p : positions) values.push_back(restored.coef(p));
  const std::size_t coded = key.codewords * kCodeBitsPerCodeword;
  const StcKey stc{key.h, key.seed};
  const auto bits = is_ternary(key.scheme) ? ternary_extract(values, coded, stc) : binary_extract(values, coded, stc);
  auto d = deframe_message(bits, key.codewords);
  out.message = std::move(d.message);
  out.data = std::move(d.data);
  out.failed_codewords = d.failed_codewords;
  out.length_valid = d.length_valid;
  return out;
}

ExtractResult extract(const PixelImage& stego_pixels, const StegoKey& key) {
  return extract_coefficients(restore_coefficients(stego_pixels, key.cover_table), key);
}

double bit_error_rate(std::span<const std::uint8_t> reference, const ExtractResult& result) {
  if (reference.empty()) return 0.0;
  std::size_t errors = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const unsigned got = i < result.data.size() ? result.data[i] : ~static_cast<unsigned>(reference[i]);
    errors += static_cast<std::size_t>(std::popcount(static_cast<unsigned>((reference[i] ^ got) & 0xffu)));
  }
  return static_cast<double>(errors) / (8.0 * reference.size());
}

}  // namespace roast
