#include "roast/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "roast/overflow.hpp"
#include "roast/schemes.hpp"

namespace roast {

using nlohmann::json;

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return mix(mix(base ^ mix(a + 1)) ^ (b + 0x51ed));
}

bool in_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void EvalRecord::validate() const {
  if (image_id.empty()) throw ParameterError("record: empty image id");
  if (!in_unit(r_error)) throw ParameterError("record: r_error outside [0, 1]");
  if (!in_unit(preprocessing_change_rate)) throw ParameterError("record: preprocessing change rate outside [0, 1]");
  if (!in_unit(embedding_change_rate)) throw ParameterError("record: embedding change rate outside [0, 1]");
  if (!(payload > 0.0)) throw ParameterError("record: payload must be positive");
  if (channel_qf < 1 || channel_qf > 100) throw ParameterError("record: channel QF outside [1, 100]");
  if (cover_qf < 0 || cover_qf > 100) throw ParameterError("record: cover QF outside [0, 100]");
  if (omega_before < 0.0 || omega_after < 0.0) throw ParameterError("record: negative omega");
  if (failed_codewords > codewords) throw ParameterError("record: more failed codewords than codewords");
}

void SweepConfig::validate() const {
  if (corpus_dir.empty()) throw ParameterError("sweep: corpus_dir is required");
  if (channel_qfs.empty()) throw ParameterError("sweep: channel_qfs must not be empty");
  for (double p : payloads) {
    if (!(p > 0.0)) throw ParameterError("sweep: payloads must be positive");
  }
  for (int q : channel_qfs) {
    if (q < 1 || q > 100) throw ParameterError("sweep: channel QF outside [1, 100]");
  }
  SchemeParams p = params;
  if (p.payload <= 0.0) p.payload = 0.1;
  p.validate();
}

SweepConfig sweep_config_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    SweepConfig c;
    c.corpus_dir = j.at("corpus_dir").get<std::string>();
    c.payloads = j.value("payloads", std::vector<double>{});
    c.channel_qfs = j.value("channel_qfs", std::vector<int>{});
    c.params.scheme = parse_scheme(j.value("scheme", std::string("roast-st")));
    if (j.contains("params")) {
      const json& p = j["params"];
      c.params.t1 = p.value("t1", c.params.t1);
      c.params.t2 = p.value("t2", c.params.t2);
      c.params.lambda = p.value("lambda", c.params.lambda);
      c.params.mu = p.value("mu", c.params.mu);
      c.params.stc_h = p.value("stc_h", c.params.stc_h);
    }
    if (j.contains("key")) c.params.stc_h = j["key"].value("h", c.params.stc_h);
    c.seed = j.value("seed", c.seed);
    c.output = j.value("output", std::string());
    c.max_images = j.value("max_images", std::size_t{0});
    c.timing = j.value("timing", false);
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw FormatError(std::string("sweep config: ") + e.what());
  }
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return sweep_config_from_json(ss.str());
}

std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir, std::size_t limit) {
  if (!std::filesystem::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".jpg" || ext == ".jpeg") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (limit > 0 && files.size() > limit) files.resize(limit);
  return files;
}

unsigned worker_count(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ROAST_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

PixelImage attack_to_pixels(const CoefficientImage& stego, int channel_qf, AblationFlags flags) {
  return decode_to_pixels(recompress(stego, channel_qf, flags));
}

std::vector<EvalRecord> run_sweep(const SweepConfig& config) {
  config.validate();
  const auto images = list_corpus(config.corpus_dir, config.max_images);
  const std::size_t per_image = config.payloads.size() * config.channel_qfs.size();
  std::vector<EvalRecord> records(images.size() * per_image);

  parallel_for(images.size(), [&](std::size_t i) {
    const CoefficientImage cover = read_jpeg(images[i]);
    const std::string id = images[i].stem().string();
    const double ac = static_cast<double>(cover.block_count()) * (kBlockSize - 1);
    for (std::size_t p = 0; p < config.payloads.size(); ++p) {
      SchemeParams params = config.params;
      params.payload = config.payloads[p];
      const std::uint64_t seed = derive_seed(config.seed, i, p);

      std::mt19937_64 rng(seed ^ 0x6d657373ULL);
      std::vector<std::uint8_t> msg(message_bytes_for(cover, params.payload));
      for (auto& b : msg) b = static_cast<std::uint8_t>(rng() & 0xff);

      const auto start = std::chrono::steady_clock::now();
      std::optional<EmbedResult> embedded;
      std::string status = "ok";
      try {
        embedded = embed(cover, msg, seed, params);
      } catch (const CapacityError&) {
        status = "capacity";
      } catch (const EmbeddingError&) {
        status = "embed-failed";
      }
      const double embed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

      for (std::size_t q = 0; q < config.channel_qfs.size(); ++q) {
        EvalRecord& r = records[i * per_image + p * config.channel_qfs.size() + q];
        r.image_id = id;
        r.scheme = params.scheme;
        r.payload = params.payload;
        r.cover_qf = cover.qtable().quality_factor();
        r.channel_qf = config.channel_qfs[q];
        r.status = status;
        r.omega_before = total_omega(cover);
        if (!embedded) {
          r.r_error = msg.empty() ? 0.0 : 1.0;
          r.omega_after = r.omega_before;
          if (config.timing) r.wall_time = embed_seconds;
          continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const auto received = attack_to_pixels(embedded->stego, r.channel_qf);
        const auto out = extract(received, embedded->key);
        r.cover_qf = embedded->key.cover_qf;
        r.r_error = bit_error_rate(msg, out);
        r.preprocessing_change_rate = ac > 0 ? embedded->preprocessing_changes / ac : 0.0;
        r.embedding_change_rate =
            embedded->domain_size > 0 ? static_cast<double>(embedded->embedding_changes) / embedded->domain_size : 0.0;
        r.omega_after = embedded->omega_after;
        r.codewords = out.codewords;
        r.failed_codewords = out.failed_codewords;
        if (config.timing) {
          r.wall_time = embed_seconds + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
      }
    }
  });
  return records;
}

void write_eval_header(std::ostream& out, bool timing) {
  out << "image_id,scheme,payload,cover_qf,channel_qf,r_error,preprocessing_change_rate,"
         "embedding_change_rate,omega_before,omega_after,codewords,failed_codewords,status";
  if (timing) out << ",wall_time";
  out << '\n';
}

void write_eval_row(std::ostream& out, const EvalRecord& r, bool timing) {
  r.validate();
  out << r.image_id << ',' << scheme_name(r.scheme) << ',' << format_number(r.payload) << ',' << r.cover_qf << ','
      << r.channel_qf << ',' << format_number(r.r_error) << ',' << format_number(r.preprocessing_change_rate) << ','
      << format_number(r.embedding_change_rate) << ',' << format_number(r.omega_before) << ','
      << format_number(r.omega_after) << ',' << r.codewords << ',' << r.failed_codewords << ',' << r.status;
  if (timing) out << ',' << format_number(r.wall_time.value_or(0.0));
  out << '\n';
}

void write_eval_csv(std::ostream& out, const std::vector<EvalRecord>& records, bool timing) {
  write_eval_header(out, timing);
  for (const auto& r : records) write_eval_row(out, r, timing);
}

OverflowStats overflow_stats(const std::vector<std::filesystem::path>& images, const std::vector<int>& qfs) {
  std::vector<OverflowStats> per_image(images.size());
  parallel_for(images.size(), [&](std::size_t i) {
    const auto pixels = decode_to_pixels(read_jpeg(images[i]));
    const std::string id = images[i].stem().string();
    for (int qf : qfs) {
      const auto img = restore_coefficients(pixels, build_qtable(qf));
      OverflowSummary summary{id, qf, static_cast<std::size_t>(img.block_count()), 0, 0.0};
      const auto reports = inspect_image(img);
      for (std::size_t b = 0; b < reports.size(); ++b) {
        if (!reports[b].overflows()) continue;
        ++summary.overflowing_blocks;
        summary.omega_total += reports[b].omega;
        for (const auto& pos : reports[b].positions) {
          per_image[i].samples.push_back({id, qf, static_cast<int>(b), pos.row, pos.col, pos.value, pos.excess});
        }
      }
      per_image[i].summaries.push_back(summary);
    }
  });
  OverflowStats all;
  for (auto& s : per_image) {
    all.samples.insert(all.samples.end(), s.samples.begin(), s.samples.end());
    all.summaries.insert(all.summaries.end(), s.summaries.begin(), s.summaries.end());
  }
  return all;
}

void write_overflow_samples(std::ostream& out, const std::vector<OverflowSample>& samples) {
  out << "image_id,qf,block,row,col,value,excess\n";
  for (const auto& s : samples) {
    out << s.image_id << ',' << s.qf << ',' << s.block << ',' << s.row << ',' << s.col << ','
        << format_number(s.value) << ',' << format_number(s.excess) << '\n';
  }
}

void write_overflow_summaries(std::ostream& out, const std::vector<OverflowSummary>& summaries) {
  out << "image_id,qf,blocks,overflowing_blocks,omega_total\n";
  for (const auto& s : summaries) {
    out << s.image_id << ',' << s.qf << ',' << s.blocks << ',' << s.overflowing_blocks << ','
        << format_number(s.omega_total) << '\n';
  }
}

std::vector<RoundingRow> rounding_mc(const std::vector<int>& qs, std::uint64_t trials, std::uint64_t seed) {
  std::vector<RoundingRow> rows(qs.size());
  parallel_for(qs.size(), [&](std::size_t i) { rows[i] = {qs[i], rounding_survival_probability(qs[i], trials, seed)}; });
  return rows;
}

void write_rounding_table(std::ostream& out, const std::vector<RoundingRow>& rows) {
  out << "q,probability,standard_error,samples\n";
  for (const auto& r : rows) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d,%.6f,%.6g,%llu\n", r.q, r.estimate.probability, r.estimate.standard_error,
                  static_cast<unsigned long long>(r.estimate.samples));
    out << buf;
  }
}

AblationReport ablate(const CoefficientImage& img, int target_qf, AblationFlags flags) {
  const QuantTable target = build_qtable(target_qf);
  AblationReport report;
  report.blocks = static_cast<std::size_t>(img.block_count());
  std::array<double, kBlockSize> sum{}, max{}, overflow_sum{};
  std::array<std::size_t, kBlockSize> nonzero{};
  for (int b = 0; b < img.block_count(); ++b) {
    const SpatialBlock s = block_to_spatial(img.block(b), img.qtable());
    const bool overflowing = inspect_spatial(s).overflows();
    if (overflowing) ++report.overflowing_blocks;
    SpatialBlock diff = apply_spatial_stages(s, flags);
    for (int k = 0; k < kBlockSize; ++k) diff[k] -= s[k];
    const DctBlock delta = dct2(diff);
    for (int k = 0; k < kBlockSize; ++k) {
      const double d = std::abs(delta[k]) / target[k];
      sum[k] += d;
      max[k] = std::max(max[k], d);
      if (round_half_away(d) != 0.0) ++nonzero[k];
      if (overflowing) overflow_sum[k] += d;
    }
  }
  for (int k = 0; k < kBlockSize; ++k) {
    AblationRow row;
    row.u = k / kBlockSide;
    row.v = k % kBlockSide;
    row.q = target[k];
    row.mean_abs = report.blocks ? sum[k] / report.blocks : 0.0;
    row.max_abs = max[k];
    row.nonzero_fraction = report.blocks ? static_cast<double>(nonzero[k]) / report.blocks : 0.0;
    row.overflow_total = overflow_sum[k];
    report.total_abs += sum[k];
    report.overflow_total_abs += overflow_sum[k];
    report.rows.push_back(row);
  }
  return report;
}

void write_ablation_report(std::ostream& out, const AblationReport& report) {
  out << "u,v,q,mean_abs,max_abs,nonzero_fraction,overflow_total\n";
  for (const auto& r : report.rows) {
    out << r.u << ',' << r.v << ',' << r.q << ',' << format_number(r.mean_abs) << ',' << format_number(r.max_abs)
        << ',' << format_number(r.nonzero_fraction) << ',' << format_number(r.overflow_total) << '\n';
  }
}

}  // namespace roast
