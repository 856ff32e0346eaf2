#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "roast/block_transform.hpp"
#include "roast/key.hpp"

namespace roast {

struct EvalRecord {
  std::string image_id;
  Scheme scheme = Scheme::RoastSt;
  double payload = 0.0;
  int cover_qf = 0;
  int channel_qf = 0;
  double r_error = 0.0;
  double preprocessing_change_rate = 0.0;  // changed coefficients / AC coefficients
  double embedding_change_rate = 0.0;      // changed coefficients / domain size
  double omega_before = 0.0;
  double omega_after = 0.0;
  std::size_t codewords = 0;
  std::size_t failed_codewords = 0;
  std::string status = "ok";
  std::optional<double> wall_time;  // seconds, only when timing is requested

  // Throws ParameterError when a field is out of range.
  void validate() const;
};

struct SweepConfig {
  std::filesystem::path corpus_dir;
  std::vector<double> payloads;
  std::vector<int> channel_qfs;
  SchemeParams params;
  std::uint64_t seed = 1;
  std::filesystem::path output;
  std::size_t max_images = 0;  // 0 = all
  bool timing = false;

  void validate() const;
};

SweepConfig sweep_config_from_json(const std::string& text);
SweepConfig load_sweep_config(const std::filesystem::path& path);

// Sorted *.jpg / *.jpeg files of a directory.
std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir, std::size_t limit = 0);

// Worker count: hardware concurrency capped by ROAST_THREADS and the job count.
unsigned worker_count(std::size_t jobs);

// Runs fn(i) for i in [0, jobs) on a worker pool.
template <class Fn>
void parallel_for(std::size_t jobs, Fn&& fn);

// One embed per (image, payload); one attack + extract per channel QF.
std::vector<EvalRecord> run_sweep(const SweepConfig& config);

// Channel used by the harness: internal recompression followed by an 8-bit decode.
PixelImage attack_to_pixels(const CoefficientImage& stego, int channel_qf, AblationFlags flags = {});

void write_eval_header(std::ostream& out, bool timing);
void write_eval_row(std::ostream& out, const EvalRecord& r, bool timing);
void write_eval_csv(std::ostream& out, const std::vector<EvalRecord>& records, bool timing);

// Overflow of every position of a cover re-quantized to the given QF.
struct OverflowSample {
  std::string image_id;
  int qf = 0;
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
  double excess = 0.0;
};

struct OverflowSummary {
  std::string image_id;
  int qf = 0;
  std::size_t blocks = 0;
  std::size_t overflowing_blocks = 0;
  double omega_total = 0.0;
};

struct OverflowStats {
  std::vector<OverflowSample> samples;
  std::vector<OverflowSummary> summaries;
};

// Covers are decoded to pixels and re-encoded at each QF before inspection.
OverflowStats overflow_stats(const std::vector<std::filesystem::path>& images, const std::vector<int>& qfs);
void write_overflow_samples(std::ostream& out, const std::vector<OverflowSample>& samples);
void write_overflow_summaries(std::ostream& out, const std::vector<OverflowSummary>& summaries);

struct RoundingRow {
  int q = 0;
  SurvivalEstimate estimate;
};

std::vector<RoundingRow> rounding_mc(const std::vector<int>& qs, std::uint64_t trials, std::uint64_t seed);
void write_rounding_table(std::ostream& out, const std::vector<RoundingRow>& rows);

// Coefficient perturbation caused by the channel's spatial stages, measured in
// target quantization steps, per frequency position.
struct AblationRow {
  int u = 0;
  int v = 0;
  int q = 0;
  double mean_abs = 0.0;
  double max_abs = 0.0;
  double nonzero_fraction = 0.0;    // share of blocks with [delta] != 0
  double overflow_total = 0.0;      // sum of |delta| over overflowing blocks
};

struct AblationReport {
  std::vector<AblationRow> rows;
  std::size_t blocks = 0;
  std::size_t overflowing_blocks = 0;
  double total_abs = 0.0;
  double overflow_total_abs = 0.0;
};

AblationReport ablate(const CoefficientImage& img, int target_qf, AblationFlags flags);
void write_ablation_report(std::ostream& out, const AblationReport& report);

std::string format_number(double x);

}  // namespace roast

#include "roast/harness_impl.hpp"
