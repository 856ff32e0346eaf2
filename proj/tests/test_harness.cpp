#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "roast/harness.hpp"
#include "roast/overflow.hpp"
#include "test_support.hpp"

using namespace roast;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("roast_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

EvalRecord good_record() {
  EvalRecord r;
  r.image_id = "img";
  r.payload = 0.1;
  r.cover_qf = 65;
  r.channel_qf = 85;
  return r;
}

SweepConfig two_image_config(const fs::path& dir) {
  const auto files = roast::fixtures::corpus_files(2);
  for (const auto& f : files) fs::copy_file(f, dir / f.filename());
  SweepConfig c;
  c.corpus_dir = dir;
  c.payloads = {0.1};
  c.channel_qfs = {85, 95};
  c.params.scheme = Scheme::RoastSt;
  c.seed = 7;
  return c;
}

std::string csv(const std::vector<EvalRecord>& records, bool timing = false) {
  std::ostringstream out;
  write_eval_csv(out, records, timing);
  return out.str();
}

}  // namespace

TEST(EvalRecord, Validation) {
  EXPECT_NO_THROW(good_record().validate());
  auto r = good_record();
  r.r_error = 1.5;
  EXPECT_THROW(r.validate(), ParameterError);
  r = good_record();
  r.embedding_change_rate = -0.1;
  EXPECT_THROW(r.validate(), ParameterError);
  r = good_record();
  r.preprocessing_change_rate = std::nan("");
  EXPECT_THROW(r.validate(), ParameterError);
  r = good_record();
  r.image_id.clear();
  EXPECT_THROW(r.validate(), ParameterError);
  r = good_record();
  r.codewords = 1;
  r.failed_codewords = 2;
  EXPECT_THROW(r.validate(), ParameterError);
}

TEST(Csv, HeaderAndNumberFormat) {
  auto r = good_record();
  r.r_error = 1.0 / 3.0;
  const auto text = csv({r});
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "image_id,scheme,payload,cover_qf,channel_qf,r_error,preprocessing_change_rate,"
            "embedding_change_rate,omega_before,omega_after,codewords,failed_codewords,status");
  EXPECT_NE(text.find("img,roast-st,0.1,65,85,0.333333,0,0,0,0,0,0,ok\n"), std::string::npos);
  EXPECT_NE(csv({r}, true).find(",wall_time\n"), std::string::npos);
  EXPECT_EQ(format_number(1234567.0), "1.23457e+06");
}

TEST(Csv, InvalidRecordIsRejectedOnWrite) {
  auto r = good_record();
  r.r_error = 2.0;
  std::ostringstream out;
  EXPECT_THROW(write_eval_row(out, r, false), ParameterError);
}

TEST(Sweep, EmptyPayloadListGivesHeaderOnly) {
  TempDir dir;
  auto c = two_image_config(dir.path());
  c.payloads.clear();
  const auto records = run_sweep(c);
  EXPECT_TRUE(records.empty());
  const auto text = csv(records);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
}

TEST(Sweep, SingleConfigurationGivesOneRow) {
  TempDir dir;
  auto c = two_image_config(dir.path());
  c.max_images = 1;
  c.channel_qfs = {85};
  const auto records = run_sweep(c);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].status, "ok");
  EXPECT_EQ(records[0].cover_qf, 65);
  EXPECT_GT(records[0].codewords, 0u);
  EXPECT_NO_THROW(records[0].validate());
}

TEST(Sweep, DeterministicAcrossRunsAndThreadCounts) {
  TempDir dir;
  const auto c = two_image_config(dir.path());
  const auto first = csv(run_sweep(c));
  const char* old = std::getenv("ROAST_THREADS");
  const std::string saved = old ? old : "";
  setenv("ROAST_THREADS", "1", 1);
  EXPECT_EQ(worker_count(100), 1u);
  const auto serial = csv(run_sweep(c));
  if (old) setenv("ROAST_THREADS", saved.c_str(), 1); else unsetenv("ROAST_THREADS");
  EXPECT_EQ(first, serial);
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 1 + 2 * 2);
  // Rows follow input order: image, then payload, then channel QF.
  const auto records = run_sweep(c);
  EXPECT_EQ(records[0].image_id, records[1].image_id);
  EXPECT_EQ(records[0].channel_qf, 85);
  EXPECT_EQ(records[1].channel_qf, 95);
  EXPECT_LT(records[0].image_id, records[2].image_id);
}

TEST(Sweep, CapacityFailureIsRecorded) {
  TempDir dir;
  auto c = two_image_config(dir.path());
  c.max_images = 1;
  c.channel_qfs = {85};
  c.payloads = {50.0};
  const auto records = run_sweep(c);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].status, "capacity");
  EXPECT_EQ(records[0].r_error, 1.0);
}

TEST(Sweep, ConfigParsing) {
  const auto c = sweep_config_from_json(
      R"({"corpus_dir": "x", "payloads": [0.1, 0.2], "channel_qfs": [85], "scheme": "gmas",
          "params": {"t1": 4, "lambda": 0.7}, "key": {"h": 8}, "seed": 3, "timing": true})");
  EXPECT_EQ(c.corpus_dir, fs::path("x"));
  EXPECT_EQ(c.payloads.size(), 2u);
  EXPECT_EQ(c.params.scheme, Scheme::Gmas);
  EXPECT_EQ(c.params.t1, 4);
  EXPECT_DOUBLE_EQ(c.params.lambda, 0.7);
  EXPECT_EQ(c.params.stc_h, 8);
  EXPECT_EQ(c.seed, 3u);
  EXPECT_TRUE(c.timing);
  EXPECT_THROW(sweep_config_from_json("{"), FormatError);
  EXPECT_THROW(sweep_config_from_json(R"({"payloads": [0.1], "channel_qfs": [85]})"), FormatError);
  EXPECT_THROW(sweep_config_from_json(R"({"corpus_dir": "x", "payloads": [0.1], "channel_qfs": []})"),
               ParameterError);
  EXPECT_THROW(sweep_config_from_json(R"({"corpus_dir": "x", "payloads": [-1], "channel_qfs": [85]})"),
               ParameterError);
  EXPECT_THROW(sweep_config_from_json(R"({"corpus_dir": "x", "channel_qfs": [85], "scheme": "foo"})"),
               ParameterError);
}

TEST(ParallelFor, CoversEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  EXPECT_TRUE(std::ranges::all_of(hits, [](int h) { return h == 1; }));
  parallel_for(0, [](std::size_t) { FAIL(); });
}

TEST(OverflowStats, MidGrayCorpusHasNoOverflow) {
  TempDir dir;
  for (int i = 0; i < 3; ++i) {
    write_jpeg(restore_coefficients(PixelImage(64, 40, 128), build_qtable(65)), dir.path() / ("g" + std::to_string(i) + ".jpg"));
  }
  const auto stats = overflow_stats(list_corpus(dir.path()), {65, 75, 85});
  EXPECT_TRUE(stats.samples.empty());
  ASSERT_EQ(stats.summaries.size(), 9u);
  for (const auto& s : stats.summaries) {
    EXPECT_EQ(s.overflowing_blocks, 0u);
    EXPECT_EQ(s.omega_total, 0.0);
  }
}

TEST(OverflowStats, HandBuiltBlockRows) {
  SpatialBlock s;
  s(2, 3) = 135.0;
  s(5, 6) = -130.0;
  const auto report = inspect_spatial(s);
  EXPECT_DOUBLE_EQ(report.omega, 10.0);
  std::vector<OverflowSample> samples;
  for (const auto& p : report.positions) samples.push_back({"hand", 65, 0, p.row, p.col, p.value, p.excess});
  std::ostringstream out;
  write_overflow_samples(out, samples);
  EXPECT_EQ(out.str(), "image_id,qf,block,row,col,value,excess\nhand,65,0,2,3,135,8\nhand,65,0,5,6,-130,2\n");
}

TEST(OverflowStats, CorpusOverflowFallsWithQuality) {
  const auto stats = overflow_stats(roast::fixtures::corpus_files(10), {65, 95});
  double low = 0, high = 0;
  for (const auto& s : stats.summaries) (s.qf == 65 ? low : high) += s.omega_total;
  EXPECT_GT(low, 0.0);
  EXPECT_GT(low, high);
}

TEST(RoundingMc, TableRows) {
  const auto rows = rounding_mc({1, 3}, 20000, 5);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(rows[0].estimate.probability, 0.916, 0.01);
  EXPECT_GE(rows[1].estimate.probability, 0.9999);
  std::ostringstream out;
  write_rounding_table(out, rows);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "q,probability,standard_error,samples");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

TEST(Ablate, AllStagesOffIsZero) {
  const auto img = read_jpeg(roast::fixtures::corpus_files(1).front());
  const auto r = ablate(img, 85, {false, false});
  EXPECT_EQ(r.rows.size(), 64u);
  EXPECT_EQ(r.total_abs, 0.0);
  for (const auto& row : r.rows) EXPECT_EQ(row.nonzero_fraction, 0.0);
}

// Flat blocks put their common rounding offset on DC.
TEST(Ablate, RoundingOnlyRarelyMovesCoarseAcSteps) {
  const auto img = read_jpeg(roast::fixtures::corpus_files(1).front());
  const auto r = ablate(img, 85, {false, true});
  std::size_t blocks = 0, moved = 0;
  for (const auto& row : r.rows) {
    if (row.q < 3 || (row.u == 0 && row.v == 0)) continue;
    blocks += r.blocks;
    moved += static_cast<std::size_t>(std::llround(row.nonzero_fraction * r.blocks));
  }
  ASSERT_GT(blocks, 0u);
  EXPECT_LE(static_cast<double>(moved) / blocks, 0.001);
}

TEST(Ablate, TruncationDominatesOnOverflowingBlocks) {
  const auto img = read_jpeg(roast::fixtures::corpus_files(1).front());
  const auto trunc = ablate(img, 85, {true, false});
  const auto round = ablate(img, 85, {false, true});
  ASSERT_GT(trunc.overflowing_blocks, 0u);
  EXPECT_GT(trunc.overflow_total_abs, round.overflow_total_abs);
  std::ostringstream out;
  write_ablation_report(out, trunc);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 65);
}
