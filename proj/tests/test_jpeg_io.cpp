#include <gtest/gtest.h>

#include "reference_decoder.hpp"
#include "roast/block_transform.hpp"
#include "roast/jpeg_io.hpp"
#include "test_support.hpp"

using namespace roast;

namespace {

constexpr std::array<int, 64> kAnnexK = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

constexpr std::array<int, 64> kZigzag = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,  12, 19, 26, 33, 40, 48,
    41, 34, 27, 20, 13, 6,  7,  14, 21, 28, 35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23,
    30, 37, 44, 51, 58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

}  // namespace

TEST(QuantTable, Qf50IsTheBaseTable) { EXPECT_EQ(build_qtable(50).steps(), kAnnexK); }

TEST(QuantTable, Qf100IsAllOnes) {
  for (int s : build_qtable(100).steps()) EXPECT_EQ(s, 1);
}

TEST(QuantTable, Qf65DcStep) {
  EXPECT_EQ(build_qtable(65)[0], 11);
  EXPECT_EQ(build_qtable(65).at(0, 1), 8);  // floor((11 * 70 + 50) / 100)
}

TEST(QuantTable, MonotoneInQuality) {
  for (int qf = 1; qf < 100; ++qf) {
    const auto a = build_qtable(qf), b = build_qtable(qf + 1);
    for (int k = 0; k < 64; ++k) EXPECT_GE(a[k], b[k]) << "qf " << qf << " pos " << k;
  }
}

TEST(QuantTable, RejectsOutOfRange) {
  EXPECT_THROW(build_qtable(0), ParameterError);
  EXPECT_THROW(build_qtable(101), ParameterError);
  std::array<int, 64> bad{};
  bad.fill(1);
  bad[5] = 256;
  EXPECT_THROW(QuantTable{bad}, ParameterError);
}

TEST(Codec, CoefficientRoundTripIsBitExact) {
  for (auto [w, h] : {std::pair{64, 48}, std::pair{37, 21}, std::pair{8, 8}, std::pair{129, 7}}) {
    auto img = fixtures::random_image(w, h, build_qtable(65), static_cast<std::uint64_t>(w * h), 200);
    img.block(0)[0] = kCoefMax;
    img.block(0)[63] = kAcCoefMin;
    if (img.block_count() > 1) img.block(1)[0] = kCoefMin;
    const auto back = decode_jpeg(encode_jpeg(img));
    EXPECT_EQ(back, img) << w << "x" << h;
  }
}

TEST(Codec, AcMagnitudeCategoryElevenIsRejected) {
  CoefficientImage img(8, 8, build_qtable(65));
  img.block(0)[5] = kCoefMin;
  EXPECT_THROW(encode_jpeg(img), ParameterError);
}

TEST(Codec, RoundTripThroughFiles) {
  const auto path = std::filesystem::temp_directory_path() / "roast_codec_roundtrip.jpg";
  const auto img = read_jpeg(fixtures::demo_image());
  write_jpeg(img, path);
  EXPECT_EQ(read_jpeg(path), img);
  std::filesystem::remove(path);
}

TEST(Codec, FlatMidGrayEncodesToZeroBlocks) {
  PixelImage gray(40, 24, 128);
  const auto img = decode_jpeg(encode_jpeg(restore_coefficients(gray, build_qtable(65))));
  for (const auto& b : img.blocks()) {
    for (int c : b) EXPECT_EQ(c, 0);
  }
}

TEST(Codec, ZeroImageDecodesToMidGray) {
  const CoefficientImage img(24, 16, build_qtable(65));
  const auto px = decode_to_pixels(img);
  for (auto p : px.data()) EXPECT_EQ(p, 128);
}

TEST(Codec, DqtSegmentMatchesTable) {
  const auto bytes = encode_jpeg(CoefficientImage(16, 16, build_qtable(65)));
  const auto q = build_qtable(65);
  bool found = false;
  for (std::size_t i = 0; i + 1 < bytes.size(); ++i) {
    if (bytes[i] != 0xFF || bytes[i + 1] != 0xDB) continue;
    found = true;
    ASSERT_EQ(bytes[i + 4] >> 4, 0);  // 8-bit precision
    for (int z = 0; z < 64; ++z) EXPECT_EQ(bytes[i + 5 + z], q[kZigzag[z]]);
    break;
  }
  EXPECT_TRUE(found);
}

TEST(Codec, FlatBlockDecodesToShiftedValue) {
  std::array<int, 64> steps{};
  steps.fill(1);
  steps[0] = 8;
  CoefficientImage img(8, 8, QuantTable(steps));
  img.block(0)[0] = 8;  // dequantized DC 64, flat spatial value 8
  const auto px = decode_to_pixels(img);
  for (auto p : px.data()) EXPECT_EQ(p, 136);
}

TEST(Codec, OverflowClampsTo255) {
  CoefficientImage img(8, 8, QuantTable::uniform(1));
  img.block(0)[0] = 1016;  // flat 127
  img.block(0)[1] = 20;    // pushes the left column above 127
  const auto px = decode_to_pixels(img);
  EXPECT_EQ(px.at(0, 0), 255);
  for (auto p : px.data()) EXPECT_LE(p, 255);
}

TEST(Codec, PixelsAlwaysInRange) {
  const auto img = fixtures::random_image(64, 64, build_qtable(30), 9, 400);
  const auto px = decode_to_pixels(img);
  EXPECT_EQ(px.width(), 64);
  EXPECT_EQ(px.height(), 64);
}

TEST(Codec, TruncatedStreamIsAFormatError) {
  auto bytes = encode_jpeg(fixtures::random_image(32, 32, build_qtable(65), 3));
  bytes.resize(bytes.size() / 2);
  EXPECT_THROW(decode_jpeg(bytes), FormatError);
}

TEST(Codec, ProgressiveIsUnsupported) {
  auto bytes = encode_jpeg(CoefficientImage(16, 16, build_qtable(65)));
  for (std::size_t i = 0; i + 1 < bytes.size(); ++i) {
    if (bytes[i] == 0xFF && bytes[i + 1] == 0xC0) {
      bytes[i + 1] = 0xC2;
      break;
    }
  }
  EXPECT_THROW(decode_jpeg(bytes), UnsupportedFormatError);
}

TEST(Codec, ColorIsUnsupported) {
  auto bytes = encode_jpeg(CoefficientImage(16, 16, build_qtable(65)));
  for (std::size_t i = 0; i + 1 < bytes.size(); ++i) {
    if (bytes[i] == 0xFF && bytes[i + 1] == 0xC0) {
      bytes[i + 9] = 3;  // component count
      break;
    }
  }
  EXPECT_THROW(decode_jpeg(bytes), UnsupportedFormatError);
}

TEST(Codec, OutputIsReadableByLibjpeg) {
  const auto path = std::filesystem::temp_directory_path() / "roast_codec_libjpeg.jpg";
  const auto img = fixtures::random_image(40, 24, build_qtable(75), 11, 60);
  write_jpeg(img, path);
  const auto ref = refdec::read_coefficients(path);
  ASSERT_EQ(ref.blocks.size(), img.blocks().size());
  for (std::size_t b = 0; b < ref.blocks.size(); ++b) {
    for (int k = 0; k < 64; ++k) ASSERT_EQ(ref.blocks[b][k], img.block(static_cast<int>(b))[k]);
  }
  EXPECT_EQ(ref.qtable, img.qtable().steps());
  std::filesystem::remove(path);
}

TEST(Codec, DemoFileParsesIdenticallyToLibjpeg) {
  const auto ours = read_jpeg(fixtures::demo_image());
  const auto ref = refdec::read_coefficients(fixtures::demo_image());
  ASSERT_EQ(ref.width, ours.width());
  for (std::size_t b = 0; b < ref.blocks.size(); ++b) {
    for (int k = 0; k < 64; ++k) ASSERT_EQ(ref.blocks[b][k], ours.block(static_cast<int>(b))[k]);
  }
}

TEST(Pgm, RoundTrip) {
  PixelImage img(13, 7);
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 13; ++x) img.at(x, y) = static_cast<std::uint8_t>(x * 19 + y * 7);
  }
  const auto path = std::filesystem::temp_directory_path() / "roast_pgm.pgm";
  write_pgm(img, path);
  EXPECT_EQ(read_pgm(path), img);
  std::filesystem::remove(path);
}

TEST(Nzac, CountsNonzeroAcOnly) {
  CoefficientImage img(16, 8, QuantTable::uniform(1));
  img.block(0)[0] = 5;
  img.block(0)[1] = -1;
  img.block(1)[63] = 2;
  EXPECT_EQ(count_nzac(img), 2u);
}
