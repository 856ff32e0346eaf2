#include "roast/jpeg_io.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>

#include "roast/block_transform.hpp"

namespace roast {

namespace {

// T.81 Table K.1.
constexpr std::array<int, kBlockSize> kLuminanceBase = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99};

// Natural-order index of the k-th zigzag coefficient.
constexpr std::array<int, kBlockSize> kZigzag = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,  12, 19, 26, 33, 40, 48,
    41, 34, 27, 20, 13, 6,  7,  14, 21, 28, 35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23,
    30, 37, 44, 51, 58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

constexpr std::array<std::uint8_t, 16> kDcBits = {0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
constexpr std::array<std::uint8_t, 12> kDcValues = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
constexpr std::array<std::uint8_t, 16> kAcBits = {0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 125};
constexpr std::array<std::uint8_t, 162> kAcValues = {
    0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61, 0x07, 0x22,
    0x71, 0x14, 0x32, 0x81, 0x91, 0xA1, 0x08, 0x23, 0x42, 0xB1, 0xC1, 0x15, 0x52, 0xD1, 0xF0, 0x24, 0x33,
    0x62, 0x72, 0x82, 0x09, 0x0A, 0x16, 0x17, 0x18, 0x19, 0x1A, 0x25, 0x26, 0x27, 0x28, 0x29, 0x2A, 0x34,
    0x35, 0x36, 0x37, 0x38, 0x39, 0x3A, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48, 0x49, 0x4A, 0x53, 0x54, 0x55,
    0x56, 0x57, 0x58, 0x59, 0x5A, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6A, 0x73, 0x74, 0x75, 0x76,
    0x77, 0x78, 0x79, 0x7A, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89, 0x8A, 0x92, 0x93, 0x94, 0x95, 0x96,
    0x97, 0x98, 0x99, 0x9A, 0xA2, 0xA3, 0xA4, 0xA5, 0xA6, 0xA7, 0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4, 0xB5,
    0xB6, 0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3, 0xC4, 0xC5, 0xC6, 0xC7, 0xC8, 0xC9, 0xCA, 0xD2, 0xD3, 0xD4,
    0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA, 0xE1, 0xE2, 0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8, 0xE9, 0xEA, 0xF1,
    0xF2, 0xF3, 0xF4, 0xF5, 0xF6, 0xF7, 0xF8, 0xF9, 0xFA};

// ---------------------------------------------------------------------------
// Huffman tables

struct HuffmanTable {
  std::array<std::uint8_t, 16> bits{};
  std::vector<std::uint8_t> values;

  // Decoder side (T.81 F.2.2.3).
  std::array<int, 17> maxcode{};
  std::array<int, 17> valptr{};
  std::array<int, 17> mincode{};
  // Encoder side: code and length per symbol.
  std::array<std::uint16_t, 256> code{};
  std::array<std::uint8_t, 256> length{};
  bool defined = false;

  void build() {
    int code_value = 0;
    int k = 0;
    for (int len = 1; len <= 16; ++len) {
      const int n = bits[len - 1];
      if (n == 0) {
        maxcode[len] = -1;
      } else {
        valptr[len] = k;
        mincode[len] = code_value;
        for (int i = 0; i < n; ++i, ++k, ++code_value) {
          code[values[k]] = static_cast<std::uint16_t>(code_value);
          length[values[k]] = static_cast<std::uint8_t>(len);
        }
        maxcode[len] = code_value - 1;
      }
      code_value <<= 1;
    }
    defined = true;
  }
};

HuffmanTable make_table(std::span<const std::uint8_t> bits, std::span<const std::uint8_t> values) {
  HuffmanTable t;
  std::copy(bits.begin(), bits.end(), t.bits.begin());
  t.values.assign(values.begin(), values.end());
  t.build();
  return t;
}

// ---------------------------------------------------------------------------
// Decoder

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() {
    if (pos_ >= data_.size()) throw FormatError("truncated JPEG stream");
    return data_[pos_++];
  }
  int u16() {
    const int hi = u8();
    return (hi << 8) | u8();
  }
  void skip(std::size_t n) {
    if (pos_ + n > data_.size()) throw FormatError("truncated JPEG stream");
    pos_ += n;
  }
  std::size_t pos() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }
  std::size_t size() const { return data_.size(); }
  std::uint8_t peek(std::size_t offset) const {
    if (pos_ + offset >= data_.size()) throw FormatError("truncated JPEG stream");
    return data_[pos_ + offset];
  }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

class BitReader {
 public:
  explicit BitReader(ByteReader& in) : in_(in) {}

  int bit() {
    if (count_ == 0) fill();
    --count_;
    return (buffer_ >> count_) & 1;
  }

  int bits(int n) {
    int v = 0;
    for (int i = 0; i < n; ++i) v = (v << 1) | bit();
    return v;
  }

  // Drop the partial byte and consume an RSTn marker.
  void restart() {
    count_ = 0;
    const std::uint8_t a = in_.u8();
    const std::uint8_t b = in_.u8();
    if (a != 0xFF || b < 0xD0 || b > 0xD7) throw FormatError("expected restart marker");
  }

 private:
  void fill() {
    const std::uint8_t b = in_.u8();
    if (b == 0xFF) {
      const std::uint8_t next = in_.u8();
      if (next != 0x00) throw FormatError("unexpected marker inside entropy-coded data");
    }
    buffer_ = b;
    count_ = 8;
  }

  ByteReader& in_;
  std::uint32_t buffer_ = 0;
  int count_ = 0;
};

int decode_symbol(BitReader& br, const HuffmanTable& t) {
  int code = 0;
  for (int len = 1; len <= 16; ++len) {
    code = (code << 1) | br.bit();
    if (t.maxcode[len] >= 0 && code <= t.maxcode[len]) {
      return t.values[t.valptr[len] + code - t.mincode[len]];
    }
  }
  throw FormatError("invalid Huffman code");
}

int extend(int v, int s) { return v < (1 << (s - 1)) ? v - (1 << s) + 1 : v; }

void check_range(int v) {
  if (v < kCoefMin || v > kCoefMax) throw FormatError("coefficient out of baseline range");
}

void decode_block(BitReader& br, const HuffmanTable& dc, const HuffmanTable& ac, int& predictor,
                  CoefBlock& out) {
  out.fill(0);
  const int t = decode_symbol(br, dc);
  if (t > 11) throw FormatError("invalid DC magnitude category");
  const int diff = t == 0 ? 0 : extend(br.bits(t), t);
  predictor += diff;
  check_range(predictor);
  out[0] = predictor;
  for (int k = 1; k < kBlockSize;) {
    const int rs = decode_symbol(br, ac);
    const int r = rs >> 4;
    const int s = rs & 15;
    if (s == 0) {
      if (r != 15) break;
      k += 16;
      continue;
    }
    k += r;
    if (k >= kBlockSize) throw FormatError("AC run past end of block");
    const int v = extend(br.bits(s), s);
    check_range(v);
    out[kZigzag[k]] = v;
    ++k;
  }
}

// ---------------------------------------------------------------------------
// Encoder

class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void put(std::uint32_t value, int n) {
    for (int i = n - 1; i >= 0; --i) {
      buffer_ = (buffer_ << 1) | ((value >> i) & 1);
      if (++count_ == 8) emit();
    }
  }

  void flush() {
    while (count_ != 0) {
      buffer_ = (buffer_ << 1) | 1;
      if (++count_ == 8) emit();
    }
  }

 private:
  void emit() {
    const auto b = static_cast<std::uint8_t>(buffer_ & 0xFF);
    out_.push_back(b);
    if (b == 0xFF) out_.push_back(0x00);
    buffer_ = 0;
    count_ = 0;
  }

  std::vector<std::uint8_t>& out_;
  std::uint32_t buffer_ = 0;
  int count_ = 0;
};

int magnitude_category(int v) {
  int a = v < 0 ? -v : v;
  int n = 0;
  while (a) {
    ++n;
    a >>= 1;
  }
  return n;
}

void put_value(BitWriter& bw, int v, int s) {
  if (s == 0) return;
  const std::uint32_t bits = v < 0 ? static_cast<std::uint32_t>(v + (1 << s) - 1) : static_cast<std::uint32_t>(v);
  bw.put(bits, s);
}

void encode_block(BitWriter& bw, const HuffmanTable& dc, const HuffmanTable& ac, int& predictor,
                  const CoefBlock& block) {
  const int diff = block[0] - predictor;
  predictor = block[0];
  const int s = magnitude_category(diff);
  bw.put(dc.code[s], dc.length[s]);
  put_value(bw, diff, s);

  int run = 0;
  for (int k = 1; k < kBlockSize; ++k) {
    const int v = block[kZigzag[k]];
    if (v == 0) {
      ++run;
      continue;
    }
    while (run > 15) {
      bw.put(ac.code[0xF0], ac.length[0xF0]);
      run -= 16;
    }
    const int cat = magnitude_category(v);
    const int sym = (run << 4) | cat;
    bw.put(ac.code[sym], ac.length[sym]);
    put_value(bw, v, cat);
    run = 0;
  }
  if (run > 0) bw.put(ac.code[0x00], ac.length[0x00]);
}

void put_marker(std::vector<std::uint8_t>& out, std::uint8_t code) {
  out.push_back(0xFF);
  out.push_back(code);
}

void put_u16(std::vector<std::uint8_t>& out, int v) {
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

}  // namespace

// ---------------------------------------------------------------------------

QuantTable::QuantTable(const std::array<int, kBlockSize>& steps, int quality_factor)
    : steps_(steps), quality_factor_(quality_factor) {
  for (int s : steps_) {
    if (s < 1 || s > 255) throw ParameterError("quantization step outside 1..255");
  }
}

QuantTable QuantTable::uniform(int step) {
  std::array<int, kBlockSize> s{};
  s.fill(step);
  return QuantTable(s);
}

QuantTable build_qtable(int quality_factor) {
  if (quality_factor < 1 || quality_factor > 100) {
    throw ParameterError("quality factor must be in 1..100, got " + std::to_string(quality_factor));
  }
  const int scale = quality_factor < 50 ? 5000 / quality_factor : 200 - 2 * quality_factor;
  std::array<int, kBlockSize> steps{};
  for (int i = 0; i < kBlockSize; ++i) {
    steps[i] = std::clamp((kLuminanceBase[i] * scale + 50) / 100, 1, 255);
  }
  return QuantTable(steps, quality_factor);
}

CoefficientImage::CoefficientImage(int width, int height, QuantTable qtable)
    : width_(width),
      height_(height),
      blocks_wide_((width + kBlockSide - 1) / kBlockSide),
      blocks_high_((height + kBlockSide - 1) / kBlockSide),
      qtable_(qtable),
      blocks_(static_cast<std::size_t>(blocks_wide_) * blocks_high_) {
  if (width < 0 || height < 0) throw ParameterError("negative image dimensions");
  for (auto& b : blocks_) b.fill(0);
}

CoefficientImage decode_jpeg(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  if (in.u8() != 0xFF || in.u8() != 0xD8) throw FormatError("missing SOI marker");

  std::array<QuantTable, 4> qtables;
  std::array<bool, 4> qdefined{};
  std::array<HuffmanTable, 4> dc_tables;
  std::array<HuffmanTable, 4> ac_tables;
  int restart_interval = 0;
  int width = 0, height = 0, qindex = -1, component_id = -1;
  bool frame_seen = false;
  CoefficientImage img;

  while (true) {
    std::uint8_t b = in.u8();
    if (b != 0xFF) throw FormatError("expected marker");
    std::uint8_t marker = in.u8();
    while (marker == 0xFF) marker = in.u8();

    if (marker == 0xD9) break;  // EOI
    if (marker == 0xD8 || (marker >= 0xD0 && marker <= 0xD7) || marker == 0x01) continue;

    const int length = in.u16();
    if (length < 2) throw FormatError("bad segment length");
    const std::size_t seg_end = in.pos() + static_cast<std::size_t>(length) - 2;
    if (seg_end > in.size()) throw FormatError("truncated JPEG stream");

    switch (marker) {
      case 0xDB: {  // DQT
        while (in.pos() < seg_end) {
          const int pq_tq = in.u8();
          const int precision = pq_tq >> 4;
          const int id = pq_tq & 15;
          if (id > 3 || precision > 1) throw FormatError("bad DQT header");
          std::array<int, kBlockSize> steps{};
          for (int k = 0; k < kBlockSize; ++k) steps[kZigzag[k]] = precision ? in.u16() : in.u8();
          for (int s : steps) {
            if (s < 1 || s > 255) throw UnsupportedFormatError("quantization step outside 1..255");
          }
          qtables[id] = QuantTable(steps);
          qdefined[id] = true;
        }
        break;
      }
      case 0xC4: {  // DHT
        while (in.pos() < seg_end) {
          const int tc_th = in.u8();
          const int cls = tc_th >> 4;
          const int id = tc_th & 15;
          if (cls > 1 || id > 3) throw FormatError("bad DHT header");
          std::array<std::uint8_t, 16> bits{};
          int total = 0;
          for (auto& n : bits) {
            n = in.u8();
            total += n;
          }
          if (total > 256) throw FormatError("bad DHT symbol count");
          std::vector<std::uint8_t> values(total);
          for (auto& v : values) v = in.u8();
          (cls == 0 ? dc_tables : ac_tables)[id] = make_table(bits, values);
        }
        break;
      }
      case 0xDD:  // DRI
        restart_interval = in.u16();
        break;
      case 0xC0:
      case 0xC1: {  // baseline / extended sequential, Huffman
        if (in.u8() != 8) throw UnsupportedFormatError("only 8-bit sample precision is supported");
        height = in.u16();
        width = in.u16();
        const int ncomp = in.u8();
        if (ncomp != 1) throw UnsupportedFormatError("only single-component (grayscale) JPEG is supported");
        component_id = in.u8();
        in.u8();  // sampling factors are irrelevant for one component
        qindex = in.u8();
        if (qindex > 3) throw FormatError("bad quantization table selector");
        if (width == 0 || height == 0) throw UnsupportedFormatError("DNL-defined height is not supported");
        frame_seen = true;
        break;
      }
      case 0xC2:
      case 0xC3:
      case 0xC5:
      case 0xC6:
      case 0xC7:
        throw UnsupportedFormatError("progressive, lossless and hierarchical JPEG are not supported");
      case 0xC9:
      case 0xCA:
      case 0xCB:
      case 0xCC:
      case 0xCD:
      case 0xCE:
      case 0xCF:
        throw UnsupportedFormatError("arithmetic-coded JPEG is not supported");
      case 0xDA: {  // SOS
        if (!frame_seen) throw FormatError("SOS before SOF");
        if (in.u8() != 1) throw UnsupportedFormatError("multi-component scan");
        if (in.u8() != component_id) throw FormatError("scan references unknown component");
        const int td_ta = in.u8();
        const int ss = in.u8();
        const int se = in.u8();
        const int ah_al = in.u8();
        if (ss != 0 || se != 63 || ah_al != 0) throw UnsupportedFormatError("non-sequential scan");
        const HuffmanTable& dc = dc_tables[(td_ta >> 4) & 3];
        const HuffmanTable& ac = ac_tables[td_ta & 3];
        if (!dc.defined || !ac.defined) throw FormatError("scan uses undefined Huffman table");
        if (!qdefined[qindex]) throw FormatError("frame uses undefined quantization table");
        in.seek(seg_end);

        img = CoefficientImage(width, height, qtables[qindex]);
        BitReader br(in);
        int predictor = 0;
        for (int i = 0; i < img.block_count(); ++i) {
          if (restart_interval > 0 && i > 0 && i % restart_interval == 0) {
            br.restart();
            predictor = 0;
          }
          decode_block(br, dc, ac, predictor, img.block(i));
        }
        // Skip to the next marker (padding bits are already consumed with their byte).
        while (!(in.peek(0) == 0xFF && in.peek(1) != 0x00 && !(in.peek(1) >= 0xD0 && in.peek(1) <= 0xD7))) {
          in.u8();
        }
        continue;
      }
      default:  // APPn, COM, and anything else we do not interpret
        break;
    }
    in.seek(seg_end);
  }
  if (!frame_seen || img.block_count() == 0) throw FormatError("no image data");
  return img;
}

std::vector<std::uint8_t> encode_jpeg(const CoefficientImage& img) {
  if (img.width() <= 0 || img.height() <= 0 || img.width() > 65535 || img.height() > 65535) {
    throw ParameterError("image dimensions not encodable");
  }
  std::vector<std::uint8_t> out;
  out.reserve(1024 + img.block_count() * 16);

  put_marker(out, 0xD8);

  put_marker(out, 0xE0);  // JFIF 1.01, no density units, no thumbnail
  put_u16(out, 16);
  for (char c : std::string_view("JFIF\0", 5)) out.push_back(static_cast<std::uint8_t>(c));
  out.insert(out.end(), {0x01, 0x01, 0x00, 0x00, 0x01, 0x00, 0x01, 0x00, 0x00});

  put_marker(out, 0xDB);
  put_u16(out, 2 + 1 + kBlockSize);
  out.push_back(0x00);
  for (int k = 0; k < kBlockSize; ++k) out.push_back(static_cast<std::uint8_t>(img.qtable()[kZigzag[k]]));

  put_marker(out, 0xC0);
  put_u16(out, 11);
  out.push_back(8);
  put_u16(out, img.height());
  put_u16(out, img.width());
  out.insert(out.end(), {0x01, 0x01, 0x11, 0x00});

  put_marker(out, 0xC4);
  put_u16(out, 2 + 1 + 16 + kDcValues.size() + 1 + 16 + kAcValues.size());
  out.push_back(0x00);
  out.insert(out.end(), kDcBits.begin(), kDcBits.end());
  out.insert(out.end(), kDcValues.begin(), kDcValues.end());
  out.push_back(0x10);
  out.insert(out.end(), kAcBits.begin(), kAcBits.end());
  out.insert(out.end(), kAcValues.begin(), kAcValues.end());

  put_marker(out, 0xDA);
  put_u16(out, 8);
  out.insert(out.end(), {0x01, 0x01, 0x00, 0x00, 0x3F, 0x00});

  static const HuffmanTable dc = make_table(kDcBits, kDcValues);
  static const HuffmanTable ac = make_table(kAcBits, kAcValues);
  BitWriter bw(out);
  int predictor = 0;
  for (const auto& block : img.blocks()) {
    if (block[0] < kCoefMin || block[0] > kCoefMax) throw ParameterError("DC coefficient outside -1024..1023");
    for (int k = 1; k < kBlockSize; ++k) {
      if (block[k] < kAcCoefMin || block[k] > kCoefMax) throw ParameterError("AC coefficient outside -1023..1023");
    }
    encode_block(bw, dc, ac, predictor, block);
  }
  bw.flush();
  put_marker(out, 0xD9);
  return out;
}

CoefficientImage read_jpeg(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode_jpeg(bytes);
}

void write_jpeg(const CoefficientImage& img, const std::filesystem::path& path) {
  const auto bytes = encode_jpeg(img);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error("write failed for " + path.string());
}

PixelImage decode_to_pixels(const CoefficientImage& img) {
  PixelImage out(img.width(), img.height());
  for (int by = 0; by < img.blocks_high(); ++by) {
    for (int bx = 0; bx < img.blocks_wide(); ++bx) {
      const SpatialBlock s = block_to_spatial(img.block(bx, by), img.qtable());
      for (int i = 0; i < kBlockSide; ++i) {
        const int y = by * kBlockSide + i;
        if (y >= img.height()) break;
        for (int j = 0; j < kBlockSide; ++j) {
          const int x = bx * kBlockSide + j;
          if (x >= img.width()) break;
          out.at(x, y) = static_cast<std::uint8_t>(round_half_away(tru(s(i, j)) + 128.0));
        }
      }
    }
  }
  return out;
}

void write_pgm(const PixelImage& img, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  f.write(reinterpret_cast<const char*>(img.data().data()), static_cast<std::streamsize>(img.data().size()));
}

PixelImage read_pgm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  auto token = [&f]() {
    std::string t;
    while (f >> std::ws && f.peek() == '#') {
      std::string comment;
      std::getline(f, comment);
    }
    f >> t;
    return t;
  };
  if (token() != "P5") throw FormatError("not a binary PGM (P5) file");
  const int w = std::stoi(token());
  const int h = std::stoi(token());
  const int maxval = std::stoi(token());
  if (maxval != 255) throw UnsupportedFormatError("only 8-bit PGM is supported");
  f.get();
  PixelImage img(w, h);
  f.read(reinterpret_cast<char*>(img.data().data()), static_cast<std::streamsize>(img.data().size()));
  if (!f) throw FormatError("truncated PGM file");
  return img;
}

std::size_t count_nzac(const CoefficientImage& img) {
  std::size_t n = 0;
  for (const auto& b : img.blocks()) {
    for (int k = 1; k < kBlockSize; ++k) n += b[k] != 0;
  }
  return n;
}

}  // namespace roast
