#include "reference_decoder.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <fftw3.h>
#include <jpeglib.h>

namespace refdec {

namespace {

struct File {
  std::FILE* f;
  explicit File(const std::filesystem::path& p) : f(std::fopen(p.c_str(), "rb")) {
    if (!f) throw std::runtime_error("cannot open " + p.string());
  }
  ~File() { std::fclose(f); }
};

}  // namespace

Coefficients read_coefficients(const std::filesystem::path& path) {
  File file(path);
  jpeg_decompress_struct cinfo;
  jpeg_error_mgr jerr;
  cinfo.err = jpeg_std_error(&jerr);
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file.f);
  jpeg_read_header(&cinfo, TRUE);
  jvirt_barray_ptr* arrays = jpeg_read_coefficients(&cinfo);
  if (cinfo.num_components != 1) throw std::runtime_error("expected grayscale");

  Coefficients c;
  c.width = static_cast<int>(cinfo.image_width);
  c.height = static_cast<int>(cinfo.image_height);
  const jpeg_component_info& comp = cinfo.comp_info[0];
  c.blocks_wide = static_cast<int>(comp.width_in_blocks);
  c.blocks_high = static_cast<int>(comp.height_in_blocks);
  for (int k = 0; k < 64; ++k) c.qtable[k] = comp.quant_table->quantval[k];
  for (int by = 0; by < c.blocks_high; ++by) {
    JBLOCKARRAY row = (*cinfo.mem->access_virt_barray)(reinterpret_cast<j_common_ptr>(&cinfo), arrays[0],
                                                       static_cast<JDIMENSION>(by), 1, FALSE);
    for (int bx = 0; bx < c.blocks_wide; ++bx) {
      std::array<int, 64> b{};
      for (int k = 0; k < 64; ++k) b[k] = row[0][bx][k];
      c.blocks.push_back(b);
    }
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return c;
}

std::vector<std::uint8_t> decode_pixels(const Coefficients& c) {
  double* in = fftw_alloc_real(64);
  double* out = fftw_alloc_real(64);
  fftw_plan plan = fftw_plan_r2r_2d(8, 8, in, out, FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
  const double a0 = 1.0 / (2.0 * std::sqrt(2.0));
  const double a1 = 0.25;

  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(c.width) * c.height);
  for (int by = 0; by < c.blocks_high; ++by) {
    for (int bx = 0; bx < c.blocks_wide; ++bx) {
      const auto& b = c.blocks[static_cast<std::size_t>(by) * c.blocks_wide + bx];
      for (int u = 0; u < 8; ++u) {
        for (int v = 0; v < 8; ++v) {
          in[u * 8 + v] = b[u * 8 + v] * c.qtable[u * 8 + v] * (u ? a1 : a0) * (v ? a1 : a0);
        }
      }
      fftw_execute(plan);
      for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
          const int y = by * 8 + i, x = bx * 8 + j;
          if (x >= c.width || y >= c.height) continue;
          const double s = std::fmin(127.0, std::fmax(-128.0, out[i * 8 + j])) + 128.0;
          pixels[static_cast<std::size_t>(y) * c.width + x] = static_cast<std::uint8_t>(std::floor(s + 0.5 + 1e-9));
        }
      }
    }
  }
  fftw_destroy_plan(plan);
  fftw_free(in);
  fftw_free(out);
  return pixels;
}

std::vector<std::uint8_t> libjpeg_pixels(const std::filesystem::path& path, int method) {
  File file(path);
  jpeg_decompress_struct cinfo;
  jpeg_error_mgr jerr;
  cinfo.err = jpeg_std_error(&jerr);
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file.f);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.dct_method = method == 1 ? JDCT_FLOAT : JDCT_ISLOW;
  jpeg_start_decompress(&cinfo);
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(cinfo.output_width) * cinfo.output_height);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * cinfo.output_width;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return pixels;
}

}  // namespace refdec
