#include "eigensr/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include "eigensr/errors.hpp"

namespace eigensr {

Image::Image(int width, int height, double fill)
    : width_(width), height_(height),
      data_(static_cast<size_t>(width) * height, fill) {
  if (width < 1 || height < 1)
    throw ArgumentError("Image dimensions must be >= 1");
}

Image::Image(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1)
    throw ArgumentError("Image dimensions must be >= 1");
  if (data_.size() != static_cast<size_t>(width) * height)
    throw ArgumentError("Image data length does not match dimensions");
}

double Image::at_clamped(int x, int y) const {
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  return at(x, y);
}

double Image::sample_bilinear(double x, double y) const {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  const double v00 = at_clamped(x0, y0);
  const double v10 = at_clamped(x0 + 1, y0);
  const double v01 = at_clamped(x0, y0 + 1);
  const double v11 = at_clamped(x0 + 1, y0 + 1);
  return (1 - fy) * ((1 - fx) * v00 + fx * v10) + fy * ((1 - fx) * v01 + fx * v11);
}

void Image::clamp01() {
  for (double& v : data_) v = std::clamp(v, 0.0, 1.0);
}

namespace {

// Reads one whitespace-delimited PGM header token, skipping '#' comments.
std::string next_pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

Image load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string magic = next_pgm_token(in);
  if (magic != "P5") throw FormatError("unsupported PGM magic '" + magic + "'");
  int w, h, maxval;
  try {
    w = std::stoi(next_pgm_token(in));
    h = std::stoi(next_pgm_token(in));
    maxval = std::stoi(next_pgm_token(in));
  } catch (const std::exception&) {
    throw FormatError("malformed PGM header in " + path.string());
  }
  if (w < 1 || h < 1) throw FormatError("invalid PGM dimensions");
  if (maxval != 255) throw FormatError("unsupported PGM maxval (only 8-bit, maxval 255)");
  std::vector<uint8_t> raw(static_cast<size_t>(w) * h);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw IoError("truncated PGM payload in " + path.string());
  std::vector<double> data(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) data[i] = raw[i] / 255.0;
  return Image(w, h, std::move(data));
}

struct PngReadCloser {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* fp = nullptr;
  ~PngReadCloser() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

Image load_png(const std::filesystem::path& path) {
  PngReadCloser ctx;
  ctx.fp = std::fopen(path.c_str(), "rb");
  if (!ctx.fp) throw IoError("cannot open " + path.string());
  uint8_t sig[8];
  if (std::fread(sig, 1, 8, ctx.fp) != 8 || png_sig_cmp(sig, 0, 8))
    throw FormatError("not a PNG file: " + path.string());
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.png || !ctx.info) throw IoError("libpng init failed");
  if (setjmp(png_jmpbuf(ctx.png))) throw FormatError("PNG decode failed: " + path.string());
  png_init_io(ctx.png, ctx.fp);
  png_set_sig_bytes(ctx.png, 8);
  png_read_info(ctx.png, ctx.info);

  const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  if (bit_depth == 16) throw FormatError("16-bit PNG unsupported (8-bit only)");
  const int color = png_get_color_type(ctx.png, ctx.info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
  if (color == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
  if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
  png_set_strip_alpha(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  const int w = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
  const int h = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
  const int channels = png_get_channels(ctx.png, ctx.info);
  if (channels != 1 && channels != 3)
    throw FormatError("unsupported PNG channel count");

  std::vector<uint8_t> row(static_cast<size_t>(w) * channels);
  std::vector<double> data(static_cast<size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    png_read_row(ctx.png, row.data(), nullptr);
    for (int x = 0; x < w; ++x) {
      double v;
      if (channels == 1) {
        v = row[x] / 255.0;
      } else {
        // ITU-R BT.601 luminance.
        v = (0.299 * row[3 * x] + 0.587 * row[3 * x + 1] + 0.114 * row[3 * x + 2]) / 255.0;
      }
      data[static_cast<size_t>(y) * w + x] = v;
    }
  }
  return Image(w, h, std::move(data));
}

uint8_t to_u8(double v) {
  return static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open " + path.string());
  char head[2] = {0, 0};
  probe.read(head, 2);
  probe.close();
  if (head[0] == 'P' && head[1] == '5') return load_pgm(path);
  if (static_cast<uint8_t>(head[0]) == 0x89 && head[1] == 'P') return load_png(path);
  // Fall back on the extension for clearer error messages.
  auto ext = path.extension().string();
  if (ext == ".pgm") return load_pgm(path);
  if (ext == ".png") return load_png(path);
  throw FormatError("unrecognized image format: " + path.string());
}

void save_pgm(const Image& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
  std::vector<uint8_t> raw(img.data().size());
  for (size_t i = 0; i < raw.size(); ++i) raw[i] = to_u8(img.data()[i]);
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void save_png(const Image& img, const std::filesystem::path& path) {
  FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw IoError("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info) {
    std::fclose(fp);
    throw IoError("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw IoError("PNG encode failed: " + path.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<uint8_t> row(static_cast<size_t>(img.width()));
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) row[x] = to_u8(img.at(x, y));
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

void save_image(const Image& img, const std::filesystem::path& path) {
  if (path.extension() == ".png")
    save_png(img, path);
  else
    save_pgm(img, path);
}

}  // namespace eigensr
