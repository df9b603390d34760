#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace eigensr {

/// Grayscale raster with intensities in [0,1], stored row-major.
/// Public operations clamp their results so the invariant holds at
/// every API boundary.
class Image {
 public:
  Image() = default;
  Image(int width, int height, double fill = 0.0);
  Image(int width, int height, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  double at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x]; }
  double& at(int x, int y) { return data_[static_cast<size_t>(y) * width_ + x]; }

  /// Sample with clamp-to-edge coordinates.
  double at_clamped(int x, int y) const;

  /// Bilinear sample at a real-valued location, clamp-to-edge.
  double sample_bilinear(double x, double y) const;

  void clamp01();

  bool operator==(const Image& other) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Reads an 8-bit grayscale PGM (P5) or 8-bit PNG (RGB converted to
/// luminance). Intensities are mapped to [0,1] by dividing by 255.
Image load_image(const std::filesystem::path& path);

/// Writes binary PGM, maxval 255. Values are clamped and rounded.
void save_pgm(const Image& img, const std::filesystem::path& path);

/// Writes 8-bit grayscale PNG.
void save_png(const Image& img, const std::filesystem::path& path);

/// Dispatches on the extension (.pgm or .png).
void save_image(const Image& img, const std::filesystem::path& path);

}  // namespace eigensr
