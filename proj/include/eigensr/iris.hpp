#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "eigensr/image.hpp"

namespace eigensr {

/// Ground-truth segmentation circles, pupil-centered (both circles
/// share the pupil center).
struct IrisAnnotation {
  std::string image_id;
  double center_x = 0.0;
  double center_y = 0.0;
  double pupil_radius = 0.0;
  double iris_radius = 0.0;
};

/// CSV: image_id,px,py,pr,ix,iy,ir (5-column form image_id,px,py,pr,ir
/// also accepted). ix/iy are ignored; the pupil center is shared.
std::map<std::string, IrisAnnotation> load_annotations(const std::filesystem::path& path);
void save_annotations(const std::map<std::string, IrisAnnotation>& anns,
                      const std::filesystem::path& path);

/// Scales circle coordinates to another image side (annotations are
/// stated at the original HR geometry).
IrisAnnotation scale_annotation(const IrisAnnotation& ann, double factor);

struct PolarImage {
  int rows = 0;  // radial resolution
  int cols = 0;  // angular resolution
  std::vector<double> data;  // row-major

  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
};

/// Daugman rubber-sheet unwrapping: cols angles over [0, 2pi), rows
/// radial fractions t in (0, 1], sample = (1-t)*pupil(theta) +
/// t*iris(theta), bilinear interpolation.
PolarImage normalize_polar(const Image& img, const IrisAnnotation& ann, int rows = 20,
                           int cols = 240);

/// Phase-quadrant code: two sign bits per polar cell from the 1D
/// log-Gabor response of each row, plus an amplitude validity mask.
struct IrisCode {
  int rows = 0;
  int cols = 0;
  std::vector<uint8_t> bits;  // 2 per cell: [re_sign, im_sign]
  std::vector<uint8_t> mask;  // 1 per cell
};

/// Row-wise frequency-domain filtering with the log-Gabor transfer
/// function G(f) = exp(-ln(f/f0)^2 / (2 ln(sigma_over_f)^2)),
/// f0 = 1/wavelength. Cells with response magnitude below amp_eps are
/// masked out.
IrisCode encode_loggabor(const PolarImage& polar, double wavelength = 18.0,
                         double sigma_over_f = 0.5, double amp_eps = 1e-4);

/// Minimum masked fractional Hamming distance over circular column
/// shifts in [-max_shift, +max_shift]. Throws UndefinedScoreError when
/// no shift has jointly valid cells.
double match_codes(const IrisCode& a, const IrisCode& b, int max_shift = 8);

}  // namespace eigensr
