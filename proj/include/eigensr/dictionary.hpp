#pragma once

#include <filesystem>
#include <vector>

#include "eigensr/eigenmodel.hpp"
#include "eigensr/image.hpp"
#include "eigensr/patches.hpp"

namespace eigensr {

/// Training patches for one patch position at both resolutions, with
/// the fitted eigen model of the centered LR stack.
struct DictionaryEntry {
  Eigen::MatrixXd lr_stack;  // d_L x M, columns are flattened LR patches
  Eigen::MatrixXd hr_stack;  // d_H x M
  Eigen::VectorXd lr_mean;
  Eigen::VectorXd hr_mean;
  EigenModel eigen;

  bool operator==(const DictionaryEntry& o) const {
    return lr_stack == o.lr_stack && hr_stack == o.hr_stack && lr_mean == o.lr_mean &&
           hr_mean == o.hr_mean && eigen == o.eigen;
  }
};

/// Coupled position-patch dictionary. The patch grid is computed on the
/// LR side and mapped to HR so that entry i holds collocated patches at
/// both resolutions.
struct CoupledDictionary {
  int factor_denominator = 0;  // scale factor 1/n
  int hr_side = 0;
  int lr_side = 0;
  double patch_fraction = 0.0;
  double overlap_fraction = 0.0;
  double variance_retention = 0.0;
  int training_count = 0;  // M
  PatchLayout lr_layout;
  PatchLayout hr_layout;
  std::vector<DictionaryEntry> entries;  // layout order

  bool operator==(const CoupledDictionary&) const = default;
};

/// Degrades each HR image by 1/n (bicubic + antialias), tiles both
/// resolutions with collocated grids and fits the per-position eigen
/// models. Deterministic given inputs.
CoupledDictionary build_dictionary(const std::vector<Image>& hr_images, int factor_denominator,
                                   double patch_fraction, double overlap_fraction = 1.0 / 3.0,
                                   double variance_retention = 0.99);

/// Binary container (magic "EPSR", version 1, little-endian, f64
/// matrices with u64 dims) plus a JSON sidecar manifest at
/// path + ".json". Round-trips bit-identically.
void save_dictionary(const CoupledDictionary& dict, const std::filesystem::path& path);
CoupledDictionary load_dictionary(const std::filesystem::path& path);

}  // namespace eigensr
