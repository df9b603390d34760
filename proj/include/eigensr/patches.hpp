#pragma once

#include <vector>

#include "eigensr/image.hpp"

namespace eigensr {

/// Deterministic overlapping-patch tiling of a square image. Anchors
/// are row-major (row, col) top-left corners; the same 1D anchor list
/// is used for both axes.
struct PatchLayout {
  int image_side = 0;
  int patch_side = 0;
  int step = 0;
  std::vector<int> axis_anchors;  // per-axis anchor offsets, ascending

  int grid() const { return static_cast<int>(axis_anchors.size()); }
  int patch_count() const { return grid() * grid(); }
  int patch_pixels() const { return patch_side * patch_side; }

  /// (row, col) anchor of patch i in row-major order.
  std::pair<int, int> anchor(int i) const {
    return {axis_anchors[static_cast<size_t>(i / grid())],
            axis_anchors[static_cast<size_t>(i % grid())]};
  }

  bool operator==(const PatchLayout&) const = default;
};

/// patch_side = max(2, round(image_side * patch_fraction)),
/// step = max(1, round(patch_side * (1 - overlap_fraction))).
/// Regular anchors at multiples of step; a final anchor clamped to
/// image_side - patch_side guarantees full coverage.
PatchLayout compute_layout(int image_side, double patch_fraction,
                           double overlap_fraction = 1.0 / 3.0);

/// Maps a layout to another image side, keeping the grid count. Anchors
/// and the patch side are scaled by target_side/src.image_side and
/// rounded; used to collocate LR and HR patch grids.
PatchLayout map_layout(const PatchLayout& src, int target_side);

/// Row-major flattened patches, order matching the layout anchors.
std::vector<std::vector<double>> extract_patches(const Image& img, const PatchLayout& layout);

/// Mean of all patch values covering each pixel, clamped to [0,1].
Image stitch_patches(const std::vector<std::vector<double>>& patches, const PatchLayout& layout);

}  // namespace eigensr
