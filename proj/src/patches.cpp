#include "eigensr/patches.hpp"

#include <algorithm>
#include <cmath>

#include "eigensr/errors.hpp"

namespace eigensr {

namespace {

std::vector<int> axis_anchors_for(int image_side, int patch_side, int step) {
  std::vector<int> anchors;
  for (int a = 0; a + patch_side <= image_side; a += step) anchors.push_back(a);
  const int last = image_side - patch_side;
  if (anchors.empty() || anchors.back() != last) anchors.push_back(last);
  return anchors;
}

}  // namespace

PatchLayout compute_layout(int image_side, double patch_fraction, double overlap_fraction) {
  if (image_side < 2) throw ArgumentError("compute_layout: image_side must be >= 2");
  const int patch_side =
      std::max(2, static_cast<int>(std::lround(image_side * patch_fraction)));
  if (patch_side > image_side)
    throw ArgumentError("compute_layout: patch larger than image");
  const int step =
      std::max(1, static_cast<int>(std::lround(patch_side * (1.0 - overlap_fraction))));
  PatchLayout layout;
  layout.image_side = image_side;
  layout.patch_side = patch_side;
  layout.step = step;
  layout.axis_anchors = axis_anchors_for(image_side, patch_side, step);
  return layout;
}

PatchLayout map_layout(const PatchLayout& src, int target_side) {
  const double ratio = static_cast<double>(target_side) / src.image_side;
  PatchLayout out;
  out.image_side = target_side;
  out.patch_side = std::max(2, static_cast<int>(std::lround(src.patch_side * ratio)));
  if (out.patch_side > target_side)
    throw ArgumentError("map_layout: mapped patch larger than target image");
  out.step = std::max(1, static_cast<int>(std::lround(src.step * ratio)));
  const int last = target_side - out.patch_side;
  out.axis_anchors.reserve(src.axis_anchors.size());
  for (int a : src.axis_anchors) {
    const int m = std::clamp(static_cast<int>(std::lround(a * ratio)), 0, last);
    out.axis_anchors.push_back(m);
  }
  return out;
}

std::vector<std::vector<double>> extract_patches(const Image& img, const PatchLayout& layout) {
  if (img.width() != layout.image_side || img.height() != layout.image_side)
    throw ArgumentError("extract_patches: image does not match layout side");
  std::vector<std::vector<double>> patches;
  patches.reserve(static_cast<size_t>(layout.patch_count()));
  for (int i = 0; i < layout.patch_count(); ++i) {
    const auto [row, col] = layout.anchor(i);
    std::vector<double> p(static_cast<size_t>(layout.patch_pixels()));
    for (int y = 0; y < layout.patch_side; ++y)
      for (int x = 0; x < layout.patch_side; ++x)
        p[static_cast<size_t>(y) * layout.patch_side + x] = img.at(col + x, row + y);
    patches.push_back(std::move(p));
  }
  return patches;
}

Image stitch_patches(const std::vector<std::vector<double>>& patches, const PatchLayout& layout) {
  if (patches.size() != static_cast<size_t>(layout.patch_count()))
    throw ArgumentError("stitch_patches: patch count does not match layout");
  const size_t npix = static_cast<size_t>(layout.image_side) * layout.image_side;
  std::vector<double> sum(npix, 0.0);
  std::vector<int> count(npix, 0);
  // Track whether all contributions to a pixel are identical; in that
  // case the mean is returned bit-exactly without a divide.
  std::vector<double> first(npix, 0.0);
  std::vector<uint8_t> uniform(npix, 1);

  for (int i = 0; i < layout.patch_count(); ++i) {
    const auto& p = patches[static_cast<size_t>(i)];
    if (p.size() != static_cast<size_t>(layout.patch_pixels()))
      throw ArgumentError("stitch_patches: patch vector has wrong length");
    const auto [row, col] = layout.anchor(i);
    for (int y = 0; y < layout.patch_side; ++y) {
      for (int x = 0; x < layout.patch_side; ++x) {
        const size_t idx = static_cast<size_t>(row + y) * layout.image_side + (col + x);
        const double v = p[static_cast<size_t>(y) * layout.patch_side + x];
        if (count[idx] == 0)
          first[idx] = v;
        else if (v != first[idx])
          uniform[idx] = 0;
        sum[idx] += v;
        ++count[idx];
      }
    }
  }

  std::vector<double> out(npix);
  for (size_t i = 0; i < npix; ++i) {
    if (count[i] == 0) throw ArgumentError("stitch_patches: layout leaves pixels uncovered");
    out[i] = uniform[i] ? first[i] : sum[i] / count[i];
  }
  Image img(layout.image_side, layout.image_side, std::move(out));
  img.clamp01();
  return img;
}

}  // namespace eigensr
