#pragma once

#include "eigensr/image.hpp"

namespace eigensr {

enum class KernelKind { kBilinear, kBicubic };

/// Separable resampling kernel. `antialias` widens the support by the
/// inverse scale when downscaling, averaging over the source footprint.
struct ResampleKernel {
  KernelKind kind = KernelKind::kBicubic;
  bool antialias = true;
};

/// Separable resampling (rows then columns). Kernel weights are
/// normalized to sum 1 per output pixel; boundary handling is
/// clamp-to-edge. Output is clamped to [0,1].
Image resample(const Image& img, int target_w, int target_h, ResampleKernel kernel);

/// Same resampling without the final clamp. Used where the recursion
/// must stay linear (reprojection residuals).
Image resample_raw(const Image& img, int target_w, int target_h, ResampleKernel kernel);

/// Odd integer nearest to source_side/n. Reproduces the downsampling
/// ladder 231 -> {115,57,39,29,23,19,17,15} for n in {2,4,...,16}.
int target_size(int source_side, int factor_denominator);

/// Convenience: degrade a square image by 1/n (bicubic + antialias).
Image degrade(const Image& img, int factor_denominator);

/// Upscale back to a given side with the interpolation baselines.
Image upscale(const Image& img, int target_side, KernelKind kind);

}  // namespace eigensr
