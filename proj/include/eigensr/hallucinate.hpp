#pragma once

#include "eigensr/dictionary.hpp"
#include "eigensr/image.hpp"

namespace eigensr {

struct ReprojectOptions {
  double tau = 0.02;
  double tol = 1e-5;
  int max_iter = 300;
};

struct HallucinateOptions {
  bool reproject = true;
  ReprojectOptions reprojection;
};

/// Per-position eigen-space projection of the LR input patches, weight
/// transfer to the HR stacks, overlap-averaged stitching and an
/// optional reprojection pass. Returns an hr_side x hr_side image.
Image hallucinate(const Image& lr, const CoupledDictionary& dict,
                  const HallucinateOptions& opts = {});

/// Iterates y <- y - tau * U(B(DB(y) - x)) until the mean absolute
/// update drops below tol or max_iter is reached. DB is the bicubic
/// antialias downsample to the LR grid, B a normalized 3x3 Gaussian
/// (sigma 1) on the LR residual, U the bicubic upsample. Intensities
/// are clamped only on exit. When residual_norms is non-null it
/// receives ||DB(y_t) - x||_2 at the start of every iteration.
Image reproject(const Image& y0, const Image& x, const ReprojectOptions& opts = {},
                std::vector<double>* residual_norms = nullptr);

}  // namespace eigensr
