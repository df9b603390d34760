#include "eigensr/hallucinate.hpp"

#include <cmath>

#include "eigensr/errors.hpp"
#include "eigensr/parallel.hpp"
#include "eigensr/resample.hpp"

namespace eigensr {

namespace {

// Normalized 3x3 Gaussian, sigma = 1, clamp-to-edge.
Image gaussian3x3(const Image& img) {
  static const double g1 = std::exp(-0.5);
  const double kernel[3] = {g1, 1.0, g1};
  const double norm = 2.0 * g1 + 1.0;
  Image mid(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      double acc = 0.0;
      for (int k = -1; k <= 1; ++k) acc += kernel[k + 1] * img.at_clamped(x + k, y);
      mid.at(x, y) = acc / norm;
    }
  Image out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      double acc = 0.0;
      for (int k = -1; k <= 1; ++k) acc += kernel[k + 1] * mid.at_clamped(x, y + k);
      out.at(x, y) = acc / norm;
    }
  return out;
}

}  // namespace

Image hallucinate(const Image& lr, const CoupledDictionary& dict, const HallucinateOptions& opts) {
  if (lr.width() != dict.lr_side || lr.height() != dict.lr_side)
    throw ArgumentError("hallucinate: input does not match dictionary LR side");

  const auto lr_patches = extract_patches(lr, dict.lr_layout);
  const int n = dict.lr_layout.patch_count();
  std::vector<std::vector<double>> hr_patches(static_cast<size_t>(n));
  parallel_for(n, [&](int i) {
    const auto& entry = dict.entries[static_cast<size_t>(i)];
    const Eigen::Map<const Eigen::VectorXd> x(lr_patches[static_cast<size_t>(i)].data(),
                                              static_cast<Eigen::Index>(lr_patches[static_cast<size_t>(i)].size()));
    const Eigen::VectorXd c = project_weights(entry.eigen, entry.lr_mean, x);
    const Eigen::VectorXd y = reconstruct_hr_patch(c, entry.hr_stack, entry.hr_mean);
    hr_patches[static_cast<size_t>(i)].assign(y.data(), y.data() + y.size());
  });

  Image out = stitch_patches(hr_patches, dict.hr_layout);
  if (opts.reproject) out = reproject(out, lr, opts.reprojection);
  return out;
}

Image reproject(const Image& y0, const Image& x, const ReprojectOptions& opts,
                std::vector<double>* residual_norms) {
  if (opts.tau <= 0.0 || opts.tol <= 0.0)
    throw ArgumentError("reproject: tau and tol must be positive");
  if (y0.width() != y0.height() || x.width() != x.height())
    throw ArgumentError("reproject: square images expected");

  const ResampleKernel down{KernelKind::kBicubic, true};
  const ResampleKernel up{KernelKind::kBicubic, false};

  Image y = y0;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    Image lr = resample_raw(y, x.width(), x.height(), down);
    for (size_t i = 0; i < lr.data().size(); ++i) lr.data()[i] -= x.data()[i];
    if (residual_norms) {
      double sq = 0.0;
      for (double v : lr.data()) sq += v * v;
      residual_norms->push_back(std::sqrt(sq));
    }
    const Image blurred = gaussian3x3(lr);
    const Image update = resample_raw(blurred, y.width(), y.height(), up);
    double mean_abs = 0.0;
    for (size_t i = 0; i < y.data().size(); ++i) {
      const double delta = opts.tau * update.data()[i];
      y.data()[i] -= delta;
      mean_abs += std::abs(delta);
    }
    mean_abs /= static_cast<double>(y.data().size());
    if (mean_abs < opts.tol) break;
  }
  y.clamp01();
  return y;
}

}  // namespace eigensr
