#include "eigensr/resample.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "eigensr/errors.hpp"

namespace eigensr {

namespace {

// Two-lobe cubic convolution, a = -0.5.
double cubic(double x) {
  x = std::abs(x);
  if (x < 1.0) return 1.5 * x * x * x - 2.5 * x * x + 1.0;
  if (x < 2.0) return -0.5 * x * x * x + 2.5 * x * x - 4.0 * x + 2.0;
  return 0.0;
}

double triangle(double x) {
  x = std::abs(x);
  return x < 1.0 ? 1.0 - x : 0.0;
}

struct TapSet {
  int first = 0;                 // index of the first source sample (pre-clamp)
  std::vector<double> weights;   // normalized, one per tap
};

// Precomputed taps for one axis. Output pixel centers map to source
// coordinates via u = (j + 0.5) / scale - 0.5 with scale = out/in.
std::vector<TapSet> make_taps(int in_size, int out_size, ResampleKernel kernel) {
  const double scale = static_cast<double>(out_size) / in_size;
  const double base_support = kernel.kind == KernelKind::kBicubic ? 2.0 : 1.0;
  const bool shrink = kernel.antialias && scale < 1.0;
  const double kscale = shrink ? scale : 1.0;
  const double support = base_support / kscale;

  std::vector<TapSet> taps(static_cast<size_t>(out_size));
  for (int j = 0; j < out_size; ++j) {
    const double u = (j + 0.5) / scale - 0.5;
    const int first = static_cast<int>(std::ceil(u - support));
    const int last = static_cast<int>(std::floor(u + support));
    TapSet t;
    t.first = first;
    t.weights.resize(static_cast<size_t>(last - first + 1));
    double sum = 0.0;
    for (int i = first; i <= last; ++i) {
      const double x = (i - u) * kscale;
      const double w = kernel.kind == KernelKind::kBicubic ? cubic(x) : triangle(x);
      t.weights[static_cast<size_t>(i - first)] = w;
      sum += w;
    }
    if (sum != 0.0)
      for (double& w : t.weights) w /= sum;
    taps[static_cast<size_t>(j)] = std::move(t);
  }
  return taps;
}

}  // namespace

Image resample_raw(const Image& img, int target_w, int target_h, ResampleKernel kernel) {
  if (target_w < 1 || target_h < 1)
    throw ArgumentError("resample: target dimensions must be >= 1");

  const auto col_taps = make_taps(img.width(), target_w, kernel);
  const auto row_taps = make_taps(img.height(), target_h, kernel);

  // Horizontal pass.
  std::vector<double> mid(static_cast<size_t>(target_w) * img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < target_w; ++x) {
      const TapSet& t = col_taps[static_cast<size_t>(x)];
      double acc = 0.0;
      for (size_t k = 0; k < t.weights.size(); ++k) {
        const int sx = std::clamp(t.first + static_cast<int>(k), 0, img.width() - 1);
        acc += t.weights[k] * img.at(sx, y);
      }
      mid[static_cast<size_t>(y) * target_w + x] = acc;
    }
  }

  // Vertical pass.
  Image out(target_w, target_h);
  for (int y = 0; y < target_h; ++y) {
    const TapSet& t = row_taps[static_cast<size_t>(y)];
    for (int x = 0; x < target_w; ++x) {
      double acc = 0.0;
      for (size_t k = 0; k < t.weights.size(); ++k) {
        const int sy = std::clamp(t.first + static_cast<int>(k), 0, img.height() - 1);
        acc += t.weights[k] * mid[static_cast<size_t>(sy) * target_w + x];
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

Image resample(const Image& img, int target_w, int target_h, ResampleKernel kernel) {
  Image out = resample_raw(img, target_w, target_h, kernel);
  out.clamp01();
  return out;
}

int target_size(int source_side, int factor_denominator) {
  const double x = static_cast<double>(source_side) / factor_denominator;
  const long lo = static_cast<long>(std::floor(x));
  const long lo_odd = (lo % 2 != 0) ? lo : lo - 1;
  const long hi_odd = lo_odd + 2;
  // Tie (x exactly even) resolves to the lower odd candidate.
  const long pick = (x - lo_odd <= hi_odd - x) ? lo_odd : hi_odd;
  return static_cast<int>(std::max(pick, 1L));
}

Image degrade(const Image& img, int factor_denominator) {
  const int tw = target_size(img.width(), factor_denominator);
  const int th = target_size(img.height(), factor_denominator);
  return resample(img, tw, th, {KernelKind::kBicubic, true});
}

Image upscale(const Image& img, int target_side, KernelKind kind) {
  return resample(img, target_side, target_side, {kind, true});
}

}  // namespace eigensr
