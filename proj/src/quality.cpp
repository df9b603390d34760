#include "eigensr/quality.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "eigensr/errors.hpp"

namespace eigensr {

double psnr(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw ArgumentError("psnr: dimension mismatch");
  double mse = 0.0;
  for (size_t i = 0; i < a.data().size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.data().size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

namespace {

constexpr int kWin = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::array<double, kWin> gaussian_window() {
  std::array<double, kWin> w{};
  double sum = 0.0;
  for (int i = 0; i < kWin; ++i) {
    const double x = i - (kWin - 1) / 2.0;
    w[static_cast<size_t>(i)] = std::exp(-x * x / (2.0 * kSigma * kSigma));
    sum += w[static_cast<size_t>(i)];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Separable Gaussian filtering over valid windows only: output size
// (w - 10) x (h - 10).
std::vector<double> filter_valid(const std::vector<double>& in, int w, int h) {
  static const auto win = gaussian_window();
  const int ow = w - kWin + 1;
  const int oh = h - kWin + 1;
  std::vector<double> mid(static_cast<size_t>(ow) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWin; ++k) acc += win[static_cast<size_t>(k)] * in[static_cast<size_t>(y) * w + x + k];
      mid[static_cast<size_t>(y) * ow + x] = acc;
    }
  std::vector<double> out(static_cast<size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWin; ++k) acc += win[static_cast<size_t>(k)] * mid[static_cast<size_t>(y + k) * ow + x];
      out[static_cast<size_t>(y) * ow + x] = acc;
    }
  return out;
}

}  // namespace

double ssim(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw ArgumentError("ssim: dimension mismatch");
  const int w = a.width();
  const int h = a.height();
  if (w < kWin || h < kWin)
    throw ArgumentError("ssim: image smaller than the 11x11 window");

  const size_t n = a.data().size();
  std::vector<double> aa(n), bb(n), ab(n);
  for (size_t i = 0; i < n; ++i) {
    aa[i] = a.data()[i] * a.data()[i];
    bb[i] = b.data()[i] * b.data()[i];
    ab[i] = a.data()[i] * b.data()[i];
  }

  const auto mu_a = filter_valid(a.data(), w, h);
  const auto mu_b = filter_valid(b.data(), w, h);
  const auto s_aa = filter_valid(aa, w, h);
  const auto s_bb = filter_valid(bb, w, h);
  const auto s_ab = filter_valid(ab, w, h);

  double total = 0.0;
  for (size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double var_a = s_aa[i] - ma * ma;
    const double var_b = s_bb[i] - mb * mb;
    const double cov = s_ab[i] - ma * mb;
    total += ((2.0 * ma * mb + kC1) * (2.0 * cov + kC2)) /
             ((ma * ma + mb * mb + kC1) * (var_a + var_b + kC2));
  }
  return total / static_cast<double>(mu_a.size());
}

}  // namespace eigensr
