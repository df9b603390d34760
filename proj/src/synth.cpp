#include "eigensr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "eigensr/errors.hpp"

namespace eigensr {

namespace {

struct IdentityParams {
  double pupil_radius;
  double iris_radius;
  // Texture mixture: angular and radial sinusoids.
  static constexpr int kTerms = 6;
  double ang_freq[kTerms];
  double ang_phase[kTerms];
  double ang_amp[kTerms];
  double rad_freq[kTerms];
  double rad_phase[kTerms];
  double rad_amp[kTerms];
};

std::mt19937_64 identity_rng(const SynthOptions& opts, int identity) {
  return std::mt19937_64(opts.seed * 0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(identity) + 1);
}

IdentityParams make_identity(const SynthOptions& opts, int identity) {
  auto rng = identity_rng(opts, identity);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  IdentityParams p{};
  p.pupil_radius = opts.side * (0.10 + 0.04 * uni(rng));
  p.iris_radius = opts.side * (0.34 + 0.06 * uni(rng));
  for (int k = 0; k < IdentityParams::kTerms; ++k) {
    // Angular frequencies in the band the log-Gabor comparator sees
    // (periods of roughly 10..30 polar columns at 240 columns).
    p.ang_freq[k] = std::floor(8.0 + 18.0 * uni(rng));
    p.ang_phase[k] = 2.0 * std::numbers::pi * uni(rng);
    p.ang_amp[k] = 0.04 + 0.06 * uni(rng);
    p.rad_freq[k] = 2.0 + 6.0 * uni(rng);
    p.rad_phase[k] = 2.0 * std::numbers::pi * uni(rng);
    p.rad_amp[k] = 0.02 + 0.04 * uni(rng);
  }
  return p;
}

struct VariantParams {
  double rotation;  // radians
  double contrast;  // gain around mid-gray
};

VariantParams make_variant(const SynthOptions& opts, int identity, int variant) {
  auto rng = identity_rng(opts, identity);
  rng.discard(256);
  std::mt19937_64 vrng(rng() + static_cast<uint64_t>(variant) * 0x2545f4914f6cdd1dULL);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  VariantParams v{};
  v.rotation = (std::numbers::pi / 60.0) * uni(vrng);  // up to +-3 degrees
  v.contrast = 1.0 + 0.05 * uni(vrng);
  return v;
}

double smoothstep(double edge0, double edge1, double x) {
  const double t = std::clamp((x - edge0) / (edge1 - edge0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

}  // namespace

Image synth_iris(const SynthOptions& opts, int identity, int variant) {
  if (opts.side % 2 == 0) throw ArgumentError("synth_iris: side must be odd");
  if (opts.side < 63) throw ArgumentError("synth_iris: side must be >= 63");
  const auto id = make_identity(opts, identity);
  const auto var = make_variant(opts, identity, variant);
  const double cx = (opts.side - 1) / 2.0;
  const double cy = cx;

  Image img(opts.side, opts.side);
  for (int y = 0; y < opts.side; ++y) {
    for (int x = 0; x < opts.side; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      const double r = std::hypot(dx, dy);
      const double theta = std::atan2(dy, dx) + var.rotation;
      const double rn = std::clamp((r - id.pupil_radius) / (id.iris_radius - id.pupil_radius), 0.0, 1.0);

      double texture = 0.45;
      for (int k = 0; k < IdentityParams::kTerms; ++k) {
        texture += id.ang_amp[k] * std::sin(id.ang_freq[k] * theta + id.ang_phase[k] +
                                            2.0 * std::numbers::pi * id.rad_freq[k] * 0.15 * rn);
        texture += id.rad_amp[k] * std::sin(2.0 * std::numbers::pi * id.rad_freq[k] * rn + id.rad_phase[k]);
      }
      texture = 0.5 + var.contrast * (texture - 0.5);

      const double pupil = 0.05;
      const double sclera = 0.85 - 0.1 * smoothstep(id.iris_radius, opts.side * 0.55, r);
      const double w_iris = smoothstep(id.pupil_radius - 1.5, id.pupil_radius + 1.5, r) *
                            (1.0 - smoothstep(id.iris_radius - 1.5, id.iris_radius + 1.5, r));
      const double w_sclera = smoothstep(id.iris_radius - 1.5, id.iris_radius + 1.5, r);
      const double w_pupil = 1.0 - smoothstep(id.pupil_radius - 1.5, id.pupil_radius + 1.5, r);
      img.at(x, y) = w_pupil * pupil + w_iris * texture + w_sclera * sclera;
    }
  }
  img.clamp01();
  return img;
}

IrisAnnotation synth_annotation(const SynthOptions& opts, int identity, int variant) {
  const auto id = make_identity(opts, identity);
  IrisAnnotation ann;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "id%03d_%02d", identity, variant);
  ann.image_id = buf;
  ann.center_x = (opts.side - 1) / 2.0;
  ann.center_y = ann.center_x;
  ann.pupil_radius = id.pupil_radius;
  ann.iris_radius = id.iris_radius;
  return ann;
}

int generate_corpus(const SynthOptions& opts, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::map<std::string, IrisAnnotation> anns;
  int written = 0;
  for (int i = 0; i < opts.identities; ++i) {
    for (int v = 1; v <= opts.images_per_identity; ++v) {
      const Image img = synth_iris(opts, i, v);
      const IrisAnnotation ann = synth_annotation(opts, i, v);
      save_pgm(img, out_dir / (ann.image_id + ".pgm"));
      anns[ann.image_id] = ann;
      ++written;
    }
  }
  save_annotations(anns, out_dir / "annotations.csv");
  return written;
}

}  // namespace eigensr
