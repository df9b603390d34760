#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "eigensr/image.hpp"
#include "eigensr/iris.hpp"

namespace eigensr {

/// Deterministic procedural iris-like corpus: dark pupil disc, radially
/// and angularly banded iris texture with per-identity random
/// frequency/phase mixtures, light sclera ring. Variants of one
/// identity differ by a small rotation and contrast jitter.
struct SynthOptions {
  int identities = 8;
  int images_per_identity = 3;
  int side = 231;       // odd, >= 63
  uint64_t seed = 7;
};

Image synth_iris(const SynthOptions& opts, int identity, int variant);

/// Annotation for an identity (shared by its variants).
IrisAnnotation synth_annotation(const SynthOptions& opts, int identity, int variant);

/// Writes id###_##.pgm files plus annotations.csv into out_dir.
/// Returns the number of images written.
int generate_corpus(const SynthOptions& opts, const std::filesystem::path& out_dir);

}  // namespace eigensr
