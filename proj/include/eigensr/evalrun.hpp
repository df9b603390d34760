#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eigensr/dictionary.hpp"
#include "eigensr/hallucinate.hpp"
#include "eigensr/image.hpp"
#include "eigensr/iris.hpp"
#include "eigensr/protocol.hpp"

namespace eigensr {

enum class SrMethod { kPca, kBicubic, kBilinear };

SrMethod parse_sr_method(const std::string& name);
std::string sr_method_name(SrMethod method);

/// One labeled high-resolution sample; user and index come from the
/// image id ("<user>_<index>").
struct EvalSample {
  std::string user;
  int index = 0;
  std::string image_id;
  Image hr;
  IrisAnnotation ann;
};

/// Loads every annotated .pgm/.png in the directory. Unannotated files
/// are skipped (their count is returned via skipped when non-null).
std::vector<EvalSample> load_eval_set(const std::filesystem::path& images_dir,
                                      const std::filesystem::path& annotation_csv,
                                      int* skipped = nullptr);

/// Degrade by 1/n then super-resolve back to hr_side.
Image super_resolve(const Image& lr, SrMethod method, int hr_side, const CoupledDictionary* dict,
                    const HallucinateOptions& opts = {});

/// Templates for one protocol run. Scenario 1 enrols on the original
/// HR images, scenario 2 on the super-resolved ones; queries are
/// always super-resolved.
struct PreparedSet {
  std::vector<Sample> samples;
  std::vector<IrisCode> enroll_codes;  // aligned with samples
  std::vector<IrisCode> query_codes;

  Comparator comparator() const;
};

PreparedSet prepare_eval(const std::vector<EvalSample>& set, int factor_denominator,
                         SrMethod method, int scenario, const CoupledDictionary* dict,
                         int polar_rows = 20, int polar_cols = 240);

/// Fidelity means over a test set for one (method, factor) pair.
struct BenchRow {
  std::string method;
  int factor = 0;
  double patch_fraction = 0.0;
  double psnr_full = 0.0;
  double ssim_full = 0.0;
  double psnr_polar = 0.0;
  double ssim_polar = 0.0;
  int inf_skipped = 0;  // infinite PSNR entries excluded from the means
};

BenchRow run_bench_row(const std::vector<EvalSample>& set, int factor_denominator,
                       SrMethod method, const CoupledDictionary* dict);

}  // namespace eigensr
