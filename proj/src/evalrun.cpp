#include "eigensr/evalrun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "eigensr/errors.hpp"
#include "eigensr/parallel.hpp"
#include "eigensr/quality.hpp"
#include "eigensr/resample.hpp"

namespace eigensr {

SrMethod parse_sr_method(const std::string& name) {
  if (name == "pca") return SrMethod::kPca;
  if (name == "bicubic") return SrMethod::kBicubic;
  if (name == "bilinear") return SrMethod::kBilinear;
  throw ArgumentError("unknown method '" + name + "' (pca|bicubic|bilinear)");
}

std::string sr_method_name(SrMethod method) {
  switch (method) {
    case SrMethod::kPca: return "pca";
    case SrMethod::kBicubic: return "bicubic";
    case SrMethod::kBilinear: return "bilinear";
  }
  return "?";
}

std::vector<EvalSample> load_eval_set(const std::filesystem::path& images_dir,
                                      const std::filesystem::path& annotation_csv,
                                      int* skipped) {
  const auto anns = load_annotations(annotation_csv);
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(images_dir)) {
    const auto ext = entry.path().extension();
    if (ext == ".pgm" || ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<EvalSample> set;
  int skip = 0;
  for (const auto& f : files) {
    const std::string id = f.stem().string();
    const auto it = anns.find(id);
    if (it == anns.end()) {
      ++skip;
      continue;
    }
    EvalSample s;
    s.image_id = id;
    const auto us = id.rfind('_');
    if (us == std::string::npos)
      throw FormatError("image id '" + id + "' is not of the form <user>_<index>");
    s.user = id.substr(0, us);
    try {
      s.index = std::stoi(id.substr(us + 1));
    } catch (const std::exception&) {
      throw FormatError("image id '" + id + "' has a non-numeric index");
    }
    s.hr = load_image(f);
    s.ann = it->second;
    set.push_back(std::move(s));
  }
  if (skipped) *skipped = skip;
  return set;
}

Image super_resolve(const Image& lr, SrMethod method, int hr_side, const CoupledDictionary* dict,
                    const HallucinateOptions& opts) {
  switch (method) {
    case SrMethod::kPca:
      if (!dict) throw ArgumentError("super_resolve: pca method requires a dictionary");
      return hallucinate(lr, *dict, opts);
    case SrMethod::kBicubic:
      return upscale(lr, hr_side, KernelKind::kBicubic);
    case SrMethod::kBilinear:
      return upscale(lr, hr_side, KernelKind::kBilinear);
  }
  throw ArgumentError("super_resolve: bad method");
}

Comparator PreparedSet::comparator() const {
  std::map<std::pair<std::string, int>, size_t> lookup;
  for (size_t i = 0; i < samples.size(); ++i)
    lookup[{samples[i].user, samples[i].index}] = i;
  return [this, lookup = std::move(lookup)](const Sample& enroll, const Sample& query) {
    const size_t i = lookup.at({enroll.user, enroll.index});
    const size_t j = lookup.at({query.user, query.index});
    return match_codes(enroll_codes[i], query_codes[j]);
  };
}

PreparedSet prepare_eval(const std::vector<EvalSample>& set, int factor_denominator,
                         SrMethod method, int scenario, const CoupledDictionary* dict,
                         int polar_rows, int polar_cols) {
  if (scenario != 1 && scenario != 2) throw ArgumentError("scenario must be 1 or 2");
  if (set.empty()) throw ArgumentError("prepare_eval: empty evaluation set");

  PreparedSet prep;
  prep.samples.resize(set.size());
  prep.enroll_codes.resize(set.size());
  prep.query_codes.resize(set.size());
  const int hr_side = set.front().hr.width();

  parallel_for(static_cast<int>(set.size()), [&](int i) {
    const EvalSample& s = set[static_cast<size_t>(i)];
    prep.samples[static_cast<size_t>(i)] = Sample{s.user, s.index};
    const Image lr = degrade(s.hr, factor_denominator);
    const Image sr = super_resolve(lr, method, hr_side, dict);
    const auto sr_polar = normalize_polar(sr, s.ann, polar_rows, polar_cols);
    prep.query_codes[static_cast<size_t>(i)] = encode_loggabor(sr_polar);
    if (scenario == 1) {
      const auto hr_polar = normalize_polar(s.hr, s.ann, polar_rows, polar_cols);
      prep.enroll_codes[static_cast<size_t>(i)] = encode_loggabor(hr_polar);
    } else {
      prep.enroll_codes[static_cast<size_t>(i)] = prep.query_codes[static_cast<size_t>(i)];
    }
  });
  return prep;
}

namespace {

Image polar_to_image(const PolarImage& p) {
  return Image(p.cols, p.rows, p.data);
}

}  // namespace

BenchRow run_bench_row(const std::vector<EvalSample>& set, int factor_denominator,
                       SrMethod method, const CoupledDictionary* dict) {
  if (set.empty()) throw ArgumentError("run_bench_row: empty test set");
  BenchRow row;
  row.method = sr_method_name(method);
  row.factor = factor_denominator;
  row.patch_fraction = dict ? dict->patch_fraction : 0.0;
  const int hr_side = set.front().hr.width();

  struct PerImage {
    double psnr_full, ssim_full, psnr_polar, ssim_polar;
  };
  std::vector<PerImage> per(set.size());
  parallel_for(static_cast<int>(set.size()), [&](int i) {
    const EvalSample& s = set[static_cast<size_t>(i)];
    const Image lr = degrade(s.hr, factor_denominator);
    const Image sr = super_resolve(lr, method, hr_side, dict);
    const Image ref_polar = polar_to_image(normalize_polar(s.hr, s.ann));
    const Image sr_polar = polar_to_image(normalize_polar(sr, s.ann));
    per[static_cast<size_t>(i)] = {psnr(s.hr, sr), ssim(s.hr, sr), psnr(ref_polar, sr_polar),
                                   ssim(ref_polar, sr_polar)};
  });

  int n_full = 0, n_polar = 0;
  for (const auto& p : per) {
    if (std::isinf(p.psnr_full) || std::isinf(p.psnr_polar)) ++row.inf_skipped;
    if (!std::isinf(p.psnr_full)) {
      row.psnr_full += p.psnr_full;
      ++n_full;
    }
    if (!std::isinf(p.psnr_polar)) {
      row.psnr_polar += p.psnr_polar;
      ++n_polar;
    }
    row.ssim_full += p.ssim_full;
    row.ssim_polar += p.ssim_polar;
  }
  row.psnr_full = n_full ? row.psnr_full / n_full : std::numeric_limits<double>::infinity();
  row.psnr_polar = n_polar ? row.psnr_polar / n_polar : std::numeric_limits<double>::infinity();
  row.ssim_full /= static_cast<double>(per.size());
  row.ssim_polar /= static_cast<double>(per.size());
  return row;
}

}  // namespace eigensr
