// eigensr: eigen-patch iris super-resolution toolkit.
//
// Subcommands: dict build, degrade, synth, sr pca|interp, metrics,
// eval verify|identify, bench. All commands are deterministic given
// their flags and seed. Exit codes: 0 success, 1 partial failure,
// 2 invalid arguments.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "eigensr/dictionary.hpp"
#include "eigensr/errors.hpp"
#include "eigensr/evalrun.hpp"
#include "eigensr/hallucinate.hpp"
#include "eigensr/image.hpp"
#include "eigensr/quality.hpp"
#include "eigensr/resample.hpp"
#include "eigensr/synth.hpp"

namespace {

using namespace eigensr;

constexpr const char* kToolVersion = "1.0.0";

// Accepts "1/4" or "0.25".
double parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return std::stod(text);
  const double num = std::stod(text.substr(0, slash));
  const double den = std::stod(text.substr(slash + 1));
  if (den == 0.0) throw ArgumentError("fraction denominator is zero: " + text);
  return num / den;
}

std::string fmt_metric(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_manifest(const std::filesystem::path& dir, const nlohmann::json& flags) {
  nlohmann::json manifest{{"tool", "eigensr"}, {"version", kToolVersion}, {"flags", flags}};
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << "\n";
}

std::vector<Image> load_training_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const auto ext = e.path().extension();
    if (ext == ".pgm" || ext == ".png") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Image> images;
  images.reserve(files.size());
  for (const auto& f : files) images.push_back(load_image(f));
  return images;
}

int cmd_dict_build(const std::string& train_dir, int factor, const std::string& patch,
                   const std::string& overlap, double retention, const std::string& out_path) {
  const auto images = load_training_dir(train_dir);
  if (images.size() < 2) {
    std::cerr << "dict build: need at least 2 training images in " << train_dir << "\n";
    return 2;
  }
  const auto dict = build_dictionary(images, factor, parse_fraction(patch),
                                     parse_fraction(overlap), retention);
  save_dictionary(dict, out_path);
  std::cout << "dictionary: M=" << dict.training_count << " grid=" << dict.lr_layout.grid()
            << "x" << dict.lr_layout.grid() << " lr=" << dict.lr_side << " hr=" << dict.hr_side
            << " -> " << out_path << "\n";
  return 0;
}

int cmd_degrade(const std::string& in_dir, int factor, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(in_dir)) {
    const auto ext = e.path().extension();
    if (ext == ".pgm" || ext == ".png") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "degrade: no images in " << in_dir << "\n";
    std::cout << "0 files written\n";
    return 0;
  }

  int common_side = -1;
  int written = 0;
  int failed = 0;
  for (const auto& f : files) {
    try {
      const Image img = load_image(f);
      if (img.width() != img.height())
        throw ArgumentError("image is not square: " + f.string());
      if (common_side == -1) common_side = img.width();
      if (img.width() != common_side) {
        std::cerr << "degrade: mixed sizes (" << f << " is " << img.width() << ", expected "
                  << common_side << "); aborting\n";
        return 2;
      }
      const Image lr = degrade(img, factor);
      const auto out_name = f.stem().string() + "_lr" + std::to_string(factor) + ".pgm";
      save_pgm(lr, std::filesystem::path(out_dir) / out_name);
      ++written;
    } catch (const IoError& e) {
      std::cerr << "degrade: skipping " << f << ": " << e.what() << "\n";
      ++failed;
    } catch (const FormatError& e) {
      std::cerr << "degrade: skipping " << f << ": " << e.what() << "\n";
      ++failed;
    }
  }
  std::cout << written << " files written\n";
  return failed > 0 ? 1 : 0;
}

int cmd_synth(int count, int images_per, int side, uint64_t seed, const std::string& out_dir) {
  SynthOptions opts;
  opts.identities = count;
  opts.images_per_identity = images_per;
  opts.side = side;
  opts.seed = seed;
  const int n = generate_corpus(opts, out_dir);
  std::cout << n << " images written to " << out_dir << "\n";
  return 0;
}

int cmd_sr_pca(const std::string& dict_path, const std::string& in_path,
               const std::string& out_path, bool no_reproject, double tau, double tol,
               int max_iter) {
  const auto dict = load_dictionary(dict_path);
  const Image lr = load_image(in_path);
  HallucinateOptions opts;
  opts.reproject = !no_reproject;
  opts.reprojection = {tau, tol, max_iter};
  const Image hr = hallucinate(lr, dict, opts);
  save_image(hr, out_path);
  return 0;
}

int cmd_sr_interp(const std::string& method, int factor, int target_side,
                  const std::string& in_path, const std::string& out_path) {
  const Image lr = load_image(in_path);
  const int side = target_side > 0 ? target_side : lr.width() * factor;
  const KernelKind kind =
      method == "bilinear" ? KernelKind::kBilinear : KernelKind::kBicubic;
  save_image(upscale(lr, side, kind), out_path);
  return 0;
}

int cmd_metrics(const std::string& ref_path, const std::string& test_path,
                const std::string& polar_csv) {
  const Image ref = load_image(ref_path);
  const Image test = load_image(test_path);
  Image a = ref, b = test;
  if (!polar_csv.empty()) {
    const auto anns = load_annotations(polar_csv);
    const std::string id = std::filesystem::path(ref_path).stem().string();
    const auto it = anns.find(id);
    if (it == anns.end()) throw ArgumentError("no annotation for image id '" + id + "'");
    const auto pa = normalize_polar(ref, it->second);
    const auto pb = normalize_polar(test, it->second);
    a = Image(pa.cols, pa.rows, pa.data);
    b = Image(pb.cols, pb.rows, pb.data);
  }
  std::cout << fmt_metric(psnr(a, b)) << "," << fmt_metric(ssim(a, b)) << "\n";
  return 0;
}

struct EvalArgs {
  std::string images, ann, dict, method = "pca", out;
  int scenario = 2;
  int factor = 8;
};

PreparedSet prepare_from_args(const EvalArgs& args, std::vector<EvalSample>& set,
                              std::optional<CoupledDictionary>& dict) {
  int skipped = 0;
  set = load_eval_set(args.images, args.ann, &skipped);
  if (skipped > 0)
    std::cerr << "note: " << skipped << " unannotated images skipped\n";
  const SrMethod method = parse_sr_method(args.method);
  if (method == SrMethod::kPca) {
    if (args.dict.empty()) throw ArgumentError("--method pca requires --dict");
    dict = load_dictionary(args.dict);
  }
  return prepare_eval(set, args.factor, method, args.scenario, dict ? &*dict : nullptr);
}

int cmd_eval_verify(const EvalArgs& args) {
  std::filesystem::create_directories(args.out);
  std::vector<EvalSample> set;
  std::optional<CoupledDictionary> dict;
  const PreparedSet prep = prepare_from_args(args, set, dict);

  int skipped_users = 0;
  const ScoreSet scores =
      run_verification(prep.samples, prep.comparator(), ScorePolarity::kDistance, &skipped_users);
  if (skipped_users > 0)
    std::cerr << "note: " << skipped_users << " users lacked a 2nd image for impostor pairs\n";
  const EerResult eer = compute_eer(scores);

  std::ofstream sf(std::filesystem::path(args.out) / "scores.csv");
  sf << "label,score\n";
  for (double s : scores.genuine) sf << "genuine," << fmt_metric(s) << "\n";
  for (double s : scores.impostor) sf << "impostor," << fmt_metric(s) << "\n";

  std::ofstream df(std::filesystem::path(args.out) / "det.csv");
  df << "threshold,far,frr\n";
  for (const auto& p : eer.det_points)
    df << fmt_metric(p.threshold) << "," << fmt_metric(p.far) << "," << fmt_metric(p.frr) << "\n";

  nlohmann::json summary{{"eer", eer.eer},
                         {"threshold", eer.threshold},
                         {"genuine", scores.genuine.size()},
                         {"impostor", scores.impostor.size()}};
  std::ofstream jf(std::filesystem::path(args.out) / "summary.json");
  jf << summary.dump(2) << "\n";
  write_manifest(args.out, {{"command", "eval verify"},
                            {"method", args.method},
                            {"factor", args.factor},
                            {"scenario", args.scenario}});
  std::cout << "eer=" << fmt_metric(eer.eer) << " genuine=" << scores.genuine.size()
            << " impostor=" << scores.impostor.size() << "\n";
  return 0;
}

int cmd_eval_identify(const EvalArgs& args) {
  std::filesystem::create_directories(args.out);
  std::vector<EvalSample> set;
  std::optional<CoupledDictionary> dict;
  const PreparedSet prep = prepare_from_args(args, set, dict);

  const IdentificationResult res =
      run_identification(prep.samples, prep.comparator(), ScorePolarity::kDistance);
  if (res.tie_count > 0)
    std::cerr << "note: " << res.tie_count << " probes had rank ties (broken by user id)\n";

  std::ofstream cf(std::filesystem::path(args.out) / "cmc.csv");
  cf << "rank,accuracy\n";
  for (size_t k = 0; k < res.cmc.size(); ++k)
    cf << (k + 1) << "," << fmt_metric(res.cmc[k]) << "\n";

  nlohmann::json summary{{"top1", res.cmc.front()},
                         {"gallery_size", res.gallery_size},
                         {"probes", res.probe_count}};
  std::ofstream jf(std::filesystem::path(args.out) / "summary.json");
  jf << summary.dump(2) << "\n";
  write_manifest(args.out, {{"command", "eval identify"},
                            {"method", args.method},
                            {"factor", args.factor},
                            {"scenario", args.scenario}});
  std::cout << "top1=" << fmt_metric(res.cmc.front()) << " K=" << res.gallery_size
            << " probes=" << res.probe_count << "\n";
  return 0;
}

int cmd_bench(const std::string& images, const std::string& ann, const std::string& dict_path,
              std::vector<int> factors, const std::string& out_csv) {
  int skipped = 0;
  const auto set = load_eval_set(images, ann, &skipped);
  std::optional<CoupledDictionary> dict;
  if (!dict_path.empty()) dict = load_dictionary(dict_path);

  std::ofstream out(out_csv);
  if (!out) throw IoError("cannot write " + out_csv);
  out << "method,factor,patch,psnr_full,ssim_full,psnr_polar,ssim_polar\n";
  for (int factor : factors) {
    for (const SrMethod method : {SrMethod::kBilinear, SrMethod::kBicubic, SrMethod::kPca}) {
      if (method == SrMethod::kPca) {
        if (!dict) continue;
        if (dict->factor_denominator != factor) {
          std::cerr << "bench: dictionary was built for 1/" << dict->factor_denominator
                    << ", skipping pca at 1/" << factor << "\n";
          continue;
        }
      }
      const BenchRow row = run_bench_row(set, factor, method, dict ? &*dict : nullptr);
      if (row.inf_skipped > 0)
        std::cerr << "note: " << row.inf_skipped << " infinite PSNR entries skipped\n";
      char patch[16];
      std::snprintf(patch, sizeof(patch), "%.6f", row.patch_fraction);
      out << row.method << "," << row.factor << "," << (method == SrMethod::kPca ? patch : "-")
          << "," << fmt_metric(row.psnr_full) << "," << fmt_metric(row.ssim_full) << ","
          << fmt_metric(row.psnr_polar) << "," << fmt_metric(row.ssim_polar) << "\n";
    }
  }
  std::cout << "wrote " << out_csv << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigen-patch iris super-resolution toolkit"};
  app.require_subcommand(1);

  // dict build
  auto* dict_cmd = app.add_subcommand("dict", "Dictionary operations");
  dict_cmd->require_subcommand(1);
  auto* build = dict_cmd->add_subcommand("build", "Build a coupled position-patch dictionary");
  std::string train_dir, patch = "1/4", overlap = "1/3", dict_out;
  int factor = 8;
  double retention = 0.99;
  build->add_option("--train", train_dir, "Directory of HR training images")->required();
  build->add_option("--factor", factor, "Downsampling denominator n (scale 1/n)")->required();
  build->add_option("--patch", patch, "Patch fraction of the LR side (e.g. 1/4)");
  build->add_option("--overlap", overlap, "Patch overlap fraction (default 1/3)");
  build->add_option("--retention", retention, "PCA variance retention (default 0.99)");
  build->add_option("--out", dict_out, "Output dictionary file")->required();

  // degrade
  auto* deg = app.add_subcommand("degrade", "Downsample a directory of images by 1/n");
  std::string deg_in, deg_out;
  int deg_factor = 8;
  deg->add_option("--in", deg_in, "Input directory")->required();
  deg->add_option("--factor", deg_factor, "Denominator n")->required();
  deg->add_option("--out", deg_out, "Output directory")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a deterministic synthetic iris corpus");
  int synth_count = 8, synth_per = 3, synth_side = 231;
  uint64_t synth_seed = 7;
  std::string synth_out;
  synth->add_option("--count", synth_count, "Number of identities");
  synth->add_option("--images-per", synth_per, "Images per identity (>= 2)");
  synth->add_option("--side", synth_side, "Image side in pixels (odd, >= 63)");
  synth->add_option("--seed", synth_seed, "RNG seed");
  synth->add_option("--out", synth_out, "Output directory")->required();

  // sr pca / sr interp
  auto* sr = app.add_subcommand("sr", "Super-resolve a single LR image");
  sr->require_subcommand(1);
  auto* sr_pca = sr->add_subcommand("pca", "Eigen-patch hallucination");
  std::string pca_dict, pca_in, pca_out;
  bool no_reproject = false;
  double tau = 0.02, tol = 1e-5;
  int max_iter = 300;
  sr_pca->add_option("--dict", pca_dict, "Dictionary file")->required();
  sr_pca->add_option("--in", pca_in, "LR input image")->required();
  sr_pca->add_option("--out", pca_out, "HR output image")->required();
  sr_pca->add_flag("--no-reproject", no_reproject, "Skip the reprojection pass");
  sr_pca->add_option("--tau", tau, "Reprojection step size (default 0.02)");
  sr_pca->add_option("--tol", tol, "Reprojection stop threshold (default 1e-5)");
  sr_pca->add_option("--max-iter", max_iter, "Reprojection iteration cap (default 300)");

  auto* sr_interp = sr->add_subcommand("interp", "Interpolation baseline upscaling");
  std::string interp_method = "bicubic", interp_in, interp_out;
  int interp_factor = 8, interp_target = 0;
  sr_interp->add_option("--method", interp_method, "bilinear|bicubic")
      ->check(CLI::IsMember({"bilinear", "bicubic"}));
  sr_interp->add_option("--factor", interp_factor, "Denominator n")->required();
  sr_interp->add_option("--target-side", interp_target,
                        "Output side (default: input side times n)");
  sr_interp->add_option("--in", interp_in, "LR input image")->required();
  sr_interp->add_option("--out", interp_out, "Output image")->required();

  // metrics
  auto* metrics = app.add_subcommand("metrics", "PSNR/SSIM between two images");
  std::string m_ref, m_test, m_polar;
  metrics->add_option("--ref", m_ref, "Reference image")->required();
  metrics->add_option("--test", m_test, "Test image")->required();
  metrics->add_option("--polar", m_polar,
                      "Annotation CSV: compute metrics on the unwrapped polar arrays");

  // eval verify / identify
  auto* eval = app.add_subcommand("eval", "Biometric protocol evaluation");
  eval->require_subcommand(1);
  EvalArgs vargs, iargs;
  auto add_eval_opts = [](CLI::App* cmd, EvalArgs& args) {
    cmd->add_option("--images", args.images, "Directory of HR images")->required();
    cmd->add_option("--ann", args.ann, "Annotation CSV")->required();
    cmd->add_option("--dict", args.dict, "Dictionary file (required for --method pca)");
    cmd->add_option("--scenario", args.scenario, "1 = HR enrolment, 2 = SR enrolment")
        ->check(CLI::IsMember({1, 2}));
    cmd->add_option("--method", args.method, "pca|bicubic|bilinear");
    cmd->add_option("--factor", args.factor, "Denominator n")->required();
    cmd->add_option("--out", args.out, "Output directory")->required();
  };
  auto* verify = eval->add_subcommand("verify", "Verification (EER/DET)");
  add_eval_opts(verify, vargs);
  auto* identify = eval->add_subcommand("identify", "Identification (Top-1/CMC)");
  add_eval_opts(identify, iargs);

  // bench
  auto* bench = app.add_subcommand("bench", "Fidelity benchmark over a test set");
  std::string b_images, b_ann, b_dict, b_out;
  std::vector<int> b_factors{8};
  bench->add_option("--images", b_images, "Directory of HR test images")->required();
  bench->add_option("--ann", b_ann, "Annotation CSV")->required();
  bench->add_option("--dict", b_dict, "Dictionary file (enables the pca rows)");
  bench->add_option("--factor", b_factors, "Denominator(s) n");
  bench->add_option("--out", b_out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build->parsed())
      return cmd_dict_build(train_dir, factor, patch, overlap, retention, dict_out);
    if (deg->parsed()) return cmd_degrade(deg_in, deg_factor, deg_out);
    if (synth->parsed())
      return cmd_synth(synth_count, synth_per, synth_side, synth_seed, synth_out);
    if (sr_pca->parsed())
      return cmd_sr_pca(pca_dict, pca_in, pca_out, no_reproject, tau, tol, max_iter);
    if (sr_interp->parsed())
      return cmd_sr_interp(interp_method, interp_factor, interp_target, interp_in, interp_out);
    if (metrics->parsed()) return cmd_metrics(m_ref, m_test, m_polar);
    if (verify->parsed()) return cmd_eval_verify(vargs);
    if (identify->parsed()) return cmd_eval_identify(iargs);
    if (bench->parsed()) return cmd_bench(b_images, b_ann, b_dict, b_factors, b_out);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
