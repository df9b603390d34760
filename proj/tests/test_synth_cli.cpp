#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "eigensr/evalrun.hpp"
#include "eigensr/image.hpp"
#include "eigensr/iris.hpp"
#include "eigensr/synth.hpp"

using namespace eigensr;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* name) {
  const auto dir = fs::temp_directory_path() / "eigensr_synth_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + EIGENSR_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

SynthOptions small_opts() {
  SynthOptions opts;
  opts.identities = 4;
  opts.images_per_identity = 3;
  opts.side = 101;
  opts.seed = 7;
  return opts;
}

}  // namespace

TEST_CASE("synth_iris is deterministic and bounded") {
  const SynthOptions opts = small_opts();
  const Image a = synth_iris(opts, 1, 0);
  const Image b = synth_iris(opts, 1, 0);
  CHECK(a == b);
  for (double v : a.data()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  // Different identities and different variants actually differ.
  CHECK_FALSE(synth_iris(opts, 2, 0) == a);
  CHECK_FALSE(synth_iris(opts, 1, 1) == a);
}

TEST_CASE("synth annotations keep circles inside the image") {
  const SynthOptions opts = small_opts();
  for (int id = 0; id < opts.identities; ++id) {
    const IrisAnnotation ann = synth_annotation(opts, id, 0);
    CHECK(ann.pupil_radius > 0.0);
    CHECK(ann.iris_radius > ann.pupil_radius);
    CHECK(ann.center_x - ann.iris_radius >= 0.0);
    CHECK(ann.center_x + ann.iris_radius <= opts.side - 1);
    CHECK(ann.center_y - ann.iris_radius >= 0.0);
    CHECK(ann.center_y + ann.iris_radius <= opts.side - 1);
    // Variants of one identity share the segmentation geometry.
    const IrisAnnotation v1 = synth_annotation(opts, id, 1);
    CHECK(v1.center_x == ann.center_x);
    CHECK(v1.pupil_radius == ann.pupil_radius);
    CHECK(v1.iris_radius == ann.iris_radius);
  }
}

TEST_CASE("generate_corpus writes byte-identical files across runs") {
  const SynthOptions opts = small_opts();
  const auto dir_a = temp_dir("corpus_a");
  const auto dir_b = temp_dir("corpus_b");
  CHECK(generate_corpus(opts, dir_a) == 12);
  CHECK(generate_corpus(opts, dir_b) == 12);

  std::vector<fs::path> names;
  for (const auto& e : fs::directory_iterator(dir_a)) names.push_back(e.path().filename());
  CHECK(names.size() == 13);  // 12 images + annotations.csv
  for (const auto& name : names) {
    CHECK(fs::exists(dir_b / name));
    CHECK(read_file(dir_a / name) == read_file(dir_b / name));
  }
}

TEST_CASE("corpus separates identities under the iris comparator") {
  const SynthOptions opts = small_opts();
  std::vector<std::vector<IrisCode>> codes(static_cast<size_t>(opts.identities));
  for (int id = 0; id < opts.identities; ++id)
    for (int v = 0; v < opts.images_per_identity; ++v) {
      const Image img = synth_iris(opts, id, v);
      const IrisAnnotation ann = synth_annotation(opts, id, v);
      codes[static_cast<size_t>(id)].push_back(encode_loggabor(normalize_polar(img, ann)));
    }

  double intra_sum = 0.0, inter_sum = 0.0;
  int intra_n = 0, inter_n = 0;
  for (int id = 0; id < opts.identities; ++id)
    for (size_t i = 0; i < codes[id].size(); ++i)
      for (size_t j = i + 1; j < codes[id].size(); ++j) {
        intra_sum += match_codes(codes[id][i], codes[id][j]);
        ++intra_n;
      }
  for (int a = 0; a < opts.identities; ++a)
    for (int b = a + 1; b < opts.identities; ++b) {
      inter_sum += match_codes(codes[a][0], codes[b][0]);
      ++inter_n;
    }
  const double intra = intra_sum / intra_n;
  const double inter = inter_sum / inter_n;
  CHECK(intra < inter);
  CHECK(inter - intra > 0.05);
}

TEST_CASE("load_eval_set parses users and skips unannotated files") {
  const SynthOptions opts = small_opts();
  const auto dir = temp_dir("evalset");
  generate_corpus(opts, dir);
  // An extra image with no annotation entry must be skipped.
  save_pgm(Image(opts.side, opts.side, 0.5), dir / "stray_01.pgm");

  int skipped = -1;
  const auto set = load_eval_set(dir, dir / "annotations.csv", &skipped);
  CHECK(set.size() == 12);
  CHECK(skipped == 1);
  for (const auto& s : set) {
    CHECK(!s.user.empty());
    CHECK(s.index >= 1);
    CHECK(s.hr.width() == opts.side);
    CHECK(s.image_id == s.user + "_" + (s.index < 10 ? "0" : "") + std::to_string(s.index));
  }
}

TEST_CASE("cli: synth, degrade, sr interp, metrics round trip") {
  const auto root = temp_dir("cli");
  const auto corpus = root / "corpus";
  REQUIRE(run_cli("synth --count 3 --images-per 2 --side 101 --seed 7 --out " +
                  corpus.string()) == 0);
  CHECK(fs::exists(corpus / "annotations.csv"));

  const auto lr_dir = root / "lr";
  REQUIRE(run_cli("degrade --in " + corpus.string() + " --factor 4 --out " + lr_dir.string()) ==
          0);
  const auto lr_file = lr_dir / "id000_01_lr4.pgm";
  REQUIRE(fs::exists(lr_file));
  CHECK(load_image(lr_file).width() == 25);

  const auto up = root / "up.pgm";
  REQUIRE(run_cli("sr interp --method bicubic --factor 4 --target-side 101 --in " +
                  lr_file.string() + " --out " + up.string()) == 0);
  CHECK(load_image(up).width() == 101);

  CHECK(run_cli("metrics --ref " + (corpus / "id000_01.pgm").string() + " --test " +
                up.string()) == 0);
}

TEST_CASE("cli: dictionary build and pca super-resolution") {
  const auto root = temp_dir("cli_dict");
  const auto corpus = root / "corpus";
  REQUIRE(run_cli("synth --count 3 --images-per 2 --side 101 --seed 11 --out " +
                  corpus.string()) == 0);

  const auto dict = root / "dict.epsr";
  REQUIRE(run_cli("dict build --train " + corpus.string() + " --factor 4 --patch 1/4 --out " +
                  dict.string()) == 0);
  REQUIRE(fs::exists(dict));

  const auto lr_dir = root / "lr";
  REQUIRE(run_cli("degrade --in " + corpus.string() + " --factor 4 --out " + lr_dir.string()) ==
          0);
  const auto sr = root / "sr.pgm";
  REQUIRE(run_cli("sr pca --dict " + dict.string() + " --in " +
                  (lr_dir / "id000_01_lr4.pgm").string() + " --out " + sr.string() +
                  " --max-iter 20") == 0);
  CHECK(load_image(sr).width() == 101);
}

TEST_CASE("cli: invalid arguments exit with code 2") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("nonsense") == 2);
  CHECK(run_cli("degrade --factor 4 --out /tmp/x") == 2);  // missing --in
  CHECK(run_cli("sr interp --method nearest --factor 4 --in a --out b") == 2);
  const auto root = temp_dir("cli_bad");
  CHECK(run_cli("metrics --ref " + (root / "missing.pgm").string() + " --test " +
                (root / "missing.pgm").string()) == 1);
}
