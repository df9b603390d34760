#include "eigensr/dictionary.hpp"

#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "eigensr/errors.hpp"
#include "eigensr/parallel.hpp"
#include "eigensr/resample.hpp"

namespace eigensr {

namespace {

Eigen::VectorXd to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

CoupledDictionary build_dictionary(const std::vector<Image>& hr_images, int factor_denominator,
                                   double patch_fraction, double overlap_fraction,
                                   double variance_retention) {
  if (hr_images.size() < 2)
    throw ArgumentError("build_dictionary: need at least 2 training images");
  const int hr_side = hr_images.front().width();
  for (const auto& img : hr_images) {
    if (img.width() != hr_side || img.height() != hr_side)
      throw ArgumentError("build_dictionary: training images must be square and equal-sized");
  }
  if (factor_denominator < 1) throw ArgumentError("build_dictionary: factor must be >= 1");

  CoupledDictionary dict;
  dict.factor_denominator = factor_denominator;
  dict.hr_side = hr_side;
  dict.lr_side = target_size(hr_side, factor_denominator);
  dict.patch_fraction = patch_fraction;
  dict.overlap_fraction = overlap_fraction;
  dict.variance_retention = variance_retention;
  dict.training_count = static_cast<int>(hr_images.size());

  // The grid lives on the LR input; HR anchors are its scaled image.
  dict.lr_layout = compute_layout(dict.lr_side, patch_fraction, overlap_fraction);
  dict.hr_layout = map_layout(dict.lr_layout, hr_side);

  const int m = dict.training_count;
  const int n = dict.lr_layout.patch_count();
  const int d_l = dict.lr_layout.patch_pixels();
  const int d_h = dict.hr_layout.patch_pixels();

  std::vector<std::vector<std::vector<double>>> lr_patches(static_cast<size_t>(m));
  std::vector<std::vector<std::vector<double>>> hr_patches(static_cast<size_t>(m));
  parallel_for(m, [&](int j) {
    const Image lr = degrade(hr_images[static_cast<size_t>(j)], factor_denominator);
    lr_patches[static_cast<size_t>(j)] = extract_patches(lr, dict.lr_layout);
    hr_patches[static_cast<size_t>(j)] = extract_patches(hr_images[static_cast<size_t>(j)], dict.hr_layout);
  });

  dict.entries.resize(static_cast<size_t>(n));
  parallel_for(n, [&](int i) {
    DictionaryEntry& e = dict.entries[static_cast<size_t>(i)];
    e.lr_stack.resize(d_l, m);
    e.hr_stack.resize(d_h, m);
    for (int j = 0; j < m; ++j) {
      e.lr_stack.col(j) = to_vec(lr_patches[static_cast<size_t>(j)][static_cast<size_t>(i)]);
      e.hr_stack.col(j) = to_vec(hr_patches[static_cast<size_t>(j)][static_cast<size_t>(i)]);
    }
    e.lr_mean = e.lr_stack.rowwise().mean();
    e.hr_mean = e.hr_stack.rowwise().mean();
    e.eigen = fit_eigen(e.lr_stack, e.lr_mean, variance_retention);
  });
  return dict;
}

namespace {

constexpr char kMagic[4] = {'E', 'P', 'S', 'R'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ostream& out, uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }
void write_u64(std::ostream& out, uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); }
void write_f64(std::ostream& out, double v) { out.write(reinterpret_cast<const char*>(&v), 8); }

uint32_t read_u32(std::istream& in) {
  uint32_t v;
  in.read(reinterpret_cast<char*>(&v), 4);
  if (!in) throw IoError("truncated dictionary file");
  return v;
}
uint64_t read_u64(std::istream& in) {
  uint64_t v;
  in.read(reinterpret_cast<char*>(&v), 8);
  if (!in) throw IoError("truncated dictionary file");
  return v;
}
double read_f64(std::istream& in) {
  double v;
  in.read(reinterpret_cast<char*>(&v), 8);
  if (!in) throw IoError("truncated dictionary file");
  return v;
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  write_u64(out, static_cast<uint64_t>(m.rows()));
  write_u64(out, static_cast<uint64_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) write_f64(out, m(r, c));
}

Eigen::MatrixXd read_matrix(std::istream& in) {
  const auto rows = static_cast<Eigen::Index>(read_u64(in));
  const auto cols = static_cast<Eigen::Index>(read_u64(in));
  if (rows < 0 || cols < 0 || rows * cols > (1LL << 32))
    throw FormatError("implausible matrix dimensions in dictionary file");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = read_f64(in);
  return m;
}

void write_layout(std::ostream& out, const PatchLayout& l) {
  write_u32(out, static_cast<uint32_t>(l.image_side));
  write_u32(out, static_cast<uint32_t>(l.patch_side));
  write_u32(out, static_cast<uint32_t>(l.step));
  write_u64(out, l.axis_anchors.size());
  for (int a : l.axis_anchors) write_u32(out, static_cast<uint32_t>(a));
}

PatchLayout read_layout(std::istream& in) {
  PatchLayout l;
  l.image_side = static_cast<int>(read_u32(in));
  l.patch_side = static_cast<int>(read_u32(in));
  l.step = static_cast<int>(read_u32(in));
  const auto count = read_u64(in);
  l.axis_anchors.resize(count);
  for (auto& a : l.axis_anchors) a = static_cast<int>(read_u32(in));
  return l;
}

}  // namespace

void save_dictionary(const CoupledDictionary& dict, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kMagic, 4);
  write_u32(out, kVersion);
  write_u32(out, static_cast<uint32_t>(dict.factor_denominator));
  write_u32(out, static_cast<uint32_t>(dict.hr_side));
  write_u32(out, static_cast<uint32_t>(dict.lr_side));
  write_f64(out, dict.patch_fraction);
  write_f64(out, dict.overlap_fraction);
  write_f64(out, dict.variance_retention);
  write_u32(out, static_cast<uint32_t>(dict.training_count));
  write_layout(out, dict.lr_layout);
  write_layout(out, dict.hr_layout);
  write_u64(out, dict.entries.size());
  for (const auto& e : dict.entries) {
    write_matrix(out, e.lr_stack);
    write_matrix(out, e.hr_stack);
    write_matrix(out, e.lr_mean);
    write_matrix(out, e.hr_mean);
    write_u32(out, static_cast<uint32_t>(e.eigen.retained_count));
    write_f64(out, e.eigen.total_variance);
    write_matrix(out, e.eigen.eigenvalues);
    write_matrix(out, e.eigen.eigenvectors);
    write_matrix(out, e.eigen.eigen_patches);
  }
  if (!out) throw IoError("write failed: " + path.string());

  nlohmann::json manifest{
      {"format", "EPSR"},
      {"version", kVersion},
      {"factor", dict.factor_denominator},
      {"hr_side", dict.hr_side},
      {"lr_side", dict.lr_side},
      {"patch_fraction", dict.patch_fraction},
      {"overlap_fraction", dict.overlap_fraction},
      {"variance_retention", dict.variance_retention},
      {"training_count", dict.training_count},
      {"grid", dict.lr_layout.grid()},
      {"lr_patch_side", dict.lr_layout.patch_side},
      {"hr_patch_side", dict.hr_layout.patch_side},
  };
  std::ofstream side(path.string() + ".json");
  if (!side) throw IoError("cannot write manifest for " + path.string());
  side << manifest.dump(2) << "\n";
}

CoupledDictionary load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in) throw IoError("truncated dictionary file: " + path.string());
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("bad dictionary magic in " + path.string());
  const uint32_t version = read_u32(in);
  if (version != kVersion)
    throw FormatError("unsupported dictionary version " + std::to_string(version));

  CoupledDictionary dict;
  dict.factor_denominator = static_cast<int>(read_u32(in));
  dict.hr_side = static_cast<int>(read_u32(in));
  dict.lr_side = static_cast<int>(read_u32(in));
  dict.patch_fraction = read_f64(in);
  dict.overlap_fraction = read_f64(in);
  dict.variance_retention = read_f64(in);
  dict.training_count = static_cast<int>(read_u32(in));
  dict.lr_layout = read_layout(in);
  dict.hr_layout = read_layout(in);
  const auto count = read_u64(in);
  dict.entries.resize(count);
  for (auto& e : dict.entries) {
    e.lr_stack = read_matrix(in);
    e.hr_stack = read_matrix(in);
    e.lr_mean = read_matrix(in).col(0);
    e.hr_mean = read_matrix(in).col(0);
    e.eigen.retained_count = static_cast<int>(read_u32(in));
    e.eigen.total_variance = read_f64(in);
    e.eigen.eigenvalues = read_matrix(in).col(0);
    e.eigen.eigenvectors = read_matrix(in);
    e.eigen.eigen_patches = read_matrix(in);
  }
  return dict;
}

}  // namespace eigensr
