#include "eigensr/iris.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>

#include "eigensr/errors.hpp"

namespace eigensr {

std::map<std::string, IrisAnnotation> load_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::map<std::string, IrisAnnotation> anns;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 5 && fields.size() != 7)
      throw FormatError("annotation line needs 5 or 7 fields: " + line);
    try {
      IrisAnnotation ann;
      ann.image_id = fields[0];
      ann.center_x = std::stod(fields[1]);
      ann.center_y = std::stod(fields[2]);
      ann.pupil_radius = std::stod(fields[3]);
      ann.iris_radius = std::stod(fields.back());
      if (ann.pupil_radius <= 0.0 || ann.iris_radius <= ann.pupil_radius)
        throw FormatError("invalid radii in annotation: " + line);
      anns[ann.image_id] = ann;
    } catch (const std::invalid_argument&) {
      throw FormatError("non-numeric annotation field: " + line);
    }
  }
  return anns;
}

void save_annotations(const std::map<std::string, IrisAnnotation>& anns,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "# image_id,px,py,pr,ix,iy,ir\n";
  for (const auto& [id, a] : anns) {
    out << id << "," << a.center_x << "," << a.center_y << "," << a.pupil_radius << ","
        << a.center_x << "," << a.center_y << "," << a.iris_radius << "\n";
  }
}

IrisAnnotation scale_annotation(const IrisAnnotation& ann, double factor) {
  IrisAnnotation s = ann;
  s.center_x *= factor;
  s.center_y *= factor;
  s.pupil_radius *= factor;
  s.iris_radius *= factor;
  return s;
}

PolarImage normalize_polar(const Image& img, const IrisAnnotation& ann, int rows, int cols) {
  if (rows < 1 || cols < 1) throw ArgumentError("normalize_polar: bad grid");
  if (ann.center_x - ann.iris_radius < -0.5 || ann.center_x + ann.iris_radius > img.width() - 0.5 ||
      ann.center_y - ann.iris_radius < -0.5 || ann.center_y + ann.iris_radius > img.height() - 0.5)
    throw ArgumentError("normalize_polar: iris circle out of image bounds");

  PolarImage polar;
  polar.rows = rows;
  polar.cols = cols;
  polar.data.resize(static_cast<size_t>(rows) * cols);
  for (int c = 0; c < cols; ++c) {
    const double theta = 2.0 * std::numbers::pi * c / cols;
    const double dx = std::cos(theta);
    const double dy = std::sin(theta);
    for (int r = 0; r < rows; ++r) {
      const double t = static_cast<double>(r + 1) / rows;  // (0, 1]
      const double radius = (1.0 - t) * ann.pupil_radius + t * ann.iris_radius;
      const double x = ann.center_x + radius * dx;
      const double y = ann.center_y + radius * dy;
      polar.at(r, c) = img.sample_bilinear(x, y);
    }
  }
  return polar;
}

namespace {

// Naive length-N DFT; the angular resolution (240) keeps this cheap.
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in, bool inverse) {
  const size_t n = in.size();
  std::vector<std::complex<double>> out(n);
  const double sign = inverse ? 1.0 : -1.0;
  for (size_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (size_t j = 0; j < n; ++j) {
      const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k * j % n) / static_cast<double>(n);
      acc += in[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = inverse ? acc / static_cast<double>(n) : acc;
  }
  return out;
}

}  // namespace

IrisCode encode_loggabor(const PolarImage& polar, double wavelength, double sigma_over_f,
                         double amp_eps) {
  if (polar.cols < 4 * wavelength)
    throw ArgumentError("encode_loggabor: angular resolution too small for wavelength");
  const int n = polar.cols;
  const double f0 = 1.0 / wavelength;
  const double log_sigma = std::log(sigma_over_f);

  // Transfer function over positive frequencies; DC and negative
  // frequencies are zeroed, yielding a complex analytic response.
  std::vector<double> transfer(static_cast<size_t>(n), 0.0);
  for (int k = 1; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) / n;
    const double lr = std::log(f / f0);
    transfer[static_cast<size_t>(k)] = std::exp(-(lr * lr) / (2.0 * log_sigma * log_sigma));
  }

  IrisCode code;
  code.rows = polar.rows;
  code.cols = polar.cols;
  code.bits.resize(static_cast<size_t>(polar.rows) * polar.cols * 2);
  code.mask.resize(static_cast<size_t>(polar.rows) * polar.cols);

  std::vector<std::complex<double>> row(static_cast<size_t>(n));
  for (int r = 0; r < polar.rows; ++r) {
    for (int c = 0; c < n; ++c) row[static_cast<size_t>(c)] = {polar.at(r, c), 0.0};
    auto spectrum = dft(row, false);
    for (int k = 0; k < n; ++k) spectrum[static_cast<size_t>(k)] *= transfer[static_cast<size_t>(k)];
    const auto response = dft(spectrum, true);
    for (int c = 0; c < n; ++c) {
      const auto& z = response[static_cast<size_t>(c)];
      const size_t cell = static_cast<size_t>(r) * n + c;
      code.bits[2 * cell] = z.real() >= 0.0 ? 1 : 0;
      code.bits[2 * cell + 1] = z.imag() >= 0.0 ? 1 : 0;
      code.mask[cell] = std::abs(z) >= amp_eps ? 1 : 0;
    }
  }
  return code;
}

double match_codes(const IrisCode& a, const IrisCode& b, int max_shift) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw ArgumentError("match_codes: dimension mismatch");
  const int rows = a.rows;
  const int cols = a.cols;
  bool any_valid = false;
  double best = 1.0;
  for (int s = -max_shift; s <= max_shift; ++s) {
    long diff = 0;
    long valid = 0;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const int cb = ((c + s) % cols + cols) % cols;
        const size_t ia = static_cast<size_t>(r) * cols + c;
        const size_t ib = static_cast<size_t>(r) * cols + cb;
        if (!a.mask[ia] || !b.mask[ib]) continue;
        ++valid;
        diff += (a.bits[2 * ia] != b.bits[2 * ib]) + (a.bits[2 * ia + 1] != b.bits[2 * ib + 1]);
      }
    }
    if (valid == 0) continue;
    any_valid = true;
    const double hd = static_cast<double>(diff) / (2.0 * static_cast<double>(valid));
    if (hd < best) best = hd;
  }
  if (!any_valid)
    throw UndefinedScoreError("match_codes: no jointly valid cells at any shift");
  return best;
}

}  // namespace eigensr
