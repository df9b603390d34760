#include "eigensr/eigenmodel.hpp"

#include <cmath>
#include <limits>

#include "eigensr/errors.hpp"

namespace eigensr {

EigenModel fit_eigen(const Eigen::MatrixXd& stack, const Eigen::VectorXd& mean,
                     double variance_retention) {
  const auto d = stack.rows();
  const auto m = stack.cols();
  if (m < 2) throw ArgumentError("fit_eigen: need at least 2 samples");
  if (mean.size() != d) throw ArgumentError("fit_eigen: mean length mismatch");
  if (!stack.allFinite() || !mean.allFinite())
    throw ArgumentError("fit_eigen: non-finite input");

  // Center twice: the second pass removes the rounding residue of the
  // mean so that identical columns give an exactly zero matrix and the
  // all-ones vector spans the Gram null space.
  Eigen::MatrixXd centered = stack.colwise() - mean;
  centered = centered.colwise() - centered.rowwise().mean().eval();
  const Eigen::MatrixXd gram = centered.transpose() * centered;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success)
    throw ArgumentError("fit_eigen: eigendecomposition failed");
  // Eigen returns ascending order; flip to descending.
  const Eigen::VectorXd evals = solver.eigenvalues().reverse();
  Eigen::MatrixXd evecs = solver.eigenvectors().rowwise().reverse();

  const double lambda_max = std::max(evals.size() > 0 ? evals(0) : 0.0, 0.0);
  const double eps_eig = static_cast<double>(std::max(m, d)) *
                         std::numeric_limits<double>::epsilon() * lambda_max;

  EigenModel model;
  int positive = 0;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (evals(i) > eps_eig && evals(i) > 0.0) {
      model.total_variance += evals(i);
      ++positive;
    }
  }
  if (positive == 0) {
    model.retained_count = 0;
    model.eigenvalues.resize(0);
    model.eigenvectors.resize(m, 0);
    model.eigen_patches.resize(d, 0);
    return model;
  }

  int r = 0;
  double captured = 0.0;
  for (; r < positive; ) {
    captured += evals(r);
    ++r;
    if (captured >= variance_retention * model.total_variance) break;
  }

  model.retained_count = r;
  model.eigenvalues = evals.head(r);
  model.eigenvectors = evecs.leftCols(r);

  // Deterministic sign: largest-magnitude component (first on ties) positive.
  for (int j = 0; j < r; ++j) {
    Eigen::Index imax = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = std::abs(model.eigenvectors(i, j));
      if (a > best + 1e-15) {
        best = a;
        imax = i;
      }
    }
    if (model.eigenvectors(imax, j) < 0.0) model.eigenvectors.col(j) *= -1.0;
  }

  model.eigen_patches =
      centered * model.eigenvectors *
      model.eigenvalues.array().sqrt().inverse().matrix().asDiagonal();
  return model;
}

Eigen::VectorXd project_weights(const EigenModel& model, const Eigen::VectorXd& mean,
                                const Eigen::VectorXd& x) {
  if (x.size() != mean.size() || (model.retained_count > 0 && model.eigen_patches.rows() != x.size()))
    throw ArgumentError("project_weights: dimension mismatch");
  const auto m = model.eigenvectors.rows();
  if (model.retained_count == 0) return Eigen::VectorXd::Zero(m);
  const Eigen::VectorXd w = model.eigen_patches.transpose() * (x - mean);
  return model.eigenvectors *
         (model.eigenvalues.array().sqrt().inverse() * w.array()).matrix();
}

Eigen::VectorXd reconstruct_hr_patch(const Eigen::VectorXd& weights,
                                     const Eigen::MatrixXd& hr_stack,
                                     const Eigen::VectorXd& hr_mean) {
  if (weights.size() != hr_stack.cols() || hr_mean.size() != hr_stack.rows())
    throw ArgumentError("reconstruct_hr_patch: dimension mismatch");
  return hr_stack * weights + hr_mean;
}

}  // namespace eigensr
