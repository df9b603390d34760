#pragma once

#include <Eigen/Dense>

namespace eigensr {

/// PCA of a centered patch stack via the M x M Gram matrix. Columns of
/// `eigenvectors` are Gram eigenvectors for the retained (positive)
/// eigenvalues; `eigen_patches` are the corresponding unit-norm pixel
/// space basis vectors.
struct EigenModel {
  int retained_count = 0;
  Eigen::VectorXd eigenvalues;      // length r, descending, > 0
  Eigen::MatrixXd eigenvectors;     // M x r, orthonormal columns
  Eigen::MatrixXd eigen_patches;    // d x r, unit-norm columns
  double total_variance = 0.0;      // sum of positive eigenvalues pre-truncation

  bool operator==(const EigenModel& o) const {
    return retained_count == o.retained_count && total_variance == o.total_variance &&
           eigenvalues == o.eigenvalues && eigenvectors == o.eigenvectors &&
           eigen_patches == o.eigen_patches;
  }
};

/// Centers `stack` by `mean`, eigendecomposes the Gram matrix, drops
/// eigenvalues below max(M, d) * eps * lambda_max, and keeps the
/// minimal prefix reaching `variance_retention` of the positive
/// spectrum. Eigenvector signs are fixed so the first component of
/// largest magnitude is positive.
EigenModel fit_eigen(const Eigen::MatrixXd& stack, const Eigen::VectorXd& mean,
                     double variance_retention);

/// Reconstruction weights for an input patch: w = E^T (x - mean),
/// c = V diag(lambda)^(-1/2) w. Length-M; zero when nothing retained.
Eigen::VectorXd project_weights(const EigenModel& model, const Eigen::VectorXd& mean,
                                const Eigen::VectorXd& x);

/// y = hr_stack * c + hr_mean. No clamping; callers clamp after stitching.
Eigen::VectorXd reconstruct_hr_patch(const Eigen::VectorXd& weights,
                                     const Eigen::MatrixXd& hr_stack,
                                     const Eigen::VectorXd& hr_mean);

}  // namespace eigensr
