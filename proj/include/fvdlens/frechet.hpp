// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace fvdlens {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultClampEps = 1e-10;
inline constexpr double kNegativeDistanceTolerance = 1e-6;

/// N feature rows of dimension D. Rows are videos (FVD) or frames (FID).
struct FeatureMatrix {
  Matrix data;                    // N x D
  std::vector<std::string> ids;   // empty, or one unique id per row
  std::string extractor_tag;

  Eigen::Index rows() const { return data.rows(); }
  Eigen::Index dim() const { return data.cols(); }
  bool has_ids() const { return !ids.empty(); }

  /// Throws InvalidArgument / NonFiniteInput / IdCountMismatch when the
  /// matrix is empty, has non-finite entries, or ids are malformed.
  void validate() const;
};

struct GaussianStats {
  Vector mean;
  Matrix cov;
  Eigen::Index n_samples = 0;

  Eigen::Index dim() const { return mean.size(); }
};

struct FrechetResult {
  double value = 0.0;
  double mean_term = 0.0;
  double trace_term = 0.0;
  bool clamped = false;
};

/// Mean and covariance with the 1/N normalizer; covariance symmetrized.
GaussianStats fit_gaussian(const FeatureMatrix& features);

/// Symmetric PSD square root by eigendecomposition. Eigenvalues below
/// clamp_eps are treated as zero.
Matrix sqrtm_psd(const Matrix& matrix, double clamp_eps = kDefaultClampEps);

/// Eigenvalues (ascending) of a symmetric matrix with entries below
/// clamp_eps set to zero, plus the eigenvectors.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
};
SymmetricEigen clamped_eigen(const Matrix& matrix, double clamp_eps = kDefaultClampEps);

struct FrechetOptions {
  double clamp_eps = kDefaultClampEps;
  double negative_tolerance = kNegativeDistanceTolerance;
};

/// ||mu_r - mu_g||^2 + Tr(S_r + S_g - 2 (S_r S_g)^{1/2}), with the cross term
/// evaluated as Tr((S_r^{1/2} S_g S_r^{1/2})^{1/2}).
FrechetResult frechet_distance(const GaussianStats& ref, const GaussianStats& gen,
                               const FrechetOptions& options = {});

/// Same as above with a precomputed S_r^{1/2}; used by the resampler, which
/// evaluates many generated-side statistics against a fixed reference.
FrechetResult frechet_distance_with_root(const GaussianStats& ref, const Matrix& ref_root,
                                         const GaussianStats& gen,
                                         const FrechetOptions& options = {});

FrechetResult compute_fvd(const FeatureMatrix& ref_features, const FeatureMatrix& gen_features,
                          const FrechetOptions& options = {});

}  // namespace fvdlens
