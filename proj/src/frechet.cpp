// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fvdlens/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "fvdlens/error.hpp"

namespace fvdlens {

void FeatureMatrix::validate() const {
  if (data.rows() < 1 || data.cols() < 1) {
    fail(ErrorKind::InvalidArgument, "feature matrix must have at least one row and one column");
  }
  if (!data.allFinite()) {
    fail(ErrorKind::NonFiniteInput, "feature matrix contains NaN or Inf");
  }
  if (!ids.empty()) {
    if (static_cast<Eigen::Index>(ids.size()) != data.rows()) {
      std::ostringstream msg;
      msg << "feature matrix has " << data.rows() << " rows but " << ids.size() << " ids";
      fail(ErrorKind::IdCountMismatch, msg.str());
    }
    std::unordered_set<std::string> seen;
    for (const auto& id : ids) {
      if (!seen.insert(id).second) {
        fail(ErrorKind::IdCountMismatch, "duplicate feature id '" + id + "'");
      }
    }
  }
}

GaussianStats fit_gaussian(const FeatureMatrix& features) {
  features.validate();
  const auto n = static_cast<double>(features.rows());
  GaussianStats stats;
  stats.n_samples = features.rows();
  stats.mean = features.data.colwise().mean().transpose();
  const Matrix centered = features.data.rowwise() - stats.mean.transpose();
  const Matrix cov = (centered.transpose() * centered) / n;
  stats.cov = 0.5 * (cov + cov.transpose());
  return stats;
}

namespace {

void check_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) {
    fail(ErrorKind::DimensionMismatch, "matrix is not square");
  }
  if (!m.allFinite()) {
    fail(ErrorKind::NonFiniteInput, "matrix contains NaN or Inf");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-6 * scale) {
    std::ostringstream msg;
    msg << "matrix is not symmetric (max |M - M^T| = " << asym << ")";
    fail(ErrorKind::NotSymmetric, msg.str());
  }
}

}  // namespace

SymmetricEigen clamped_eigen(const Matrix& matrix, double clamp_eps) {
  if (clamp_eps < 0.0) {
    fail(ErrorKind::InvalidArgument, "clamp_eps must be nonnegative");
  }
  check_symmetric(matrix);
  const Matrix sym = 0.5 * (matrix + matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::EigenFailure, "symmetric eigendecomposition did not converge");
  }
  SymmetricEigen out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index i = 0; i < out.values.size(); ++i) {
    if (out.values[i] < clamp_eps) out.values[i] = 0.0;
  }
  return out;
}

Matrix sqrtm_psd(const Matrix& matrix, double clamp_eps) {
  const SymmetricEigen eig = clamped_eigen(matrix, clamp_eps);
  const Matrix root =
      eig.vectors * eig.values.cwiseSqrt().asDiagonal() * eig.vectors.transpose();
  return 0.5 * (root + root.transpose());
}

FrechetResult frechet_distance_with_root(const GaussianStats& ref, const Matrix& ref_root,
                                         const GaussianStats& gen,
                                         const FrechetOptions& options) {
  if (ref.dim() != gen.dim() || ref.cov.rows() != gen.cov.rows() ||
      ref_root.rows() != ref.dim()) {
    std::ostringstream msg;
    msg << "feature dimensions differ: " << ref.dim() << " vs " << gen.dim();
    fail(ErrorKind::DimensionMismatch, msg.str());
  }

  FrechetResult result;
  result.mean_term = (ref.mean - gen.mean).squaredNorm();

  // The inner product carries squared covariance units, so its clamp is squared
  // too; otherwise covariance eigenvalues below sqrt(clamp_eps) would vanish
  // from the cross term but not from the traces. Round-off of the
  // decomposition sets a relative floor, since square roots of noise-level
  // eigenvalues would otherwise inflate the cross term.
  const Matrix inner = ref_root * gen.cov * ref_root;
  SymmetricEigen eig = clamped_eigen(inner, 0.0);
  const double roundoff = static_cast<double>(inner.rows()) *
                          std::numeric_limits<double>::epsilon() *
                          eig.values.cwiseAbs().maxCoeff();
  const double floor = std::max(options.clamp_eps * options.clamp_eps, roundoff);
  double cross = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] >= floor) cross += std::sqrt(eig.values[i]);
  }
  double trace_term = ref.cov.trace() + gen.cov.trace() - 2.0 * cross;

  if (!std::isfinite(trace_term) || !std::isfinite(result.mean_term)) {
    fail(ErrorKind::NumericalInstability, "Frechet distance is not finite");
  }
  // The trace term is a squared Bures distance and nonnegative in exact
  // arithmetic; small negatives are round-off.
  if (trace_term < 0.0) {
    if (trace_term < -options.negative_tolerance) {
      std::ostringstream msg;
      msg << "trace term is negative beyond tolerance: " << trace_term;
      fail(ErrorKind::NumericalInstability, msg.str());
    }
    trace_term = 0.0;
    result.clamped = true;
  }
  result.trace_term = trace_term;
  result.value = result.mean_term + result.trace_term;
  return result;
}

FrechetResult frechet_distance(const GaussianStats& ref, const GaussianStats& gen,
                               const FrechetOptions& options) {
  if (ref.dim() != gen.dim()) {
    std::ostringstream msg;
    msg << "feature dimensions differ: " << ref.dim() << " vs " << gen.dim();
    fail(ErrorKind::DimensionMismatch, msg.str());
  }
  return frechet_distance_with_root(ref, sqrtm_psd(ref.cov, options.clamp_eps), gen, options);
}

FrechetResult compute_fvd(const FeatureMatrix& ref_features, const FeatureMatrix& gen_features,
                          const FrechetOptions& options) {
  if (ref_features.dim() != gen_features.dim()) {
    std::ostringstream msg;
    msg << "feature dimensions differ: " << ref_features.dim() << " vs " << gen_features.dim();
    fail(ErrorKind::DimensionMismatch, msg.str());
  }
  return frechet_distance(fit_gaussian(ref_features), fit_gaussian(gen_features), options);
}

}  // namespace fvdlens
