// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fvdlens/error.hpp"
#include "fvdlens/frechet.hpp"

namespace fvdlens {

/// Per-candidate logits. Probabilities are the softmax of the logits.
struct WeightVector {
  Vector logits;

  static WeightVector uniform(Eigen::Index k) { return {Vector::Zero(k)}; }

  Eigen::Index size() const { return logits.size(); }
  /// Softmax with max-logit subtraction.
  Vector probabilities() const;
};

struct ResampleConfig {
  int steps = 300;
  double lr0 = 0.01;
  double decay_factor = 0.1;
  int decay_every = 100;
  Eigen::Index sample_size = 2048;
  int candidate_multiple = 8;
  std::uint64_t seed = 0;
  /// How many top/bottom candidate ids to list in the report.
  std::size_t listing_size = 32;

  /// Throws InvalidArgument when any field is out of range. candidate_count,
  /// when positive, is checked against sample_size.
  void validate(Eigen::Index candidate_count = 0) const;

  /// Step size used for the update taken at `step` (0-based).
  double learning_rate(int step) const;
};

struct ResampleReport {
  double fvd_uniform = 0.0;
  double fvd_weighted_initial = 0.0;
  double fvd_weighted_objective = 0.0;
  double fvd_star = 0.0;
  double change_pct = 0.0;
  std::vector<double> objective_trace;
  std::vector<std::string> top_ids;
  std::vector<std::string> bottom_ids;
  std::vector<double> top_probabilities;
  std::vector<double> bottom_probabilities;
  Eigen::Index candidate_count = 0;
  Eigen::Index sample_size = 0;
  std::string sampling_scheme = "iid_with_replacement";
  ResampleConfig config;
  WeightVector weights;
};

/// Softmax-weighted mean and covariance of the candidate rows. The
/// covariance is centered on the weighted mean.
GaussianStats weighted_stats(const FeatureMatrix& candidates, const WeightVector& weights);

/// Weighted Frechet distance between ref and the softmax-weighted candidates.
double weighted_fvd_objective(const GaussianStats& ref, const FeatureMatrix& candidates,
                              const WeightVector& weights);

/// Gradient of weighted_fvd_objective with respect to the logits.
Vector objective_gradient(const GaussianStats& ref, const FeatureMatrix& candidates,
                          const WeightVector& weights);

/// Objective and gradient in one pass (shares the eigendecompositions).
struct ObjectiveEvaluation {
  double value = 0.0;
  Vector gradient;
};

/// Evaluates objective and gradient against a fixed reference. Holds the
/// reference square root so repeated evaluations only decompose the
/// generated-side matrix.
class WeightedObjective {
 public:
  WeightedObjective(const GaussianStats& ref, const FeatureMatrix& candidates,
                    double clamp_eps = kDefaultClampEps);

  double value(const WeightVector& weights) const;
  ObjectiveEvaluation evaluate(const WeightVector& weights) const;

 private:
  const GaussianStats& ref_;
  const FeatureMatrix& candidates_;
  Matrix ref_root_;
  double clamp_eps_;
};

struct OptimizeResult {
  WeightVector weights;
  std::vector<double> objective_trace;  // steps + 1 entries
};

/// Gradient descent from uniform logits. Each update is
///   w -= lr(step) * K * dF/dw,
/// i.e. the step is measured per unit of mean candidate probability 1/K so
/// the schedule behaves the same for any candidate count.
/// On a non-finite gradient throws OptimizationError carrying the trace so far.
OptimizeResult optimize_weights(const GaussianStats& ref, const FeatureMatrix& candidates,
                                const ResampleConfig& config);

class OptimizationError : public Error {
 public:
  OptimizationError(const std::string& message, std::vector<double> partial_trace)
      : Error(ErrorKind::NumericalInstability, message),
        partial_trace_(std::move(partial_trace)) {}
  const std::vector<double>& partial_trace() const { return partial_trace_; }

 private:
  std::vector<double> partial_trace_;
};

/// Draws sample_size rows i.i.d. with replacement from the softmax
/// probabilities. Deterministic in (weights, sample_size, seed).
FeatureMatrix resample_subset(const FeatureMatrix& candidates, const WeightVector& weights,
                              Eigen::Index sample_size, std::uint64_t seed);

/// Index form of resample_subset.
std::vector<Eigen::Index> resample_indices(const WeightVector& weights, Eigen::Index sample_size,
                                           std::uint64_t seed);

/// Uniform baseline FVD, weight optimization, resampling and FVD*.
ResampleReport probe_null_space(const FeatureMatrix& ref, const FeatureMatrix& candidates,
                                const ResampleConfig& config);

}  // namespace fvdlens
