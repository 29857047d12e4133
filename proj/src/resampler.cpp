// Copyright 2026 The fvdlens Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fvdlens/resampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fvdlens/error.hpp"
#include "fvdlens/rng.hpp"

namespace fvdlens {

Vector WeightVector::probabilities() const {
  if (logits.size() == 0) fail(ErrorKind::InvalidArgument, "empty weight vector");
  if (!logits.allFinite()) fail(ErrorKind::NonFiniteInput, "logits contain NaN or Inf");
  const double top = logits.maxCoeff();
  Vector p = (logits.array() - top).exp().matrix();
  p /= p.sum();
  return p;
}

void ResampleConfig::validate(Eigen::Index candidate_count) const {
  if (steps < 1) fail(ErrorKind::InvalidArgument, "steps must be >= 1");
  if (!(lr0 > 0.0)) fail(ErrorKind::InvalidArgument, "lr0 must be > 0");
  if (!(decay_factor > 0.0 && decay_factor <= 1.0)) {
    fail(ErrorKind::InvalidArgument, "decay_factor must be in (0, 1]");
  }
  if (decay_every < 1) fail(ErrorKind::InvalidArgument, "decay_every must be >= 1");
  if (sample_size < 1) fail(ErrorKind::InvalidArgument, "sample_size must be >= 1");
  if (candidate_multiple < 1) fail(ErrorKind::InvalidArgument, "candidate_multiple must be >= 1");
  if (candidate_count > 0 && sample_size > candidate_count) {
    std::ostringstream msg;
    msg << "sample_size " << sample_size << " exceeds candidate count " << candidate_count;
    fail(ErrorKind::InvalidArgument, msg.str());
  }
}

double ResampleConfig::learning_rate(int step) const {
  return lr0 * std::pow(decay_factor, step / decay_every);
}

namespace {

void check_candidates(const FeatureMatrix& candidates, const WeightVector& weights) {
  if (candidates.rows() != weights.size()) {
    std::ostringstream msg;
    msg << "candidate rows (" << candidates.rows() << ") != weight count (" << weights.size()
        << ")";
    fail(ErrorKind::DimensionMismatch, msg.str());
  }
  if (candidates.rows() < 1 || candidates.dim() < 1) {
    fail(ErrorKind::InvalidArgument, "empty candidate matrix");
  }
}

GaussianStats weighted_stats_from(const Matrix& rows, const Vector& p) {
  GaussianStats stats;
  stats.n_samples = rows.rows();
  stats.mean = rows.transpose() * p;
  const Matrix centered = rows.rowwise() - stats.mean.transpose();
  const Matrix cov = centered.transpose() * p.asDiagonal() * centered;
  stats.cov = 0.5 * (cov + cov.transpose());
  return stats;
}

}  // namespace

GaussianStats weighted_stats(const FeatureMatrix& candidates, const WeightVector& weights) {
  check_candidates(candidates, weights);
  if (!candidates.data.allFinite()) {
    fail(ErrorKind::NonFiniteInput, "candidate features contain NaN or Inf");
  }
  return weighted_stats_from(candidates.data, weights.probabilities());
}

WeightedObjective::WeightedObjective(const GaussianStats& ref, const FeatureMatrix& candidates,
                                     double clamp_eps)
    : ref_(ref), candidates_(candidates), clamp_eps_(clamp_eps) {
  if (ref.dim() != candidates.dim()) {
    std::ostringstream msg;
    msg << "reference dim " << ref.dim() << " != candidate dim " << candidates.dim();
    fail(ErrorKind::DimensionMismatch, msg.str());
  }
  if (!candidates.data.allFinite()) {
    fail(ErrorKind::NonFiniteInput, "candidate features contain NaN or Inf");
  }
  ref_root_ = sqrtm_psd(ref.cov, clamp_eps);
}

double WeightedObjective::value(const WeightVector& weights) const {
  check_candidates(candidates_, weights);
  const GaussianStats gen = weighted_stats_from(candidates_.data, weights.probabilities());
  FrechetOptions options;
  options.clamp_eps = clamp_eps_;
  return frechet_distance_with_root(ref_, ref_root_, gen, options).value;
}

ObjectiveEvaluation WeightedObjective::evaluate(const WeightVector& weights) const {
  check_candidates(candidates_, weights);
  const Vector p = weights.probabilities();
  const GaussianStats gen = weighted_stats_from(candidates_.data, p);
  FrechetOptions options;
  options.clamp_eps = clamp_eps_;

  ObjectiveEvaluation out;
  out.value = frechet_distance_with_root(ref_, ref_root_, gen, options).value;

  // dF/dSigma_g = I - R A^{-1/2} R with A = R Sigma_g R, R = Sigma_r^{1/2};
  // A^{-1/2} is the pseudoinverse root on the clamped spectrum.
  const Matrix inner = ref_root_ * gen.cov * ref_root_;
  const SymmetricEigen eig = clamped_eigen(inner, clamp_eps_);
  Vector inv_root(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    inv_root[i] = eig.values[i] > 0.0 ? 1.0 / std::sqrt(eig.values[i]) : 0.0;
  }
  const Matrix half = inv_root.cwiseSqrt().asDiagonal() * eig.vectors.transpose() * ref_root_;
  const Eigen::Index d = ref_.dim();
  const Matrix grad_cov = Matrix::Identity(d, d) - half.transpose() * half;

  // Per-candidate derivative with respect to p_k, dropping terms that are
  // constant in k (they cancel under the softmax projection):
  //   g_k = 2 (mu_g - mu_r)^T (f_k - mu_g) + (f_k - mu_g)^T G (f_k - mu_g)
  const Matrix centered = candidates_.data.rowwise() - gen.mean.transpose();
  const Vector mean_dir = 2.0 * (gen.mean - ref_.mean);
  const Vector g = centered * mean_dir + (centered * grad_cov).cwiseProduct(centered).rowwise().sum();

  // Softmax chain rule: dF/dw_k = p_k (g_k - sum_j p_j g_j).
  const double baseline = p.dot(g);
  out.gradient = p.cwiseProduct((g.array() - baseline).matrix());
  if (!out.gradient.allFinite() || !std::isfinite(out.value)) {
    fail(ErrorKind::NumericalInstability, "objective gradient is not finite");
  }
  return out;
}

double weighted_fvd_objective(const GaussianStats& ref, const FeatureMatrix& candidates,
                              const WeightVector& weights) {
  return WeightedObjective(ref, candidates).value(weights);
}

Vector objective_gradient(const GaussianStats& ref, const FeatureMatrix& candidates,
                          const WeightVector& weights) {
  return WeightedObjective(ref, candidates).evaluate(weights).gradient;
}

OptimizeResult optimize_weights(const GaussianStats& ref, const FeatureMatrix& candidates,
                                const ResampleConfig& config) {
  config.validate();
  const WeightedObjective objective(ref, candidates);
  const auto k = static_cast<double>(candidates.rows());

  OptimizeResult result;
  result.weights = WeightVector::uniform(candidates.rows());
  result.objective_trace.reserve(static_cast<std::size_t>(config.steps) + 1);

  for (int step = 0; step <= config.steps; ++step) {
    ObjectiveEvaluation eval;
    try {
      eval = objective.evaluate(result.weights);
    } catch (const Error& e) {
      throw OptimizationError(e.what(), result.objective_trace);
    }
    result.objective_trace.push_back(eval.value);
    if (step == config.steps) break;
    result.weights.logits -= config.learning_rate(step) * k * eval.gradient;
  }
  return result;
}

std::vector<Eigen::Index> resample_indices(const WeightVector& weights, Eigen::Index sample_size,
                                           std::uint64_t seed) {
  const Vector p = weights.probabilities();
  if (sample_size < 1 || sample_size > p.size()) {
    fail(ErrorKind::InvalidArgument, "sample_size must be in [1, K]");
  }
  std::vector<double> cdf(static_cast<std::size_t>(p.size()));
  std::partial_sum(p.data(), p.data() + p.size(), cdf.begin());
  cdf.back() = 1.0;

  CounterRng rng(derive_key(seed, {0x7265736d706c65ULL}));
  std::vector<Eigen::Index> picks(static_cast<std::size_t>(sample_size));
  for (auto& pick : picks) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    pick = std::min<Eigen::Index>(static_cast<Eigen::Index>(it - cdf.begin()), p.size() - 1);
  }
  return picks;
}

FeatureMatrix resample_subset(const FeatureMatrix& candidates, const WeightVector& weights,
                              Eigen::Index sample_size, std::uint64_t seed) {
  check_candidates(candidates, weights);
  const auto picks = resample_indices(weights, sample_size, seed);
  FeatureMatrix out;
  out.extractor_tag = candidates.extractor_tag;
  out.data.resize(sample_size, candidates.dim());
  for (std::size_t i = 0; i < picks.size(); ++i) {
    out.data.row(static_cast<Eigen::Index>(i)) = candidates.data.row(picks[i]);
  }
  // Draws are with replacement, so chosen ids can repeat; keep them
  // addressable by suffixing the draw index.
  if (candidates.has_ids()) {
    out.ids.reserve(picks.size());
    for (std::size_t i = 0; i < picks.size(); ++i) {
      out.ids.push_back(candidates.ids[static_cast<std::size_t>(picks[i])] + "#" +
                        std::to_string(i));
    }
  }
  return out;
}

ResampleReport probe_null_space(const FeatureMatrix& ref, const FeatureMatrix& candidates,
                                const ResampleConfig& config) {
  ref.validate();
  candidates.validate();
  config.validate(candidates.rows());
  if (ref.dim() != candidates.dim()) {
    std::ostringstream msg;
    msg << "reference dim " << ref.dim() << " != candidate dim " << candidates.dim();
    fail(ErrorKind::DimensionMismatch, msg.str());
  }

  ResampleReport report;
  report.config = config;
  report.candidate_count = candidates.rows();
  report.sample_size = config.sample_size;

  const GaussianStats ref_stats = fit_gaussian(ref);
  const WeightVector uniform = WeightVector::uniform(candidates.rows());

  // Baseline: uniform draw of the same size, same sampling scheme.
  const FeatureMatrix uniform_subset =
      resample_subset(candidates, uniform, config.sample_size, derive_key(config.seed, {1}));
  report.fvd_uniform = frechet_distance(ref_stats, fit_gaussian(uniform_subset)).value;

  OptimizeResult opt = optimize_weights(ref_stats, candidates, config);
  report.objective_trace = opt.objective_trace;
  report.fvd_weighted_initial = opt.objective_trace.front();
  report.fvd_weighted_objective = opt.objective_trace.back();

  const FeatureMatrix star_subset =
      resample_subset(candidates, opt.weights, config.sample_size, derive_key(config.seed, {2}));
  report.fvd_star = frechet_distance(ref_stats, fit_gaussian(star_subset)).value;
  report.change_pct = report.fvd_uniform > 0.0
                          ? (report.fvd_star - report.fvd_uniform) / report.fvd_uniform * 100.0
                          : 0.0;

  const Vector p = opt.weights.probabilities();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return p[a] > p[b]; });
  const std::size_t listing = std::min(config.listing_size, order.size());
  auto id_of = [&](Eigen::Index i) {
    return candidates.has_ids() ? candidates.ids[static_cast<std::size_t>(i)]
                                : std::to_string(i);
  };
  for (std::size_t i = 0; i < listing; ++i) {
    report.top_ids.push_back(id_of(order[i]));
    report.top_probabilities.push_back(p[order[i]]);
    const Eigen::Index low = order[order.size() - 1 - i];
    report.bottom_ids.push_back(id_of(low));
    report.bottom_probabilities.push_back(p[low]);
  }
  report.weights = std::move(opt.weights);
  return report;
}

}  // namespace fvdlens
