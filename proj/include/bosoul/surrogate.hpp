#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bosoul/graph.hpp"
#include "bosoul/spectral.hpp"

namespace bosoul {

struct SurrogateOptions {
  /// Kernel length-scale; the median pairwise input distance when unset.
  std::optional<double> length_scale;
  /// Observation noise variance on standardized targets.
  double noise = 1e-4;
  /// Optional per-point noise variance in target units, added to `noise`
  /// after standardization. Empty or one entry per training point.
  std::vector<double> point_noise;
};

struct Prediction {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Gaussian-process regression over node-set indicators with the graph
/// spectral Gaussian kernel and a zero-mean prior on standardized targets.
class SurrogateModel {
 public:
  static SurrogateModel fit(std::vector<NodeSet> inputs, std::vector<double> targets,
                            const SurrogateOptions& options = {}) {
    SurrogateModel m;
    if (inputs.size() != targets.size()) throw Error("surrogate inputs and targets differ in count");
    if (inputs.empty()) throw Error("surrogate needs training data");
    const std::size_t n = inputs.size();
    const std::size_t universe = inputs.front().universe();
    for (const auto& x : inputs) {
      if (x.universe() != universe) throw Error("surrogate inputs differ in length");
    }
    if (!options.point_noise.empty() && options.point_noise.size() != n) {
      throw Error("point noise must have one entry per training point");
    }
    if (options.noise < 0.0) throw Error("noise variance must be nonnegative");

    // Pairwise squared distances, needed for both the heuristic and K.
    Eigen::MatrixXd sq(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<double> distances;
    distances.reserve(n * (n - 1) / 2);
    bool conflicting_duplicate = false;
    for (std::size_t i = 0; i < n; ++i) {
      sq(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 0.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d2 = squared_indicator_distance(inputs[i], inputs[j]);
        sq(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d2;
        sq(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d2;
        distances.push_back(std::sqrt(d2));
        if (d2 == 0.0 && targets[i] != targets[j]) conflicting_duplicate = true;
      }
    }
    const bool has_distinct = std::any_of(distances.begin(), distances.end(), [](double d) { return d > 0.0; });
    if (!has_distinct) throw Error("surrogate needs at least two distinct inputs");

    if (options.length_scale) {
      if (!(*options.length_scale > 0.0)) throw Error("kernel length-scale must be positive");
      m.length_scale_ = *options.length_scale;
    } else {
      m.length_scale_ = median_heuristic(distances);
    }

    double total_point_noise = 0.0;
    for (double v : options.point_noise) total_point_noise += v;
    if (conflicting_duplicate && options.noise == 0.0 && total_point_noise == 0.0) {
      throw NumericError("identical inputs with different targets cannot be interpolated without noise");
    }

    // Standardize targets; a constant target vector keeps unit scale.
    double mean = 0.0;
    for (double y : targets) mean += y;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double y : targets) var += (y - mean) * (y - mean);
    var /= static_cast<double>(n);
    m.target_mean_ = mean;
    m.target_scale_ = var > 0.0 ? std::sqrt(var) : 1.0;

    m.y_.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      m.y_(static_cast<Eigen::Index>(i)) = (targets[i] - m.target_mean_) / m.target_scale_;
    }

    m.gram_ = sq.unaryExpr([ls = m.length_scale_](double d2) { return gsg_from_squared_distance(d2, ls); });
    Eigen::VectorXd diag = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), options.noise);
    for (std::size_t i = 0; i < options.point_noise.size(); ++i) {
      diag(static_cast<Eigen::Index>(i)) += options.point_noise[i] / (m.target_scale_ * m.target_scale_);
    }

    // Jitter escalates 1e-8 .. 1e-4 if K + σ²I is not numerically PD.
    const double jitters[] = {0.0, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4};
    for (double jitter : jitters) {
      Eigen::MatrixXd A = m.gram_;
      A.diagonal() += diag + Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), jitter);
      m.chol_.compute(A);
      if (m.chol_.info() == Eigen::Success && m.chol_.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0) {
        m.jitter_ = jitter;
        m.alpha_ = m.chol_.solve(m.y_);
        m.inputs_ = std::move(inputs);
        m.targets_ = std::move(targets);
        return m;
      }
    }
    throw NumericError("surrogate covariance is not positive definite even with jitter 1e-4");
  }

  std::size_t size() const noexcept { return inputs_.size(); }
  std::size_t input_length() const noexcept { return inputs_.empty() ? 0 : inputs_.front().universe(); }
  double length_scale() const noexcept { return length_scale_; }
  double jitter() const noexcept { return jitter_; }
  double target_mean() const noexcept { return target_mean_; }
  double target_scale() const noexcept { return target_scale_; }
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  const std::vector<NodeSet>& inputs() const noexcept { return inputs_; }
  const std::vector<double>& targets() const noexcept { return targets_; }

  Eigen::VectorXd cross_covariance(const NodeSet& query) const {
    if (query.universe() != input_length()) throw Error("query length does not match surrogate inputs");
    Eigen::VectorXd k(static_cast<Eigen::Index>(inputs_.size()));
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      k(static_cast<Eigen::Index>(i)) = gsg_kernel(inputs_[i], query, length_scale_);
    }
    return k;
  }

  /// Predictive mean and standard deviation of the latent function, in
  /// target units.
  Prediction posterior(const NodeSet& query) const {
    const Eigen::VectorXd k = cross_covariance(query);
    const double mean_std = k.dot(alpha_);
    const Eigen::VectorXd v = chol_.matrixL().solve(k);
    const double var_std = std::max(0.0, 1.0 - v.squaredNorm());
    return {target_mean_ + target_scale_ * mean_std, target_scale_ * std::sqrt(var_std)};
  }

  Prediction posterior(std::span<const std::uint8_t> indicator) const {
    if (indicator.size() != input_length()) throw Error("query length does not match surrogate inputs");
    return posterior(NodeSet::from_indicator(indicator));
  }

  /// Posterior mean only; skips the triangular solve.
  double posterior_mean(const NodeSet& query) const {
    return target_mean_ + target_scale_ * cross_covariance(query).dot(alpha_);
  }

 private:
  static double median_heuristic(std::vector<double> distances) {
    std::sort(distances.begin(), distances.end());
    const std::size_t m = distances.size();
    double median = m % 2 == 1 ? distances[m / 2] : 0.5 * (distances[m / 2 - 1] + distances[m / 2]);
    if (median > 0.0) return median;
    // Mostly duplicates: fall back to the smallest positive distance.
    return *std::upper_bound(distances.begin(), distances.end(), 0.0);
  }

  std::vector<NodeSet> inputs_;
  std::vector<double> targets_;
  double length_scale_ = 1.0;
  double jitter_ = 0.0;
  double target_mean_ = 0.0;
  double target_scale_ = 1.0;
  Eigen::VectorXd y_;
  Eigen::VectorXd alpha_;
  Eigen::MatrixXd gram_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
};

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// E[max(X − best, 0)] for X ~ N(mean, stddev²).
inline double expected_improvement(double mean, double stddev, double best) {
  const double d = mean - best;
  if (stddev <= 0.0) return std::max(d, 0.0);
  const double z = d / stddev;
  return std::max(0.0, d * normal_cdf(z) + stddev * normal_pdf(z));
}

inline double expected_improvement(const SurrogateModel& model, const NodeSet& query, double best) {
  const Prediction p = model.posterior(query);
  return expected_improvement(p.mean, p.stddev, best);
}

struct AcquisitionResult {
  std::size_t index = 0;  // position within the batch
  double ei = 0.0;
};

/// Batch element with the largest EI; ties go to the lowest index.
inline AcquisitionResult argmax_ei(const SurrogateModel& model, std::span<const NodeSet> batch, double best) {
  if (batch.empty()) throw Error("argmax_ei needs a nonempty batch");
  AcquisitionResult out{0, expected_improvement(model, batch[0], best)};
  for (std::size_t i = 1; i < batch.size(); ++i) {
    const double ei = expected_improvement(model, batch[i], best);
    if (ei > out.ei) out = {i, ei};
  }
  return out;
}

}  // namespace bosoul
