#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nfzwda/style_features.hpp"

namespace nfzwda {

/// Which halves of each zone's (ODE, ODV) pair enter the classifier.
enum class FeatureSelector { Full, OdeOnly, OdvOnly };

FeatureSelector parse_feature_selector(std::string_view name);
const char* to_string(FeatureSelector selector) noexcept;

/// Min-max scaling over the dense layout: one column per (zone, half) with
/// zones ascending and alpha before gamma.
struct ScalingParams {
  PartitionScheme scheme = PartitionScheme::radix();
  OdvMode mode = OdvMode::Variance;
  FeatureSelector selector = FeatureSelector::Full;
  std::vector<ZoneIndex> zones;
  std::vector<double> min;
  std::vector<double> max;

  std::size_t dimension() const noexcept { return min.size(); }

  /// Raw dense features; zones absent from `v` take the empty-zone values
  /// and zones unknown to the scaling are dropped.
  std::vector<double> dense(const StyleVector& v) const;

  /// (x - min) / (max - min) clamped to [0, 1]; 0.5 on constant columns.
  std::vector<double> apply(const StyleVector& v) const;

  /// Throws Error(ConfigMismatch) if `v` was built with another scheme/mode.
  void check_compatible(const StyleVector& v) const;
};

/// Throws Error(EmptyTraining) on an empty set and Error(MixedConfig) when
/// vectors disagree on scheme or ODV mode.
ScalingParams fit_scaling(std::span<const StyleVector> train,
                          FeatureSelector selector = FeatureSelector::Full);

struct SvmConfig {
  double c = 1.0;
  double tolerance = 1e-3;
  std::uint64_t max_iterations = 100000;
  /// Recorded with the model. The solver picks working pairs
  /// deterministically and draws no random numbers.
  std::uint64_t seed = 42;
};

struct Sample {
  StyleVector features;
  std::string label;
  std::string source_id;
};

/// Common surface of the attribution classifiers.
class Classifier {
public:
  virtual ~Classifier() = default;
  virtual const std::vector<std::string>& labels() const = 0;
  virtual std::string predict(const StyleVector& v) const = 0;
};

/// One linear soft-margin SVM per unordered label pair, trained by SMO on
/// the scaled features; prediction is a one-vs-one vote.
class LinearSvmModel final : public Classifier {
public:
  struct PairModel {
    std::size_t first = 0;   // index into labels(); positive side
    std::size_t second = 0;  // negative side
    std::vector<double> weights;
    double rho = 0.0;
    std::uint64_t iterations = 0;
  };

  LinearSvmModel(std::vector<std::string> labels, ScalingParams scaling,
                 std::vector<PairModel> pairs, SvmConfig config);

  const std::vector<std::string>& labels() const override { return labels_; }
  std::string predict(const StyleVector& v) const override;

  /// Votes per label (labels() order) for `v`.
  std::vector<std::size_t> votes(const StyleVector& v) const;

  const ScalingParams& scaling() const noexcept { return scaling_; }
  const std::vector<PairModel>& pairs() const noexcept { return pairs_; }
  const SvmConfig& config() const noexcept { return config_; }

  std::string to_json() const;
  static LinearSvmModel from_json(std::string_view text);

private:
  std::vector<std::string> labels_;
  ScalingParams scaling_;
  std::vector<PairModel> pairs_;
  SvmConfig config_;
};

/// Labels are sorted ascending. Throws Error(EmptyTraining) for no samples
/// and Error(SingleClass) for fewer than two distinct labels.
LinearSvmModel train(std::span<const Sample> samples, const SvmConfig& config = {},
                     FeatureSelector selector = FeatureSelector::Full);

struct Prediction {
  std::string source_id;
  std::string true_label;
  std::string predicted;
};

struct AttributionReport {
  /// Row/column order of the confusion matrix: the model's labels followed
  /// by any true labels the model does not know.
  std::vector<std::string> labels;
  std::vector<Prediction> predictions;
  std::vector<std::vector<std::size_t>> confusion;  // [true][attributed]
  double accuracy = 0.0;

  /// Each confusion row divided by its total (all-zero rows stay zero).
  std::vector<std::vector<double>> row_proportions() const;
};

/// Throws Error(EmptyTest) for an empty test set.
AttributionReport evaluate(const Classifier& model, std::span<const Sample> test);

}  // namespace nfzwda
