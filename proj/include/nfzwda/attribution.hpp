#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nfzwda/classify.hpp"
#include "nfzwda/nf_dict.hpp"
#include "nfzwda/style_features.hpp"
#include "nfzwda/text_ingest.hpp"

namespace nfzwda {

/// Ordered, unique, nonempty candidate author labels; at least two.
class CandidateSet {
public:
  explicit CandidateSet(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  bool contains(std::string_view label) const;

private:
  std::vector<std::string> labels_;
};

struct PipelineConfig {
  PartitionScheme scheme = PartitionScheme::radix();
  OdvMode mode = OdvMode::Variance;
  std::size_t word_length = 1000;
  FeatureSelector selector = FeatureSelector::Full;
  SvmConfig svm;
};

/// Style vector of one sample text under `config`.
StyleVector featurize(const TokenSequence& sample, const NFDictionary& dict,
                      const PipelineConfig& config);

/// Front segment of a document's text at `word_length`.
TokenSequence front_sample(const Document& doc, std::size_t word_length);

/// The closed-set pipeline: front segments, style vectors, scaling and the
/// pairwise linear SVM.
class BasicAttributor {
public:
  BasicAttributor(std::shared_ptr<const NFDictionary> dict, PipelineConfig config,
                  LinearSvmModel model);

  /// Every document needs an author label. Throws Error(SingleClass) with
  /// fewer than two authors.
  static BasicAttributor train(std::span<const Document> docs,
                               std::shared_ptr<const NFDictionary> dict,
                               const PipelineConfig& config);

  std::string attribute(const TokenSequence& sample) const;

  /// Front-segments each labelled test document and scores the predictions.
  AttributionReport evaluate(std::span<const Document> docs) const;

  CandidateSet candidates() const { return CandidateSet(model_.labels()); }
  const LinearSvmModel& model() const noexcept { return model_; }
  const PipelineConfig& config() const noexcept { return config_; }
  const NFDictionary& dictionary() const noexcept { return *dict_; }

private:
  std::shared_ptr<const NFDictionary> dict_;
  PipelineConfig config_;
  LinearSvmModel model_;
};

AttributionReport basic_attribute(std::span<const Document> train,
                                  std::span<const Document> test,
                                  std::shared_ptr<const NFDictionary> dict,
                                  const PipelineConfig& config);

/// (p - 1/|Y|) / (1 - 1/|Y|). Throws Error(InvalidArgument) for p outside
/// [0, 1] or set_size < 2.
double confidence(double proportion, std::size_t set_size);

struct CandidateConfidence {
  std::string label;
  std::size_t attributed_count = 0;
  double proportion = 0.0;
  double confidence = 0.0;
};

/// The single label whose confidence reaches theta (inclusive), or nullopt
/// (reject) when none or several do.
std::optional<std::string> decide(std::span<const CandidateConfidence> candidates,
                                  double theta);

struct ConfidenceReport {
  std::string subset_id;
  std::size_t segments = 0;
  double theta = 0.5;
  std::vector<CandidateConfidence> candidates;
  std::optional<std::string> decision;
  double max_confidence = 0.0;

  std::string to_json() const;
};

/// Builds the report from per-candidate attribution counts (one count per
/// label of `candidates`, same order).
ConfidenceReport confidence_report(std::string subset_id, const CandidateSet& candidates,
                                   std::span<const std::size_t> counts, double theta);

/// Splits the text into word_length chunks, attributes every chunk with the
/// closed-set model and applies the confidence decision. Throws
/// Error(NoSegments) when the text has no words.
ConfidenceReport open_attribute(const Document& long_text, const BasicAttributor& attributor,
                                std::size_t word_length, double theta = 0.5);

}  // namespace nfzwda
