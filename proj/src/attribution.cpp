#include "nfzwda/attribution.hpp"

#include <algorithm>
#include <set>

#include "json_util.hpp"
#include "nfzwda/error.hpp"
#include "nfzwda/parallel.hpp"

namespace nfzwda {

CandidateSet::CandidateSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) {
    throw Error(ErrorCode::SingleClass, "candidate set needs at least two authors");
  }
  std::set<std::string_view> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw Error(ErrorCode::InvalidArgument, "empty candidate label");
    if (!seen.insert(l).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate candidate label '" + l + "'");
    }
  }
}

bool CandidateSet::contains(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

StyleVector featurize(const TokenSequence& sample, const NFDictionary& dict,
                      const PipelineConfig& config) {
  return style_vector(sample, dict, config.scheme, config.mode);
}

TokenSequence front_sample(const Document& doc, std::size_t word_length) {
  return std::move(segment(tokenize(doc.text), word_length, SegmentMode::Front).front());
}

namespace {

std::vector<Sample> labelled_samples(std::span<const Document> docs, const NFDictionary& dict,
                                     const PipelineConfig& config) {
  std::vector<Sample> samples(docs.size());
  detail::parallel_for(docs.size(), [&](std::size_t i) {
    const auto& doc = docs[i];
    if (!doc.author_label || doc.author_label->empty()) {
      throw Error(ErrorCode::InvalidArgument, doc.source_id + " has no author label");
    }
    samples[i].features = featurize(front_sample(doc, config.word_length), dict, config);
    samples[i].label = *doc.author_label;
    samples[i].source_id = doc.source_id;
  });
  return samples;
}

}  // namespace

BasicAttributor::BasicAttributor(std::shared_ptr<const NFDictionary> dict,
                                 PipelineConfig config, LinearSvmModel model)
    : dict_(std::move(dict)), config_(std::move(config)), model_(std::move(model)) {
  if (!dict_) throw Error(ErrorCode::InvalidArgument, "missing dictionary");
  if (config_.word_length == 0) throw Error(ErrorCode::InvalidArgument, "word_length must be >= 1");
}

BasicAttributor BasicAttributor::train(std::span<const Document> docs,
                                       std::shared_ptr<const NFDictionary> dict,
                                       const PipelineConfig& config) {
  if (!dict) throw Error(ErrorCode::InvalidArgument, "missing dictionary");
  if (docs.empty()) throw Error(ErrorCode::EmptyTraining, "no training documents");
  if (config.word_length == 0) throw Error(ErrorCode::InvalidArgument, "word_length must be >= 1");
  const auto samples = labelled_samples(docs, *dict, config);
  auto model = nfzwda::train(samples, config.svm, config.selector);
  return BasicAttributor(std::move(dict), config, std::move(model));
}

std::string BasicAttributor::attribute(const TokenSequence& sample) const {
  return model_.predict(featurize(sample, *dict_, config_));
}

AttributionReport BasicAttributor::evaluate(std::span<const Document> docs) const {
  const auto samples = labelled_samples(docs, *dict_, config_);
  return nfzwda::evaluate(model_, samples);
}

AttributionReport basic_attribute(std::span<const Document> train,
                                  std::span<const Document> test,
                                  std::shared_ptr<const NFDictionary> dict,
                                  const PipelineConfig& config) {
  if (test.empty()) throw Error(ErrorCode::EmptyTest, "no test documents");
  const auto attributor = BasicAttributor::train(train, std::move(dict), config);
  return attributor.evaluate(test);
}

double confidence(double proportion, std::size_t set_size) {
  if (!(proportion >= 0.0 && proportion <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "proportion must lie in [0, 1]");
  }
  if (set_size < 2) throw Error(ErrorCode::InvalidArgument, "candidate set needs >= 2 authors");
  const double chance = 1.0 / static_cast<double>(set_size);
  return (proportion - chance) / (1.0 - chance);
}

std::optional<std::string> decide(std::span<const CandidateConfidence> candidates,
                                  double theta) {
  std::optional<std::string> winner;
  for (const auto& c : candidates) {
    if (c.confidence >= theta) {
      if (winner) return std::nullopt;
      winner = c.label;
    }
  }
  return winner;
}

ConfidenceReport confidence_report(std::string subset_id, const CandidateSet& candidates,
                                   std::span<const std::size_t> counts, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 1]");
  }
  if (counts.size() != candidates.size()) {
    throw Error(ErrorCode::InvalidArgument, "one count per candidate expected");
  }
  std::size_t total = 0;
  for (const auto c : counts) total += c;
  if (total == 0) throw Error(ErrorCode::NoSegments, subset_id);

  ConfidenceReport report;
  report.subset_id = std::move(subset_id);
  report.segments = total;
  report.theta = theta;
  report.max_confidence = -1.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    CandidateConfidence c;
    c.label = candidates.labels()[i];
    c.attributed_count = counts[i];
    c.proportion = static_cast<double>(counts[i]) / static_cast<double>(total);
    c.confidence = confidence(c.proportion, candidates.size());
    report.max_confidence = std::max(report.max_confidence, c.confidence);
    report.candidates.push_back(std::move(c));
  }
  report.decision = decide(report.candidates, theta);
  return report;
}

ConfidenceReport open_attribute(const Document& long_text, const BasicAttributor& attributor,
                                std::size_t word_length, double theta) {
  const auto words = split_words(long_text.text);
  if (words.empty()) throw Error(ErrorCode::NoSegments, long_text.source_id + " has no words");
  const auto segments = segment(TokenSequence(words), word_length, SegmentMode::Chunks);

  const auto candidates = attributor.candidates();
  std::vector<std::string> predicted(segments.size());
  detail::parallel_for(segments.size(),
                       [&](std::size_t i) { predicted[i] = attributor.attribute(segments[i]); });

  std::vector<std::size_t> counts(candidates.size(), 0);
  for (const auto& label : predicted) {
    const auto& labels = candidates.labels();
    ++counts[static_cast<std::size_t>(std::find(labels.begin(), labels.end(), label) -
                                      labels.begin())];
  }
  return confidence_report(long_text.source_id, candidates, counts, theta);
}

std::string ConfidenceReport::to_json() const {
  nlohmann::json j;
  j["subset_id"] = subset_id;
  j["segments"] = segments;
  j["theta"] = theta;
  auto list = nlohmann::json::array();
  for (const auto& c : candidates) {
    list.push_back({{"label", c.label},
                    {"attributed_count", c.attributed_count},
                    {"proportion", c.proportion},
                    {"confidence", c.confidence}});
  }
  j["candidates"] = std::move(list);
  j["decision"] = decision.value_or("Reject");
  j["max_confidence"] = max_confidence;
  return j.dump();
}

}  // namespace nfzwda
