#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nfzwda/nf_dict.hpp"
#include "nfzwda/text_ingest.hpp"

namespace nfzwda {

/// Burrows's Delta over a fixed most-frequent-word list.
struct DeltaProfile {
  std::vector<std::string> words;
  std::vector<double> mean;  // per word, over training texts
  std::vector<double> stdev;  // population standard deviation
  std::map<std::string, std::vector<double>> authors;  // mean z-score per word

  /// z-scores of a relative-frequency vector; 0 where the deviation is 0.
  std::vector<double> z_scores(std::span<const double> frequencies) const;

  std::string to_json() const;
  static DeltaProfile from_json(std::string_view text);
};

struct LabeledText {
  TokenSequence tokens;
  std::string label;
};

/// count(word) / n for each listed word.
std::vector<double> word_frequencies(const TokenSequence& seq,
                                     std::span<const std::string> words);

/// Word list = dict.top_words(n_words). Throws Error(EmptyTraining) without
/// training texts and Error(InvalidArgument) for n_words == 0.
DeltaProfile build_profile(std::span<const LabeledText> train, const NFDictionary& dict,
                           std::size_t n_words = 150);

/// Mean absolute z-score difference to `author`. Throws
/// Error(UnknownAuthor).
double delta_score(const DeltaProfile& profile, const TokenSequence& seq,
                   std::string_view author);

struct DeltaScore {
  std::string author;
  double score = 0.0;
};

/// All authors ordered by ascending score, ties by label.
std::vector<DeltaScore> delta_ranking(const DeltaProfile& profile, const TokenSequence& seq);

/// The lowest-scoring author.
DeltaScore delta_attribute(const DeltaProfile& profile, const TokenSequence& seq);

/// The lowest-scoring author when its score is <= threshold, else nullopt
/// (reject).
std::optional<std::string> delta_open_attribute(const DeltaProfile& profile,
                                                const TokenSequence& seq, double threshold);

/// True when `author` is among the k lowest scores.
bool delta_in_top_k(const DeltaProfile& profile, const TokenSequence& seq,
                    std::string_view author, std::size_t k);

}  // namespace nfzwda
