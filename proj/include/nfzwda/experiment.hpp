#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "nfzwda/classify.hpp"
#include "nfzwda/nf_dict.hpp"
#include "nfzwda/partition.hpp"
#include "nfzwda/style_features.hpp"

namespace nfzwda {

/// One author-count sweep point: sample `count` authors, `repetitions` times.
struct AuthorCountPoint {
  std::size_t count = 2;
  std::size_t repetitions = 1;
};

struct ExperimentConfig {
  std::filesystem::path train_corpus;
  std::filesystem::path test_corpus;
  std::filesystem::path open_in_corpus;
  std::filesystem::path open_out_corpus;
  /// Empty: build the dictionary from the training corpus.
  std::filesystem::path dictionary;
  DictionaryFormat dictionary_format = DictionaryFormat::Canonical;

  /// Partition names (linear, radix, log) sharing the parameters below.
  std::vector<std::string> partitions{"radix"};
  std::uint64_t base_size = 10;  // L
  std::uint64_t radix = 100000;  // R
  double ratio = 1.0001;         // r
  OdvMode mode = OdvMode::Variance;
  std::vector<std::size_t> word_lengths{1000};
  std::vector<FeatureSelector> selectors{FeatureSelector::Full};

  std::vector<AuthorCountPoint> author_counts;
  std::vector<std::pair<std::size_t, std::size_t>> train_test_counts;

  std::vector<std::size_t> delta_n_words{150};
  std::size_t delta_top_k = 1;
  std::optional<double> delta_threshold;

  double theta = 0.5;
  /// Keep only the N longest documents per author (0 keeps all).
  std::size_t longest_documents = 0;
  std::uint64_t seed = 42;
  SvmConfig svm;
  std::filesystem::path output = "results";

  bool has_closed() const { return !train_corpus.empty() && !test_corpus.empty(); }
  bool has_open() const {
    return !train_corpus.empty() && (!open_in_corpus.empty() || !open_out_corpus.empty());
  }

  /// Throws Error(InvalidArgument) when a parameter is out of range.
  std::vector<PartitionScheme> schemes() const;

  /// Key/value pairs describing the configuration, in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Applies one `key = value` setting. Throws Error(InvalidArgument) for an
/// unknown key or a malformed value.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Parses a TOML-style file body: `key = value` lines, `#` comments,
/// `[section]` headers (ignored), quoted strings, and comma lists with
/// optional brackets. Unknown keys are errors.
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// "2-6:30, 7-10:10" -> counts 2..6 with 30 repetitions, 7..10 with 10.
std::vector<AuthorCountPoint> parse_author_counts(std::string_view spec);

/// "grid" -> every (train, test) pair over {5, 10, ..., 30}; otherwise a list
/// of "train:test" pairs.
std::vector<std::pair<std::size_t, std::size_t>> parse_train_test_counts(std::string_view spec);

using Cell = std::variant<std::string, std::int64_t, double>;

struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct ExperimentResults {
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<ResultTable> tables;

  bool empty() const;
  const ResultTable* find(std::string_view name) const;
};

/// Closed-set protocols: for every word length, sweep point and method one
/// run row, plus summary rows averaging repetitions. Methods are
/// `nfz-<scheme>-<features>` and `delta-<N>` (`delta-<N>-top<k>` when
/// top-k > 1).
ExperimentResults run_closed_experiment(const ExperimentConfig& config);

/// Open-set protocol: one confidence row per long text, Delta threshold
/// rows when configured, and per-method summaries.
ExperimentResults run_open_experiment(const ExperimentConfig& config);

enum class ReportFormat { Csv, Json };

/// Comment lines with the echoed configuration, then one CSV table. Doubles
/// are printed with six decimals.
std::string to_csv(const ExperimentResults& results, const ResultTable& table);
std::string to_json(const ExperimentResults& results);

/// Writes `<prefix>.<table>.csv` per table, or `<prefix>.json`. Returns the
/// paths written. Throws Error(EmptyResults) or Error(IoError).
std::vector<std::filesystem::path> report_emit(const ExperimentResults& results,
                                               ReportFormat format,
                                               const std::filesystem::path& prefix);

}  // namespace nfzwda
