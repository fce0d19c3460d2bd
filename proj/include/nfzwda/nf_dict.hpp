#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nfzwda/text_ingest.hpp"

namespace nfzwda {

using NfValue = std::uint64_t;

/// Word -> natural frequency (raw corpus count). Immutable once built.
class NFDictionary {
public:
  NFDictionary() = default;

  /// Words must be nonempty and already normalized; throws
  /// Error(DuplicateWord) on repeats and Error(InvalidArgument) otherwise.
  NFDictionary(std::vector<std::pair<std::string, NfValue>> entries,
               std::string source = {});

  /// 0 for unknown words.
  NfValue lookup(std::string_view word) const;

  NfValue f_max() const noexcept { return f_max_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::string& source() const noexcept { return source_; }

  /// Entries sorted by descending count, then ascending word.
  std::vector<std::pair<std::string, NfValue>> sorted_entries() const;

  /// The `count` highest-NF words in sorted_entries() order.
  std::vector<std::string> top_words(std::size_t count) const;

  friend bool operator==(const NFDictionary& a, const NFDictionary& b) {
    return a.f_max_ == b.f_max_ && a.entries_ == b.entries_;
  }

private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::unordered_map<std::string, NfValue, Hash, std::equal_to<>> entries_;
  NfValue f_max_ = 0;
  std::string source_;
};

/// Counts every word occurrence across the documents. Throws
/// Error(EmptyCorpus) when no document contains a word.
NFDictionary build_dictionary(std::span<const Document> docs);

enum class DictionaryFormat {
  /// `word<TAB>count` lines in descending count then ascending word order.
  Canonical,
  /// Any order, words re-normalized, case-folded duplicates summed, blank and
  /// '#' lines skipped.
  Permissive,
};

void save_dictionary(const NFDictionary& dict, const std::filesystem::path& path);
std::string to_tsv(const NFDictionary& dict);

NFDictionary load_dictionary(const std::filesystem::path& path,
                             DictionaryFormat format = DictionaryFormat::Canonical);
NFDictionary parse_tsv(std::string_view text,
                       DictionaryFormat format = DictionaryFormat::Canonical,
                       std::string source = {});

}  // namespace nfzwda
