#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nfzwda {

/// A text reduced to its ordered word occurrences. Position i is i/n.
class TokenSequence {
public:
  /// Throws Error(EmptyText) when `tokens` is empty.
  explicit TokenSequence(std::vector<std::string> tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::vector<double>& positions() const noexcept { return positions_; }

  /// Tokens joined by single spaces.
  std::string joined() const;

private:
  std::vector<std::string> tokens_;
  std::vector<double> positions_;
};

enum class SegmentMode { Front, Chunks };

SegmentMode parse_segment_mode(std::string_view name);
const char* to_string(SegmentMode mode) noexcept;

struct Document {
  std::optional<std::string> author_label;
  std::string source_id;
  std::string text;
};

/// Splits text into lowercase words. A word is a maximal run of Unicode
/// letters, where a single apostrophe (' or U+2019) between two letters
/// stays inside the word; U+2019 is normalized to '. Digits, hyphens and
/// punctuation separate words. Ill-formed UTF-8 bytes act as separators.
std::vector<std::string> split_words(std::string_view text);

/// Throws Error(EmptyText) if no word is found.
TokenSequence tokenize(std::string_view text);

/// Case-folds a single word with the same rule `tokenize` applies.
std::string normalize_word(std::string_view word);

/// Front mode keeps the first min(word_length, n) tokens. Chunks mode keeps
/// floor(n / word_length) consecutive pieces and drops the remainder, or the
/// whole sequence when it is shorter than word_length. Every output is
/// re-normalized to its own length.
std::vector<TokenSequence> segment(const TokenSequence& seq,
                                   std::size_t word_length, SegmentMode mode);

bool is_valid_utf8(std::string_view bytes);

struct FileError {
  std::string path;
  std::string reason;
};

struct CorpusLoad {
  std::vector<Document> documents;
  std::vector<FileError> errors;
};

/// Reads `<root>/<author>/<doc>.txt`. Documents come back sorted by their
/// relative path. Files that cannot be read or are not UTF-8 are reported in
/// `errors` and skipped. Throws Error(MissingRoot) if root is not a directory.
CorpusLoad load_corpus(const std::filesystem::path& root);

/// Loose text files (no author label), e.g. disputed texts on the CLI.
/// Throws Error(UnreadableFile) on failure.
Document load_document(const std::filesystem::path& path);

/// Keeps the `count` longest documents (by word count) of each author,
/// preserving the input order among the survivors. Ties keep the earlier
/// document.
std::vector<Document> longest_documents(std::span<const Document> docs,
                                        std::size_t count);

}  // namespace nfzwda
