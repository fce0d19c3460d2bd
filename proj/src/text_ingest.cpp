#include "nfzwda/text_ingest.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>

#include "nfzwda/error.hpp"

namespace nfzwda {

namespace {

constexpr UChar32 kApostrophe = 0x27;
constexpr UChar32 kRightQuote = 0x2019;

bool is_letter(UChar32 c) {
  return c >= 0 && u_hasBinaryProperty(c, UCHAR_ALPHABETIC);
}

bool is_mark(UChar32 c) {
  if (c < 0) return false;
  const auto mask = U_GET_GC_MASK(c);
  return (mask & U_GC_M_MASK) != 0;
}

void append_folded(std::string& out, UChar32 c) {
  const UChar32 folded = u_foldCase(c, U_FOLD_CASE_DEFAULT);
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  U8_APPEND_UNSAFE(buf, len, folded);
  out.append(buf, static_cast<std::size_t>(len));
}

struct CodePoint {
  UChar32 value;
  std::size_t next;
};

CodePoint decode_at(std::string_view text, std::size_t offset) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  auto i = static_cast<int32_t>(offset);
  UChar32 c = 0;
  U8_NEXT(s, i, length, c);
  return {c, static_cast<std::size_t>(i)};
}

std::string read_file(const std::filesystem::path& path, bool& ok) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ok = false;
    return {};
  }
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  ok = !in.bad();
  return data;
}

}  // namespace

TokenSequence::TokenSequence(std::vector<std::string> tokens)
    : tokens_(std::move(tokens)) {
  if (tokens_.empty()) {
    throw Error(ErrorCode::EmptyText, "no word found");
  }
  const auto n = static_cast<double>(tokens_.size());
  positions_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    positions_.push_back(static_cast<double>(i) / n);
  }
}

std::string TokenSequence::joined() const {
  std::string out;
  for (const auto& t : tokens_) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

SegmentMode parse_segment_mode(std::string_view name) {
  if (name == "front") return SegmentMode::Front;
  if (name == "chunks") return SegmentMode::Chunks;
  throw Error(ErrorCode::InvalidArgument,
              "unknown segment mode '" + std::string(name) + "'");
}

const char* to_string(SegmentMode mode) noexcept {
  return mode == SegmentMode::Front ? "front" : "chunks";
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto [c, next] = decode_at(text, i);
    if (is_letter(c) || (!current.empty() && is_mark(c))) {
      append_folded(current, c);
      i = next;
      continue;
    }
    if ((c == kApostrophe || c == kRightQuote) && !current.empty() &&
        next < text.size() && is_letter(decode_at(text, next).value)) {
      current.push_back('\'');
      i = next;
      continue;
    }
    if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
    i = next;
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

TokenSequence tokenize(std::string_view text) {
  return TokenSequence(split_words(text));
}

std::string normalize_word(std::string_view word) {
  std::string out;
  std::size_t i = 0;
  while (i < word.size()) {
    const auto [c, next] = decode_at(word, i);
    if (c == kRightQuote) {
      out.push_back('\'');
    } else if (c >= 0) {
      append_folded(out, c);
    }
    i = next;
  }
  return out;
}

std::vector<TokenSequence> segment(const TokenSequence& seq,
                                   std::size_t word_length, SegmentMode mode) {
  if (word_length == 0) {
    throw Error(ErrorCode::InvalidArgument, "word_length must be >= 1");
  }
  const auto& tokens = seq.tokens();
  const std::size_t n = tokens.size();
  std::vector<TokenSequence> out;
  if (n <= word_length) {
    out.emplace_back(tokens);
    return out;
  }
  if (mode == SegmentMode::Front) {
    out.emplace_back(std::vector<std::string>(
        tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(word_length)));
    return out;
  }
  const std::size_t pieces = n / word_length;
  out.reserve(pieces);
  for (std::size_t p = 0; p < pieces; ++p) {
    const auto first = tokens.begin() + static_cast<std::ptrdiff_t>(p * word_length);
    out.emplace_back(std::vector<std::string>(
        first, first + static_cast<std::ptrdiff_t>(word_length)));
  }
  return out;
}

bool is_valid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  while (i < bytes.size()) {
    const auto [c, next] = decode_at(bytes, i);
    if (c < 0) return false;
    i = next;
  }
  return true;
}

CorpusLoad load_corpus(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::MissingRoot, root.string());
  }

  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& author_dir : fs::directory_iterator(root)) {
    if (!author_dir.is_directory()) continue;
    for (const auto& entry : fs::directory_iterator(author_dir.path())) {
      if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
      files.emplace_back(fs::relative(entry.path(), root).generic_string(),
                         entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  CorpusLoad load;
  for (const auto& [rel, path] : files) {
    bool ok = true;
    std::string text = read_file(path, ok);
    if (!ok) {
      load.errors.push_back({rel, "cannot read file"});
      continue;
    }
    if (!is_valid_utf8(text)) {
      load.errors.push_back({rel, "not valid UTF-8"});
      continue;
    }
    Document doc;
    doc.author_label = path.parent_path().filename().string();
    doc.source_id = rel;
    doc.text = std::move(text);
    load.documents.push_back(std::move(doc));
  }
  return load;
}

Document load_document(const std::filesystem::path& path) {
  bool ok = true;
  std::string text = read_file(path, ok);
  if (!ok) throw Error(ErrorCode::UnreadableFile, path.string());
  if (!is_valid_utf8(text)) {
    throw Error(ErrorCode::UnreadableFile, path.string() + " is not valid UTF-8");
  }
  return Document{std::nullopt, path.generic_string(), std::move(text)};
}

std::vector<Document> longest_documents(std::span<const Document> docs,
                                        std::size_t count) {
  std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> by_author;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto words = split_words(docs[i].text).size();
    by_author[docs[i].author_label.value_or("")].emplace_back(words, i);
  }
  std::vector<bool> keep(docs.size(), false);
  for (auto& [author, entries] : by_author) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t j = 0; j < entries.size() && j < count; ++j) {
      keep[entries[j].second] = true;
    }
  }
  std::vector<Document> out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (keep[i]) out.push_back(docs[i]);
  }
  return out;
}

}  // namespace nfzwda
