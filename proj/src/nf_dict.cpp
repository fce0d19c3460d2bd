#include "nfzwda/nf_dict.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <unordered_set>

#include "nfzwda/error.hpp"

namespace nfzwda {

namespace {

bool entry_order(const std::pair<std::string, NfValue>& a,
                 const std::pair<std::string, NfValue>& b) {
  if (a.second != b.second) return a.second > b.second;
  return a.first < b.first;
}

bool has_space(std::string_view word) {
  return std::any_of(word.begin(), word.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

NFDictionary::NFDictionary(std::vector<std::pair<std::string, NfValue>> entries,
                           std::string source)
    : source_(std::move(source)) {
  entries_.reserve(entries.size());
  for (auto& [word, count] : entries) {
    if (word.empty() || has_space(word)) {
      throw Error(ErrorCode::InvalidArgument, "invalid dictionary word '" + word + "'");
    }
    f_max_ = std::max(f_max_, count);
    if (!entries_.emplace(std::move(word), count).second) {
      throw Error(ErrorCode::DuplicateWord, "duplicate dictionary word");
    }
  }
}

NfValue NFDictionary::lookup(std::string_view word) const {
  const auto it = entries_.find(word);
  return it == entries_.end() ? 0 : it->second;
}

std::vector<std::pair<std::string, NfValue>> NFDictionary::sorted_entries() const {
  std::vector<std::pair<std::string, NfValue>> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end(), entry_order);
  return out;
}

std::vector<std::string> NFDictionary::top_words(std::size_t count) const {
  auto sorted = sorted_entries();
  std::vector<std::string> out;
  out.reserve(std::min(count, sorted.size()));
  for (std::size_t i = 0; i < sorted.size() && i < count; ++i) {
    out.push_back(std::move(sorted[i].first));
  }
  return out;
}

NFDictionary build_dictionary(std::span<const Document> docs) {
  std::unordered_map<std::string, NfValue> counts;
  for (const auto& doc : docs) {
    for (auto& word : split_words(doc.text)) ++counts[std::move(word)];
  }
  if (counts.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "no document contains a word");
  }
  return NFDictionary({counts.begin(), counts.end()},
                      "corpus of " + std::to_string(docs.size()) + " documents");
}

std::string to_tsv(const NFDictionary& dict) {
  std::string out;
  for (const auto& [word, count] : dict.sorted_entries()) {
    out += word;
    out.push_back('\t');
    out += std::to_string(count);
    out.push_back('\n');
  }
  return out;
}

void save_dictionary(const NFDictionary& dict, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  const auto tsv = to_tsv(dict);
  out.write(tsv.data(), static_cast<std::streamsize>(tsv.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

NFDictionary parse_tsv(std::string_view text, DictionaryFormat format,
                       std::string source) {
  const bool permissive = format == DictionaryFormat::Permissive;
  std::vector<std::pair<std::string, NfValue>> entries;
  std::map<std::string, NfValue> merged;
  std::unordered_set<std::string> seen;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    const auto trimmed = trim(line);
    if (permissive && (trimmed.empty() || trimmed.front() == '#')) continue;

    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
      throw Error(ErrorCode::FormatError, "expected word<TAB>count", line_no);
    }
    auto word = line.substr(0, tab);
    auto count_text = line.substr(tab + 1);
    if (permissive) {
      word = trim(word);
      count_text = trim(count_text);
    } else if (!count_text.empty() && count_text.back() == '\r') {
      count_text.remove_suffix(1);
    }

    NfValue count = 0;
    const auto* first = count_text.data();
    const auto* last = first + count_text.size();
    const auto [ptr, ec] = std::from_chars(first, last, count);
    if (count_text.empty() || ec != std::errc() || ptr != last) {
      throw Error(ErrorCode::FormatError, "bad count '" + std::string(count_text) + "'",
                  line_no);
    }
    if (word.empty() || has_space(word)) {
      throw Error(ErrorCode::FormatError, "bad word", line_no);
    }

    if (permissive) {
      merged[normalize_word(word)] += count;
      continue;
    }
    if (normalize_word(word) != word) {
      throw Error(ErrorCode::FormatError, "word is not normalized", line_no);
    }
    std::pair<std::string, NfValue> entry{std::string(word), count};
    if (!seen.insert(entry.first).second) {
      throw Error(ErrorCode::DuplicateWord, entry.first, line_no);
    }
    if (!entries.empty()) {
      if (!entry_order(entries.back(), entry)) {
        throw Error(ErrorCode::FormatError,
                    "entries must be sorted by descending count then word", line_no);
      }
    }
    entries.push_back(std::move(entry));
  }

  if (permissive) {
    entries.assign(merged.begin(), merged.end());
    merged.clear();
    // Folding can map a word onto an empty string (e.g. only invalid bytes).
    std::erase_if(entries, [](const auto& e) { return e.first.empty(); });
  }
  return NFDictionary(std::move(entries), std::move(source));
}

NFDictionary load_dictionary(const std::filesystem::path& path, DictionaryFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_tsv(data, format, path.string());
}

}  // namespace nfzwda
