#include "nfzwda/delta.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "json_util.hpp"
#include "nfzwda/error.hpp"

namespace nfzwda {

std::vector<double> word_frequencies(const TokenSequence& seq,
                                     std::span<const std::string> words) {
  std::unordered_map<std::string_view, std::size_t> slot;
  for (std::size_t i = 0; i < words.size(); ++i) slot.emplace(words[i], i);
  std::vector<double> counts(words.size(), 0.0);
  for (const auto& token : seq.tokens()) {
    const auto it = slot.find(token);
    if (it != slot.end()) counts[it->second] += 1.0;
  }
  const auto n = static_cast<double>(seq.size());
  for (auto& c : counts) c /= n;
  return counts;
}

std::vector<double> DeltaProfile::z_scores(std::span<const double> frequencies) const {
  std::vector<double> z(words.size(), 0.0);
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (stdev[w] > 0.0) z[w] = (frequencies[w] - mean[w]) / stdev[w];
  }
  return z;
}

DeltaProfile build_profile(std::span<const LabeledText> train, const NFDictionary& dict,
                           std::size_t n_words) {
  if (train.empty()) throw Error(ErrorCode::EmptyTraining, "no training texts");
  if (n_words == 0) throw Error(ErrorCode::InvalidArgument, "n_words must be >= 1");

  DeltaProfile profile;
  profile.words = dict.top_words(n_words);
  const std::size_t n = profile.words.size();

  std::vector<std::vector<double>> freqs;
  freqs.reserve(train.size());
  for (const auto& t : train) freqs.push_back(word_frequencies(t.tokens, profile.words));

  const auto count = static_cast<double>(train.size());
  profile.mean.assign(n, 0.0);
  profile.stdev.assign(n, 0.0);
  for (const auto& f : freqs) {
    for (std::size_t w = 0; w < n; ++w) profile.mean[w] += f[w];
  }
  for (auto& m : profile.mean) m /= count;
  for (const auto& f : freqs) {
    for (std::size_t w = 0; w < n; ++w) {
      const double d = f[w] - profile.mean[w];
      profile.stdev[w] += d * d;
    }
  }
  for (auto& s : profile.stdev) s = std::sqrt(s / count);

  std::map<std::string, std::size_t> texts_per_author;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto z = profile.z_scores(freqs[i]);
    auto& sum = profile.authors[train[i].label];
    if (sum.empty()) sum.assign(n, 0.0);
    for (std::size_t w = 0; w < n; ++w) sum[w] += z[w];
    ++texts_per_author[train[i].label];
  }
  for (auto& [author, sum] : profile.authors) {
    const auto k = static_cast<double>(texts_per_author[author]);
    for (auto& v : sum) v /= k;
  }
  return profile;
}

double delta_score(const DeltaProfile& profile, const TokenSequence& seq,
                   std::string_view author) {
  const auto it = profile.authors.find(std::string(author));
  if (it == profile.authors.end()) {
    throw Error(ErrorCode::UnknownAuthor, std::string(author));
  }
  if (profile.words.empty()) return 0.0;
  const auto z = profile.z_scores(word_frequencies(seq, profile.words));
  double sum = 0.0;
  for (std::size_t w = 0; w < z.size(); ++w) sum += std::abs(it->second[w] - z[w]);
  return sum / static_cast<double>(z.size());
}

std::vector<DeltaScore> delta_ranking(const DeltaProfile& profile, const TokenSequence& seq) {
  if (profile.authors.empty()) throw Error(ErrorCode::EmptyTraining, "profile has no authors");
  std::vector<DeltaScore> scores;
  scores.reserve(profile.authors.size());
  for (const auto& [author, signature] : profile.authors) {
    scores.push_back({author, delta_score(profile, seq, author)});
  }
  // Authors come out of the map in ascending order; stable_sort keeps that
  // order among equal scores.
  std::stable_sort(scores.begin(), scores.end(),
                   [](const DeltaScore& a, const DeltaScore& b) { return a.score < b.score; });
  return scores;
}

DeltaScore delta_attribute(const DeltaProfile& profile, const TokenSequence& seq) {
  return delta_ranking(profile, seq).front();
}

std::optional<std::string> delta_open_attribute(const DeltaProfile& profile,
                                                const TokenSequence& seq, double threshold) {
  auto best = delta_attribute(profile, seq);
  if (best.score <= threshold) return std::move(best.author);
  return std::nullopt;
}

bool delta_in_top_k(const DeltaProfile& profile, const TokenSequence& seq,
                    std::string_view author, std::size_t k) {
  const auto ranking = delta_ranking(profile, seq);
  for (std::size_t i = 0; i < ranking.size() && i < k; ++i) {
    if (ranking[i].author == author) return true;
  }
  return false;
}

std::string DeltaProfile::to_json() const {
  nlohmann::json j;
  j["format"] = "nfzwda-delta-profile";
  j["version"] = 1;
  j["words"] = words;
  j["mean"] = mean;
  j["stdev"] = stdev;
  j["authors"] = authors;
  return j.dump();
}

DeltaProfile DeltaProfile::from_json(std::string_view text) {
  return detail::parse_guarded([&] {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "nfzwda-delta-profile") {
      throw Error(ErrorCode::FormatError, "not a Delta profile document");
    }
    DeltaProfile p;
    p.words = j.at("words").get<std::vector<std::string>>();
    p.mean = j.at("mean").get<std::vector<double>>();
    p.stdev = j.at("stdev").get<std::vector<double>>();
    p.authors = j.at("authors").get<std::map<std::string, std::vector<double>>>();
    const auto n = p.words.size();
    bool ok = p.mean.size() == n && p.stdev.size() == n;
    for (const auto& [a, v] : p.authors) ok = ok && v.size() == n;
    if (!ok) throw Error(ErrorCode::FormatError, "profile vectors differ in length");
    return p;
  });
}

}  // namespace nfzwda
