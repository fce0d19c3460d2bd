#include "nfzwda/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <set>

#include "json_util.hpp"
#include "nfzwda/attribution.hpp"
#include "nfzwda/delta.hpp"
#include "nfzwda/error.hpp"
#include "nfzwda/parallel.hpp"
#include "nfzwda/text_ingest.hpp"

namespace nfzwda {

namespace {

// ---------------------------------------------------------------- parsing

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string_view unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string> split_list(std::string_view value) {
  value = trim(value);
  if (!value.empty() && value.front() == '[' && value.back() == ']') {
    value = value.substr(1, value.size() - 2);
  }
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    auto end = value.find(',', start);
    if (end == std::string_view::npos) end = value.size();
    const auto item = unquote(value.substr(start, end - start));
    if (!item.empty()) out.emplace_back(item);
    start = end + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view text, std::string_view key) {
  text = unquote(text);
  T value{};
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::InvalidArgument,
                "bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

std::size_t parse_positive(std::string_view text, std::string_view key) {
  const auto v = parse_number<std::size_t>(text, key);
  if (v == 0) throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be >= 1");
  return v;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

// ------------------------------------------------------------ randomness

// Uniform integer in [0, bound) from raw engine output, so that sampled
// subsets do not depend on the standard library's distribution code.
std::uint64_t bounded(std::mt19937_64& engine, std::uint64_t bound) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
  for (;;) {
    const std::uint64_t x = engine();
    if (x < limit) return x % bound;
  }
}

std::vector<std::string> sample_authors(std::vector<std::string> pool, std::size_t count,
                                        std::mt19937_64& engine) {
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + bounded(engine, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

// ----------------------------------------------------------- data set up

struct Corpus {
  std::vector<Document> docs;
  std::vector<std::string> labels;  // per doc
};

Corpus load_labelled(const std::filesystem::path& root, std::size_t longest,
                     std::vector<std::pair<std::string, std::string>>& header) {
  auto load = load_corpus(root);
  for (const auto& e : load.errors) {
    header.emplace_back("skipped_file", root.generic_string() + "/" + e.path + ": " + e.reason);
  }
  Corpus c;
  c.docs = longest > 0 ? longest_documents(load.documents, longest) : std::move(load.documents);
  for (const auto& d : c.docs) c.labels.push_back(d.author_label.value_or(""));
  return c;
}

std::vector<std::string> distinct(const std::vector<std::string>& labels) {
  std::set<std::string> s(labels.begin(), labels.end());
  return {s.begin(), s.end()};
}

std::shared_ptr<const NFDictionary> obtain_dictionary(const ExperimentConfig& config,
                                                      const Corpus& train) {
  if (!config.dictionary.empty()) {
    return std::make_shared<const NFDictionary>(
        load_dictionary(config.dictionary, config.dictionary_format));
  }
  return std::make_shared<const NFDictionary>(build_dictionary(train.docs));
}

std::vector<TokenSequence> front_samples(const Corpus& corpus, std::size_t word_length) {
  std::vector<std::optional<TokenSequence>> slots(corpus.docs.size());
  detail::parallel_for(corpus.docs.size(), [&](std::size_t i) {
    try {
      slots[i] = front_sample(corpus.docs[i], word_length);
    } catch (const Error& e) {
      throw Error(e.code(), corpus.docs[i].source_id + ": " + e.what());
    }
  });
  std::vector<TokenSequence> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<StyleVector> vectors_of(const std::vector<TokenSequence>& samples,
                                    const NFDictionary& dict, const PartitionScheme& scheme,
                                    OdvMode mode) {
  std::vector<StyleVector> out(samples.size());
  detail::parallel_for(samples.size(), [&](std::size_t i) {
    out[i] = style_vector(samples[i], dict, scheme, mode);
  });
  return out;
}

std::string nfz_method(const PartitionScheme& scheme, FeatureSelector selector) {
  return "nfz-" + scheme.name() + "-" + to_string(selector);
}

std::string nfz_params(const PartitionScheme& scheme, OdvMode mode, FeatureSelector selector) {
  return scheme.describe() + ";odv=" + to_string(mode) + ";features=" + to_string(selector);
}

std::string delta_method(std::size_t n, std::size_t k) {
  auto m = "delta-" + std::to_string(n);
  if (k > 1) m += "-top" + std::to_string(k);
  return m;
}

std::string percent(std::size_t num, std::size_t den) {
  char buf[64];
  const double p = den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
  std::snprintf(buf, sizeof buf, "%.2f%%(%zu/%zu)", p, num, den);
  return buf;
}

// Indices of documents written by `authors`, at most `limit` per author
// (0 = unlimited), in corpus order.
std::vector<std::size_t> select_docs(const Corpus& corpus, const std::vector<std::string>& authors,
                                     std::size_t limit) {
  std::map<std::string, std::size_t> taken;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    const auto& label = corpus.labels[i];
    if (!std::binary_search(authors.begin(), authors.end(), label)) continue;
    auto& t = taken[label];
    if (limit != 0 && t >= limit) continue;
    ++t;
    out.push_back(i);
  }
  return out;
}

std::size_t min_docs_per_author(const Corpus& corpus, const std::vector<std::string>& authors) {
  std::map<std::string, std::size_t> counts;
  for (const auto& l : corpus.labels) ++counts[l];
  std::size_t m = std::numeric_limits<std::size_t>::max();
  for (const auto& a : authors) m = std::min(m, counts[a]);
  return m;
}

struct SweepPoint {
  std::string sweep;
  std::string value;
  std::vector<std::vector<std::string>> subsets;  // one per repetition
  std::size_t train_limit = 0;
  std::size_t test_limit = 0;
};

}  // namespace

// ------------------------------------------------------------ config API

std::vector<AuthorCountPoint> parse_author_counts(std::string_view spec) {
  std::vector<AuthorCountPoint> out;
  for (const auto& item : split_list(spec)) {
    const auto colon = item.find(':');
    std::string_view range = item;
    std::size_t reps = 1;
    if (colon != std::string::npos) {
      range = std::string_view(item).substr(0, colon);
      reps = parse_positive(std::string_view(item).substr(colon + 1), "author_counts");
    }
    const auto dash = range.find('-');
    std::size_t lo = 0;
    std::size_t hi = 0;
    if (dash == std::string_view::npos) {
      lo = hi = parse_positive(range, "author_counts");
    } else {
      lo = parse_positive(range.substr(0, dash), "author_counts");
      hi = parse_positive(range.substr(dash + 1), "author_counts");
    }
    if (lo < 2 || hi < lo) {
      throw Error(ErrorCode::InvalidArgument, "bad author count range '" + item + "'");
    }
    for (std::size_t c = lo; c <= hi; ++c) out.push_back({c, reps});
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_train_test_counts(std::string_view spec) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (unquote(spec) == "grid") {
    for (std::size_t tr = 5; tr <= 30; tr += 5) {
      for (std::size_t te = 5; te <= 30; te += 5) out.emplace_back(tr, te);
    }
    return out;
  }
  for (const auto& item : split_list(spec)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "expected train:test, got '" + item + "'");
    }
    out.emplace_back(parse_positive(std::string_view(item).substr(0, colon), "train_test_counts"),
                     parse_positive(std::string_view(item).substr(colon + 1), "train_test_counts"));
  }
  return out;
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view raw) {
  const auto value = unquote(raw);
  if (key == "train_corpus") {
    config.train_corpus = std::string(value);
  } else if (key == "test_corpus") {
    config.test_corpus = std::string(value);
  } else if (key == "open_in_corpus") {
    config.open_in_corpus = std::string(value);
  } else if (key == "open_out_corpus") {
    config.open_out_corpus = std::string(value);
  } else if (key == "dictionary") {
    config.dictionary = std::string(value);
  } else if (key == "dictionary_format") {
    if (value == "canonical") config.dictionary_format = DictionaryFormat::Canonical;
    else if (value == "permissive") config.dictionary_format = DictionaryFormat::Permissive;
    else throw Error(ErrorCode::InvalidArgument, "dictionary_format is canonical or permissive");
  } else if (key == "partition" || key == "partitions") {
    config.partitions = split_list(raw);
    if (config.partitions.empty()) throw Error(ErrorCode::InvalidArgument, "no partition given");
    config.schemes();
  } else if (key == "L") {
    config.base_size = parse_positive(value, key);
  } else if (key == "R") {
    config.radix = parse_number<std::uint64_t>(value, key);
    if (config.radix < 2) throw Error(ErrorCode::InvalidArgument, "R must be > 1");
  } else if (key == "r") {
    config.ratio = parse_number<double>(value, key);
    if (!(config.ratio > 1.0)) throw Error(ErrorCode::InvalidArgument, "r must be > 1");
  } else if (key == "odv_mode") {
    config.mode = parse_odv_mode(value);
  } else if (key == "word_lengths" || key == "word_length") {
    config.word_lengths.clear();
    for (const auto& v : split_list(raw)) config.word_lengths.push_back(parse_positive(v, key));
    if (config.word_lengths.empty()) throw Error(ErrorCode::InvalidArgument, "no word length");
  } else if (key == "features") {
    config.selectors.clear();
    for (const auto& v : split_list(raw)) config.selectors.push_back(parse_feature_selector(v));
    if (config.selectors.empty()) throw Error(ErrorCode::InvalidArgument, "no feature selector");
  } else if (key == "author_counts") {
    config.author_counts = parse_author_counts(raw);
  } else if (key == "train_test_counts") {
    config.train_test_counts = parse_train_test_counts(raw);
  } else if (key == "delta_n_words") {
    config.delta_n_words.clear();
    for (const auto& v : split_list(raw)) config.delta_n_words.push_back(parse_positive(v, key));
  } else if (key == "delta_top_k") {
    config.delta_top_k = parse_positive(value, key);
  } else if (key == "delta_threshold") {
    if (value.empty() || value == "none") config.delta_threshold.reset();
    else config.delta_threshold = parse_number<double>(value, key);
  } else if (key == "theta") {
    config.theta = parse_number<double>(value, key);
    if (!(config.theta > 0.0 && config.theta <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 1]");
    }
  } else if (key == "longest_chapters" || key == "longest_documents") {
    config.longest_documents = parse_number<std::size_t>(value, key);
  } else if (key == "seed") {
    config.seed = parse_number<std::uint64_t>(value, key);
  } else if (key == "svm_c") {
    config.svm.c = parse_number<double>(value, key);
  } else if (key == "svm_tolerance") {
    config.svm.tolerance = parse_number<double>(value, key);
  } else if (key == "svm_max_iterations") {
    config.svm.max_iterations = parse_positive(value, key);
  } else if (key == "output") {
    config.output = std::string(value);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown setting '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_experiment_config(std::string_view text) {
  ExperimentConfig config;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    // Comments start at '#' outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::FormatError, "expected key = value", line_no);
    }
    try {
      apply_setting(config, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::FormatError, e.what(), line_no);
    }
  }
  return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_experiment_config(text);
}

std::vector<PartitionScheme> ExperimentConfig::schemes() const {
  std::vector<PartitionScheme> out;
  for (const auto& name : partitions) {
    out.push_back(PartitionScheme::from_name(name, base_size, radix, ratio));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("train_corpus", train_corpus.generic_string());
  out.emplace_back("test_corpus", test_corpus.generic_string());
  out.emplace_back("open_in_corpus", open_in_corpus.generic_string());
  out.emplace_back("open_out_corpus", open_out_corpus.generic_string());
  out.emplace_back("dictionary", dictionary.empty() ? "<train_corpus>" : dictionary.generic_string());
  out.emplace_back("dictionary_format",
                   dictionary_format == DictionaryFormat::Canonical ? "canonical" : "permissive");
  std::vector<std::string> schemes_text;
  for (const auto& s : schemes()) schemes_text.push_back(s.describe());
  out.emplace_back("partitions", join(schemes_text, ","));
  out.emplace_back("odv_mode", to_string(mode));
  std::vector<std::string> items;
  for (const auto w : word_lengths) items.push_back(std::to_string(w));
  out.emplace_back("word_lengths", join(items, ","));
  items.clear();
  for (const auto s : selectors) items.emplace_back(to_string(s));
  out.emplace_back("features", join(items, ","));
  items.clear();
  for (const auto& p : author_counts) {
    items.push_back(std::to_string(p.count) + ":" + std::to_string(p.repetitions));
  }
  out.emplace_back("author_counts", join(items, ","));
  items.clear();
  for (const auto& [tr, te] : train_test_counts) {
    items.push_back(std::to_string(tr) + ":" + std::to_string(te));
  }
  out.emplace_back("train_test_counts", join(items, ","));
  items.clear();
  for (const auto n : delta_n_words) items.push_back(std::to_string(n));
  out.emplace_back("delta_n_words", join(items, ","));
  out.emplace_back("delta_top_k", std::to_string(delta_top_k));
  out.emplace_back("delta_threshold", delta_threshold ? format_g(*delta_threshold) : "none");
  out.emplace_back("theta", format_g(theta));
  out.emplace_back("longest_chapters", std::to_string(longest_documents));
  out.emplace_back("seed", std::to_string(seed));
  out.emplace_back("svm_c", format_g(svm.c));
  out.emplace_back("svm_tolerance", format_g(svm.tolerance));
  out.emplace_back("svm_max_iterations", std::to_string(svm.max_iterations));
  return out;
}

bool ExperimentResults::empty() const {
  return std::all_of(tables.begin(), tables.end(),
                     [](const ResultTable& t) { return t.rows.empty(); });
}

const ResultTable* ExperimentResults::find(std::string_view name) const {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

// ------------------------------------------------------------ closed set

ExperimentResults run_closed_experiment(const ExperimentConfig& config) {
  if (!config.has_closed()) {
    throw Error(ErrorCode::InvalidArgument, "closed experiment needs train_corpus and test_corpus");
  }
  ExperimentResults results;
  results.header = config.echo();
  results.header.emplace_back("experiment", "closed");

  const auto train = load_labelled(config.train_corpus, config.longest_documents, results.header);
  const auto test = load_labelled(config.test_corpus, config.longest_documents, results.header);
  const auto train_authors = distinct(train.labels);
  if (train_authors.size() < 2) {
    throw Error(ErrorCode::SingleClass, "training corpus has fewer than two authors");
  }
  for (const auto& l : distinct(test.labels)) {
    if (!std::binary_search(train_authors.begin(), train_authors.end(), l)) {
      throw Error(ErrorCode::InvalidArgument, "test author '" + l + "' has no training texts");
    }
  }
  if (test.docs.empty()) throw Error(ErrorCode::EmptyTest, "test corpus is empty");
  std::vector<std::string> authors;
  for (const auto& a : distinct(test.labels)) authors.push_back(a);
  if (authors.size() < 2) throw Error(ErrorCode::SingleClass, "test corpus has fewer than two authors");

  const auto dict = obtain_dictionary(config, train);
  results.header.emplace_back("dictionary_entries", std::to_string(dict->size()));
  const auto schemes = config.schemes();

  // Sweep points and sampled author subsets are fixed before any run so that
  // every word length and method sees the same subsets.
  std::vector<SweepPoint> points;
  if (config.author_counts.empty() && config.train_test_counts.empty()) {
    points.push_back({"all", "all", {authors}, 0, 0});
  }
  std::mt19937_64 engine(config.seed);
  for (const auto& p : config.author_counts) {
    if (p.count > authors.size()) {
      results.header.emplace_back("skipped_point", "authors=" + std::to_string(p.count));
      continue;
    }
    SweepPoint point{"authors", std::to_string(p.count), {}, 0, 0};
    for (std::size_t r = 0; r < p.repetitions; ++r) {
      point.subsets.push_back(sample_authors(authors, p.count, engine));
    }
    points.push_back(std::move(point));
  }
  const auto max_train = min_docs_per_author(train, authors);
  const auto max_test = min_docs_per_author(test, authors);
  for (const auto& [tr, te] : config.train_test_counts) {
    const auto value = std::to_string(tr) + ":" + std::to_string(te);
    if (tr > max_train || te > max_test) {
      results.header.emplace_back("skipped_point", "train_test=" + value);
      continue;
    }
    points.push_back({"train_test", value, {authors}, tr, te});
  }

  ResultTable runs{"runs",
                   {"experiment", "word_length", "sweep", "sweep_value", "rep", "method", "params",
                    "authors", "n_train", "n_test", "accuracy"},
                   {}};
  ResultTable summary{"summary",
                      {"experiment", "word_length", "sweep", "sweep_value", "method", "params",
                       "repetitions", "accuracy_mean", "accuracy_min", "accuracy_max"},
                      {}};

  for (const auto word_length : config.word_lengths) {
    const auto train_tokens = front_samples(train, word_length);
    const auto test_tokens = front_samples(test, word_length);
    std::vector<std::vector<StyleVector>> train_vectors;
    std::vector<std::vector<StyleVector>> test_vectors;
    for (const auto& scheme : schemes) {
      train_vectors.push_back(vectors_of(train_tokens, *dict, scheme, config.mode));
      test_vectors.push_back(vectors_of(test_tokens, *dict, scheme, config.mode));
    }

    for (const auto& point : points) {
      // method -> accuracies over repetitions, in method order
      std::vector<std::pair<std::string, std::string>> methods;
      std::map<std::string, std::vector<double>> accuracies;
      const auto record = [&](std::size_t rep, const std::string& method,
                              const std::string& params, const std::vector<std::string>& subset,
                              std::size_t n_train, std::size_t n_test, double accuracy) {
        if (rep == 0) methods.emplace_back(method, params);
        accuracies[method].push_back(accuracy);
        runs.rows.push_back({Cell{"closed"}, Cell{static_cast<std::int64_t>(word_length)},
                             Cell{point.sweep}, Cell{point.value},
                             Cell{static_cast<std::int64_t>(rep)}, Cell{method}, Cell{params},
                             Cell{join(subset, "|")}, Cell{static_cast<std::int64_t>(n_train)},
                             Cell{static_cast<std::int64_t>(n_test)}, Cell{accuracy}});
      };

      for (std::size_t rep = 0; rep < point.subsets.size(); ++rep) {
        const auto& subset = point.subsets[rep];
        const auto train_idx = select_docs(train, subset, point.train_limit);
        const auto test_idx = select_docs(test, subset, point.test_limit);

        for (std::size_t s = 0; s < schemes.size(); ++s) {
          for (const auto selector : config.selectors) {
            std::vector<Sample> train_samples;
            for (const auto i : train_idx) {
              train_samples.push_back({train_vectors[s][i], train.labels[i], train.docs[i].source_id});
            }
            std::vector<Sample> test_samples;
            for (const auto i : test_idx) {
              test_samples.push_back({test_vectors[s][i], test.labels[i], test.docs[i].source_id});
            }
            const auto model = nfzwda::train(train_samples, config.svm, selector);
            const auto report = evaluate(model, test_samples);
            record(rep, nfz_method(schemes[s], selector),
                   nfz_params(schemes[s], config.mode, selector), subset,
                   train_idx.size(), test_idx.size(), report.accuracy);
          }
        }

        for (const auto n_words : config.delta_n_words) {
          std::vector<LabeledText> texts;
          for (const auto i : train_idx) texts.push_back({train_tokens[i], train.labels[i]});
          const auto profile = build_profile(texts, *dict, n_words);
          std::size_t correct = 0;
          std::size_t correct_top_k = 0;
          for (const auto i : test_idx) {
            const auto ranking = delta_ranking(profile, test_tokens[i]);
            if (ranking.front().author == test.labels[i]) ++correct;
            for (std::size_t r = 0; r < ranking.size() && r < config.delta_top_k; ++r) {
              if (ranking[r].author == test.labels[i]) ++correct_top_k;
            }
          }
          const auto total = static_cast<double>(test_idx.size());
          const auto params = "N=" + std::to_string(profile.words.size());
          record(rep, delta_method(n_words, 1), params + ";top_k=1", subset, train_idx.size(),
                 test_idx.size(), static_cast<double>(correct) / total);
          if (config.delta_top_k > 1) {
            record(rep, delta_method(n_words, config.delta_top_k),
                   params + ";top_k=" + std::to_string(config.delta_top_k), subset,
                   train_idx.size(), test_idx.size(), static_cast<double>(correct_top_k) / total);
          }
        }
      }

      for (const auto& [method, params] : methods) {
        const auto& acc = accuracies[method];
        double sum = 0.0;
        for (const auto a : acc) sum += a;
        summary.rows.push_back({Cell{"closed"}, Cell{static_cast<std::int64_t>(word_length)},
                                Cell{point.sweep}, Cell{point.value}, Cell{method}, Cell{params},
                                Cell{static_cast<std::int64_t>(acc.size())},
                                Cell{sum / static_cast<double>(acc.size())},
                                Cell{*std::min_element(acc.begin(), acc.end())},
                                Cell{*std::max_element(acc.begin(), acc.end())}});
      }
    }
  }

  results.tables.push_back(std::move(summary));
  results.tables.push_back(std::move(runs));
  return results;
}

// -------------------------------------------------------------- open set

ExperimentResults run_open_experiment(const ExperimentConfig& config) {
  if (!config.has_open()) {
    throw Error(ErrorCode::InvalidArgument,
                "open experiment needs train_corpus and open_in_corpus/open_out_corpus");
  }
  ExperimentResults results;
  results.header = config.echo();
  results.header.emplace_back("experiment", "open");

  const auto train = load_labelled(config.train_corpus, config.longest_documents, results.header);
  const auto candidates = distinct(train.labels);
  if (candidates.size() < 2) {
    throw Error(ErrorCode::SingleClass, "training corpus has fewer than two authors");
  }

  struct LongText {
    const Document* doc;
    std::string author;
    bool in_set;
  };
  Corpus in_corpus;
  Corpus out_corpus;
  if (!config.open_in_corpus.empty()) {
    in_corpus = load_labelled(config.open_in_corpus, 0, results.header);
  }
  if (!config.open_out_corpus.empty()) {
    out_corpus = load_labelled(config.open_out_corpus, 0, results.header);
  }
  std::vector<LongText> texts;
  for (std::size_t i = 0; i < in_corpus.docs.size(); ++i) {
    if (!std::binary_search(candidates.begin(), candidates.end(), in_corpus.labels[i])) {
      throw Error(ErrorCode::InvalidArgument,
                  "in-set text " + in_corpus.docs[i].source_id + " is not by a candidate author");
    }
    texts.push_back({&in_corpus.docs[i], in_corpus.labels[i], true});
  }
  for (std::size_t i = 0; i < out_corpus.docs.size(); ++i) {
    if (std::binary_search(candidates.begin(), candidates.end(), out_corpus.labels[i])) {
      throw Error(ErrorCode::InvalidArgument, "out-of-set text " + out_corpus.docs[i].source_id +
                                                  " is by a candidate author");
    }
    texts.push_back({&out_corpus.docs[i], out_corpus.labels[i], false});
  }
  if (texts.empty()) throw Error(ErrorCode::EmptyTest, "no long texts to attribute");

  const auto dict = obtain_dictionary(config, train);
  results.header.emplace_back("dictionary_entries", std::to_string(dict->size()));
  results.header.emplace_back("candidates", join(candidates, "|"));
  const auto schemes = config.schemes();

  ResultTable runs{"runs",
                   {"experiment", "word_length", "method", "params", "subset_id", "true_author",
                    "in_set", "segments", "decision", "score", "correct", "counts"},
                   {}};
  ResultTable summary{"summary",
                      {"experiment", "word_length", "method", "params", "in_set_total",
                       "in_set_accepted", "in_set_correct", "out_total", "out_rejected",
                       "accuracy", "rates"},
                      {}};

  struct Tally {
    std::size_t in_total = 0, in_accepted = 0, in_correct = 0, out_total = 0, out_rejected = 0;
  };
  const auto add_summary = [&](std::size_t word_length, const std::string& method,
                               const std::string& params, const Tally& t) {
    const auto total = t.in_total + t.out_total;
    const auto correct = t.in_correct + t.out_rejected;
    std::string rates = "Accepted: " + percent(t.in_accepted, t.in_total) +
                        "; Rejected: " + percent(t.out_rejected, t.out_total) +
                        "; Attribution Accuracy: " + percent(t.in_correct, t.in_accepted);
    summary.rows.push_back(
        {Cell{"open"}, Cell{static_cast<std::int64_t>(word_length)}, Cell{method}, Cell{params},
         Cell{static_cast<std::int64_t>(t.in_total)}, Cell{static_cast<std::int64_t>(t.in_accepted)},
         Cell{static_cast<std::int64_t>(t.in_correct)}, Cell{static_cast<std::int64_t>(t.out_total)},
         Cell{static_cast<std::int64_t>(t.out_rejected)},
         Cell{total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total)},
         Cell{rates}});
  };

  for (const auto word_length : config.word_lengths) {
    for (const auto& scheme : schemes) {
      for (const auto selector : config.selectors) {
        PipelineConfig pipeline;
        pipeline.scheme = scheme;
        pipeline.mode = config.mode;
        pipeline.word_length = word_length;
        pipeline.selector = selector;
        pipeline.svm = config.svm;
        const auto attributor = BasicAttributor::train(train.docs, dict, pipeline);
        const auto method = nfz_method(scheme, selector);
        const auto params = nfz_params(scheme, config.mode, selector);
        Tally tally;
        for (const auto& t : texts) {
          const auto report = open_attribute(*t.doc, attributor, word_length, config.theta);
          const bool accepted = report.decision.has_value();
          const bool correct = t.in_set ? (accepted && *report.decision == t.author) : !accepted;
          if (t.in_set) {
            ++tally.in_total;
            tally.in_accepted += accepted;
            tally.in_correct += correct;
          } else {
            ++tally.out_total;
            tally.out_rejected += !accepted;
          }
          std::vector<std::string> counts;
          for (const auto& c : report.candidates) {
            counts.push_back(c.label + ":" + std::to_string(c.attributed_count));
          }
          runs.rows.push_back({Cell{"open"}, Cell{static_cast<std::int64_t>(word_length)},
                               Cell{method}, Cell{params}, Cell{report.subset_id}, Cell{t.author},
                               Cell{static_cast<std::int64_t>(t.in_set)},
                               Cell{static_cast<std::int64_t>(report.segments)},
                               Cell{report.decision.value_or("Reject")},
                               Cell{report.max_confidence}, Cell{static_cast<std::int64_t>(correct)},
                               Cell{join(counts, "|")}});
        }
        add_summary(word_length, method, params, tally);
      }
    }

    if (config.delta_threshold) {
      const auto train_tokens = front_samples(train, word_length);
      std::vector<LabeledText> labelled;
      for (std::size_t i = 0; i < train.docs.size(); ++i) {
        labelled.push_back({train_tokens[i], train.labels[i]});
      }
      for (const auto n_words : config.delta_n_words) {
        const auto profile = build_profile(labelled, *dict, n_words);
        const auto method = delta_method(n_words, 1) + "-open";
        const auto params = "N=" + std::to_string(profile.words.size()) +
                            ";threshold=" + format_g(*config.delta_threshold);
        Tally tally;
        for (const auto& t : texts) {
          // Delta sees the same words the confidence scheme segments.
          const auto words = split_words(t.doc->text);
          if (words.empty()) throw Error(ErrorCode::NoSegments, t.doc->source_id);
          const auto pieces = segment(TokenSequence(words), word_length, SegmentMode::Chunks);
          std::vector<std::string> used;
          for (const auto& p : pieces) {
            used.insert(used.end(), p.tokens().begin(), p.tokens().end());
          }
          const auto best = delta_attribute(profile, TokenSequence(std::move(used)));
          const bool accepted = best.score <= *config.delta_threshold;
          const bool correct = t.in_set ? (accepted && best.author == t.author) : !accepted;
          if (t.in_set) {
            ++tally.in_total;
            tally.in_accepted += accepted;
            tally.in_correct += correct;
          } else {
            ++tally.out_total;
            tally.out_rejected += !accepted;
          }
          runs.rows.push_back({Cell{"open"}, Cell{static_cast<std::int64_t>(word_length)},
                               Cell{method}, Cell{params}, Cell{t.doc->source_id}, Cell{t.author},
                               Cell{static_cast<std::int64_t>(t.in_set)},
                               Cell{static_cast<std::int64_t>(pieces.size())},
                               Cell{accepted ? best.author : std::string("Reject")},
                               Cell{best.score}, Cell{static_cast<std::int64_t>(correct)},
                               Cell{best.author}});
        }
        add_summary(word_length, method, params, tally);
      }
    }
  }

  results.tables.push_back(std::move(summary));
  results.tables.push_back(std::move(runs));
  return results;
}

// --------------------------------------------------------------- emitting

namespace {

std::string csv_field(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  const auto& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

nlohmann::ordered_json json_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  return std::get<std::string>(cell);
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace

std::string to_csv(const ExperimentResults& results, const ResultTable& table) {
  std::string out;
  for (const auto& [key, value] : results.header) {
    out += "# " + key + " = " + value + "\n";
  }
  out += join(table.columns, ",") + "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ExperimentResults& results) {
  nlohmann::ordered_json j;
  auto header = nlohmann::ordered_json::array();
  for (const auto& [key, value] : results.header) header.push_back({key, value});
  j["header"] = std::move(header);
  auto tables = nlohmann::ordered_json::object();
  for (const auto& t : results.tables) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json r = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
        r[t.columns[i]] = json_cell(row[i]);
      }
      rows.push_back(std::move(r));
    }
    tables[t.name] = {{"columns", t.columns}, {"rows", std::move(rows)}};
  }
  j["tables"] = std::move(tables);
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> report_emit(const ExperimentResults& results,
                                               ReportFormat format,
                                               const std::filesystem::path& prefix) {
  if (results.empty()) throw Error(ErrorCode::EmptyResults, "nothing to write");
  if (prefix.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(prefix.parent_path(), ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + prefix.parent_path().string());
  }
  std::vector<std::filesystem::path> written;
  if (format == ReportFormat::Json) {
    auto path = prefix;
    path += ".json";
    write_file(path, to_json(results));
    written.push_back(std::move(path));
    return written;
  }
  for (const auto& t : results.tables) {
    auto path = prefix;
    path += "." + t.name + ".csv";
    write_file(path, to_csv(results, t));
    written.push_back(std::move(path));
  }
  return written;
}

}  // namespace nfzwda
