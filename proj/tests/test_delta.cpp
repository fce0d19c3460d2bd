#include <doctest.h>

#include <random>

#include "nfzwda/delta.hpp"
#include "support/errors.hpp"
#include "support/oracle.hpp"
#include "support/synthetic.hpp"

using namespace nfzwda;
using namespace nfzwda::testing;

namespace {

TokenSequence seq(std::initializer_list<const char*> words) {
  return TokenSequence(std::vector<std::string>(words.begin(), words.end()));
}

// One word "a"; each text has the given relative frequency of "a" over 10
// tokens.
LabeledText text_with(int a_count, std::string label) {
  std::vector<std::string> t(10, "b");
  for (int i = 0; i < a_count; ++i) t[i] = "a";
  return {TokenSequence(t), std::move(label)};
}

}  // namespace

TEST_CASE("word_frequencies") {
  const std::vector<std::string> words = {"a", "b", "c"};
  const auto f = word_frequencies(seq({"a", "b", "a"}), words);
  CHECK(f[0] == doctest::Approx(2.0 / 3));
  CHECK(f[1] == doctest::Approx(1.0 / 3));
  CHECK(f[2] == 0.0);
  CHECK(word_frequencies(seq({"a"}), std::vector<std::string>{}).empty());
}

TEST_CASE("profile statistics use the population deviation") {
  const NFDictionary dict({{"a", 10}}, "d");
  const std::vector<LabeledText> train = {text_with(1, "X"), text_with(2, "Y"), text_with(3, "Z")};
  const auto p = build_profile(train, dict, 150);
  REQUIRE(p.words == std::vector<std::string>{"a"});
  CHECK(p.mean[0] == doctest::Approx(0.2));
  CHECK(p.stdev[0] == doctest::Approx(std::sqrt(1.0 / 150)));
  CHECK(p.authors.at("X")[0] == doctest::Approx(-1.2247).epsilon(1e-4));
  CHECK(p.authors.at("Y")[0] == doctest::Approx(0.0));
  CHECK(p.authors.at("Z")[0] == doctest::Approx(1.2247).epsilon(1e-4));
}

TEST_CASE("zero deviation gives zero z-scores") {
  const NFDictionary dict({{"a", 10}, {"b", 5}}, "d");
  const std::vector<LabeledText> train = {text_with(4, "X"), text_with(4, "Y")};
  const auto p = build_profile(train, dict, 2);
  for (const auto s : p.stdev) CHECK(s == 0.0);
  for (const auto& [label, z] : p.authors) {
    for (const auto x : z) CHECK(x == 0.0);
  }
  CHECK(delta_score(p, text_with(9, "?").tokens, "X") == 0.0);
}

TEST_CASE("profile errors") {
  const NFDictionary dict({{"a", 10}}, "d");
  CHECK(code_of([&] { build_profile(std::vector<LabeledText>{}, dict, 5); }) ==
        ErrorCode::EmptyTraining);
  const std::vector<LabeledText> train = {text_with(1, "X")};
  CHECK(code_of([&] { build_profile(train, dict, 0); }) == ErrorCode::InvalidArgument);
  const auto p = build_profile(train, dict, 5);
  CHECK(code_of([&] { delta_score(p, seq({"a"}), "nobody"); }) == ErrorCode::UnknownAuthor);
}

TEST_CASE("hand-built scores") {
  DeltaProfile p;
  p.words = {"a"};
  p.mean = {0.5};
  p.stdev = {0.25};
  p.authors = {{"A", {1.0}}, {"B", {-3.0}}};
  // Test frequency 0.25 gives z = -1.
  const auto t = seq({"a", "b", "c", "d"});
  CHECK(delta_score(p, t, "A") == doctest::Approx(2.0));
  CHECK(delta_score(p, t, "B") == doctest::Approx(2.0));
  // Tie goes to the lower label.
  CHECK(delta_attribute(p, t).author == "A");
  CHECK(delta_open_attribute(p, t, 2.0) == std::optional<std::string>("A"));
  CHECK(!delta_open_attribute(p, t, 1.99));
  p.authors["B"] = {-1.5};
  CHECK(delta_attribute(p, t).author == "B");
  CHECK(delta_in_top_k(p, t, "A", 2));
  CHECK(!delta_in_top_k(p, t, "A", 1));
}

TEST_CASE("open variant rejects above the threshold") {
  DeltaProfile p;
  p.words = {"a"};
  p.mean = {0.0};
  p.stdev = {1.0};
  p.authors = {{"A", {0.95}}, {"B", {2.0}}};
  CHECK(!delta_open_attribute(p, seq({"b"}), 0.93));
  CHECK(delta_open_attribute(p, seq({"b"}), 0.96) == std::optional<std::string>("A"));
}

TEST_CASE("random small corpora match the brute-force oracle") {
  std::mt19937_64 g(99);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n_authors = 1 + uniform(g, 5);
    const auto vocab = 3 + uniform(g, 20);
    std::vector<std::pair<std::string, NfValue>> entries;
    for (std::size_t w = 0; w < vocab; ++w) entries.emplace_back(word_name("w", w), 1 + uniform(g, 50));
    const NFDictionary dict(entries, "random");
    const auto n_words = 1 + uniform(g, 20);

    OracleDelta oracle;
    oracle.words = dict.top_words(n_words);
    std::vector<LabeledText> train;
    const auto random_tokens = [&] {
      std::vector<std::string> t;
      const auto len = 5 + uniform(g, 60);
      for (std::size_t i = 0; i < len; ++i) t.push_back(word_name("w", uniform(g, vocab + 2)));
      return t;
    };
    for (std::size_t a = 0; a < n_authors; ++a) {
      const auto texts = 1 + uniform(g, 6);
      for (std::size_t i = 0; i < texts; ++i) {
        auto t = random_tokens();
        oracle.train_tokens.push_back(t);
        oracle.train_labels.push_back("A" + std::to_string(a));
        train.push_back({TokenSequence(std::move(t)), "A" + std::to_string(a)});
      }
    }
    const auto profile = build_profile(train, dict, n_words);
    CHECK(profile.words == oracle.words);
    for (int q = 0; q < 3; ++q) {
      const auto test = random_tokens();
      for (std::size_t a = 0; a < n_authors; ++a) {
        const auto label = "A" + std::to_string(a);
        const double got = delta_score(profile, TokenSequence(test), label);
        CHECK(got >= 0.0);
        CHECK(std::abs(got - oracle.score(test, label)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("a training text scores 0 against its sole author") {
  const auto world = SyntheticWorld::make(3);
  std::mt19937_64 g(3);
  std::vector<LabeledText> train;
  for (const auto& d : world.documents(3, 1, 0.2, 300, g, "t")) {
    train.push_back({tokenize(d.text), *d.author_label});
  }
  const auto p = build_profile(train, world.dict, 40);
  for (const auto& t : train) {
    CHECK(delta_score(p, t.tokens, t.label) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(delta_attribute(p, t.tokens).author == t.label);
  }
}

TEST_CASE("ranking is sorted and led by the attributed author") {
  const auto world = SyntheticWorld::make(3);
  std::mt19937_64 g(4);
  std::vector<LabeledText> train;
  for (const auto& d : world.documents(3, 3, 0.5, 300, g, "t")) {
    train.push_back({tokenize(d.text), *d.author_label});
  }
  const auto p = build_profile(train, world.dict, 30);
  const auto test = tokenize(world.author_text(1, 0.5, 300, g));
  const auto ranking = delta_ranking(p, test);
  for (std::size_t i = 1; i < ranking.size(); ++i) CHECK(ranking[i - 1].score <= ranking[i].score);
  CHECK(ranking.front().author == delta_attribute(p, test).author);
}

TEST_CASE("profile JSON round trip") {
  const NFDictionary dict({{"a", 10}, {"b", 4}}, "d");
  const std::vector<LabeledText> train = {text_with(1, "X"), text_with(5, "Y")};
  const auto p = build_profile(train, dict, 2);
  const auto q = DeltaProfile::from_json(p.to_json());
  CHECK(q.words == p.words);
  CHECK(q.mean == p.mean);
  CHECK(q.stdev == p.stdev);
  CHECK(q.authors == p.authors);
  CHECK(code_of([] { DeltaProfile::from_json("[]"); }) == ErrorCode::FormatError);
}
