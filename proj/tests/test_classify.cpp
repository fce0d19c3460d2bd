#include <doctest.h>

#include <random>

#include "nfzwda/classify.hpp"
#include "support/errors.hpp"
#include "support/synthetic.hpp"

using namespace nfzwda;
using namespace nfzwda::testing;

namespace {

StyleVector vec(std::map<ZoneIndex, ZoneFeature> f) {
  StyleVector v;
  v.features = std::move(f);
  v.word_count = 100;
  return v;
}

// Two authors with disjoint NF bands, 10 texts each.
std::vector<Sample> separable(std::uint64_t seed, std::size_t per_author = 10) {
  const auto world = SyntheticWorld::make(2);
  std::mt19937_64 g(seed);
  std::vector<Sample> out;
  for (const auto& d : world.documents(2, per_author, 0.0, 300, g, "s")) {
    out.push_back({style_vector(tokenize(d.text), world.dict, PartitionScheme::radix()),
                   *d.author_label, d.source_id});
  }
  return out;
}

}  // namespace

TEST_CASE("min-max scaling") {
  const std::vector<StyleVector> train = {vec({{0, {0.2, 0.3}}}), vec({{0, {0.4, 0.3}}})};
  const auto s = fit_scaling(train);
  CHECK(s.dimension() == 2);
  CHECK(s.apply(train[0]) == std::vector<double>{0.0, 0.5});
  CHECK(s.apply(train[1]) == std::vector<double>{1.0, 0.5});
  CHECK(s.apply(vec({{0, {0.9, 0.1}}})) == std::vector<double>{1.0, 0.5});
  CHECK(s.apply(vec({{0, {0.1, 0.1}}})) == std::vector<double>{0.0, 0.5});
  CHECK(s.apply(vec({{0, {0.3, 0.3}}}))[0] == doctest::Approx(0.5));
}

TEST_CASE("absent zones take the empty-zone fill and unknown zones are dropped") {
  const std::vector<StyleVector> train = {vec({{0, {0.2, 0.3}}}), vec({{5, {0.5, 0.6}}})};
  const auto s = fit_scaling(train);
  CHECK(s.zones == std::vector<ZoneIndex>{0, 5});
  CHECK(s.dense(train[0]) == std::vector<double>{0.2, 0.3, 1.0, 0.0});
  CHECK(s.dense(vec({{9, {0.1, 0.1}}})) == std::vector<double>{1.0, 0.0, 1.0, 0.0});
}

TEST_CASE("feature selectors mask halves") {
  const std::vector<StyleVector> train = {vec({{0, {0.2, 0.3}}, {4, {0.5, 0.7}}})};
  const auto ode = fit_scaling(train, FeatureSelector::OdeOnly);
  const auto odv = fit_scaling(train, FeatureSelector::OdvOnly);
  CHECK(ode.dense(train[0]) == std::vector<double>{0.2, 0.5});
  CHECK(odv.dense(train[0]) == std::vector<double>{0.3, 0.7});
  CHECK(parse_feature_selector("ode_only") == FeatureSelector::OdeOnly);
  CHECK(parse_feature_selector("odv") == FeatureSelector::OdvOnly);
  CHECK(code_of([] { parse_feature_selector("both"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("scaling errors") {
  CHECK(code_of([] { fit_scaling(std::vector<StyleVector>{}); }) == ErrorCode::EmptyTraining);
  auto a = vec({{0, {0.2, 0.3}}});
  auto b = a;
  b.mode = OdvMode::Rms;
  CHECK(code_of([&] { fit_scaling(std::vector<StyleVector>{a, b}); }) == ErrorCode::MixedConfig);
  b = a;
  b.scheme = PartitionScheme::linear();
  CHECK(code_of([&] { fit_scaling(std::vector<StyleVector>{a, b}); }) == ErrorCode::MixedConfig);
  const auto s = fit_scaling(std::vector<StyleVector>{a});
  CHECK(code_of([&] { s.check_compatible(b); }) == ErrorCode::ConfigMismatch);
}

TEST_CASE("separable authors: 100% on training and held-out samples") {
  const auto train_set = separable(1);
  const auto test_set = separable(2);
  const auto model = train(train_set);
  CHECK(model.labels() == std::vector<std::string>{"A0", "A1"});
  CHECK(evaluate(model, train_set).accuracy == 1.0);
  const auto report = evaluate(model, test_set);
  CHECK(report.accuracy == 1.0);
  CHECK(report.confusion == std::vector<std::vector<std::size_t>>{{10, 0}, {0, 10}});
  for (const auto& s : train_set) CHECK(model.predict(s.features) == s.label);
}

TEST_CASE("training errors") {
  auto one = separable(3);
  for (auto& s : one) s.label = "A";
  CHECK(code_of([&] { train(one); }) == ErrorCode::SingleClass);
  CHECK(code_of([] { train(std::vector<Sample>{}); }) == ErrorCode::EmptyTraining);
  SvmConfig bad;
  bad.c = 0;
  CHECK(code_of([&] { train(separable(3), bad); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("conflicting duplicates still train") {
  std::vector<Sample> samples;
  for (int i = 0; i < 6; ++i) {
    samples.push_back({vec({{0, {0.2, 0.3}}}), "A", "a" + std::to_string(i)});
    samples.push_back({vec({{0, {0.2, 0.3}}}), "B", "b" + std::to_string(i)});
  }
  samples.push_back({vec({{0, {0.5, 0.9}}}), "B", "b"});
  const auto model = train(samples);
  CHECK(evaluate(model, samples).accuracy < 1.0);
}

TEST_CASE("mirror-symmetric tie goes to the first label") {
  const std::vector<Sample> samples = {{vec({{0, {0.2, 0.4}}}), "B", "1"},
                                       {vec({{0, {0.4, 0.2}}}), "A", "2"}};
  const auto model = train(samples);
  CHECK(model.predict(vec({{0, {0.2, 0.4}}})) == "B");
  CHECK(model.predict(vec({{0, {0.4, 0.2}}})) == "A");
  CHECK(model.predict(vec({{0, {0.3, 0.3}}})) == "A");
}

TEST_CASE("prediction rejects vectors from another configuration") {
  const auto model = train(separable(4));
  auto v = separable(5).front().features;
  v.mode = OdvMode::Rms;
  CHECK(code_of([&] { model.predict(v); }) == ErrorCode::ConfigMismatch);
}

TEST_CASE("training is deterministic and survives a JSON round trip") {
  const auto samples = separable(6);
  const auto a = train(samples);
  const auto b = train(samples);
  CHECK(a.to_json() == b.to_json());
  const auto restored = LinearSvmModel::from_json(a.to_json());
  CHECK(restored.to_json() == a.to_json());
  for (const auto& s : separable(7)) CHECK(restored.predict(s.features) == a.predict(s.features));
  CHECK(code_of([] { LinearSvmModel::from_json("{}"); }) == ErrorCode::FormatError);
  CHECK(code_of([] { LinearSvmModel::from_json("not json"); }) == ErrorCode::FormatError);
}

TEST_CASE("three-class one-vs-one voting") {
  const auto world = SyntheticWorld::make(3);
  std::mt19937_64 g(8);
  std::vector<Sample> samples;
  for (const auto& d : world.documents(3, 8, 0.3, 400, g, "t")) {
    samples.push_back({style_vector(tokenize(d.text), world.dict, PartitionScheme::radix()),
                       *d.author_label, d.source_id});
  }
  const auto model = train(samples);
  CHECK(model.pairs().size() == 3);
  for (const auto& s : samples) {
    const auto v = model.votes(s.features);
    CHECK(v[0] + v[1] + v[2] == 3);
  }
  CHECK(evaluate(model, samples).accuracy == 1.0);
}

TEST_CASE("evaluation report") {
  struct Fixed final : Classifier {
    std::vector<std::string> l{"A0", "A1"};
    const std::vector<std::string>& labels() const override { return l; }
    std::string predict(const StyleVector& v) const override {
      return v.word_count % 8 == 0 ? "A1" : "A0";
    }
  } fixed;
  std::vector<Sample> test;
  for (std::size_t i = 0; i < 24; ++i) {
    auto v = vec({});
    v.word_count = i < 21 ? 1 : 8;
    test.push_back({v, "A0", std::to_string(i)});
  }
  const auto report = evaluate(fixed, test);
  CHECK(report.confusion[0][0] == 21);
  CHECK(report.row_proportions()[0][0] == 0.875);
  CHECK(report.row_proportions()[1][0] == 0.0);
  CHECK(report.accuracy == 0.875);
  CHECK(code_of([&] { evaluate(fixed, std::span<const Sample>{}); }) == ErrorCode::EmptyTest);

  std::vector<Sample> perfect;
  for (std::size_t i = 0; i < 30; ++i) {
    auto v = vec({});
    v.word_count = i % 2 ? 8 : 1;
    perfect.push_back({v, i % 2 ? "A1" : "A0", std::to_string(i)});
  }
  const auto p = evaluate(fixed, perfect);
  CHECK(p.accuracy == 1.0);
  CHECK(p.confusion == std::vector<std::vector<std::size_t>>{{15, 0}, {0, 15}});
}
