// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nfzwda/attribution.hpp"
#include "nfzwda/delta.hpp"
#include "nfzwda/experiment.hpp"
#include "support/corpus_dir.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "support/synthetic.hpp"

using namespace nfzwda;
using namespace nfzwda::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const std::vector<NfValue> kExampleValues = {0, 80, 10000, 200000, 3000000};

std::string join(const std::vector<ZoneIndex>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

void criterion_1(Outcome& o) {
  const auto t0 = Clock::now();
  const std::pair<PartitionScheme, std::vector<ZoneIndex>> cases[] = {
      {PartitionScheme::linear(100), {0, 0, 100, 2000, 30000}},
      {PartitionScheme::radix(100, 100), {0, 0, 100, 119, 201}},
      {PartitionScheme::logarithm(1.1), {0, 45, 96, 128, 156}},
  };
  std::size_t matched = 0;
  for (const auto& [scheme, expected] : cases) {
    std::vector<ZoneIndex> got;
    for (const auto f : kExampleValues) got.push_back(zone_index(scheme, f));
    for (std::size_t i = 0; i < got.size(); ++i) matched += got[i] == expected[i];
    o.detail << " " << scheme.name() << "=" << join(got);
  }
  const double elapsed = seconds_since(t0);
  o.detail << " matched=" << matched << "/15 time=" << elapsed << "s";
  o.require(matched == 15, "exact match");
  o.require(elapsed < 1.0, "runtime < 1 s");
}

StyleVector fig1(const char* pattern, OdvMode mode) {
  return style_vector(tokenize(spell(pattern)), two_group_dictionary(), PartitionScheme::radix(),
                      mode);
}

void criterion_2(Outcome& o) {
  const auto t1 = fig1(kText1, OdvMode::Rms);
  const auto t2 = fig1(kText2, OdvMode::Rms);
  const auto v1 = fig1(kText1, OdvMode::Variance);
  const auto v2 = fig1(kText2, OdvMode::Variance);
  double worst = 0.0;
  const auto near = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want));
  };
  near(t1.at(kZoneA).alpha, 0.1111);
  near(t1.at(kZoneB).alpha, 0.1429);
  near(t2.at(kZoneA).alpha, 0.1111);
  near(t2.at(kZoneB).alpha, 0.1429);
  near(t1.at(kZoneA).gamma, 1.1737);
  near(t1.at(kZoneB).gamma, 1.1019);
  near(t2.at(kZoneA).gamma, 1.3553);
  near(t2.at(kZoneB).gamma, 1.3093);
  double identity = 0.0;
  for (const auto& [r, v] : {std::pair{&t1, &v1}, std::pair{&t2, &v2}}) {
    for (const auto k : {kZoneA, kZoneB}) {
      const double g_r = r->at(k).gamma;
      const double g_v = v->at(k).gamma;
      identity = std::max(identity, std::abs(g_r * g_r - g_v * g_v - 1.0));
    }
  }
  o.detail << " gamma_rms={" << t1.at(kZoneA).gamma << "," << t1.at(kZoneB).gamma << ","
           << t2.at(kZoneA).gamma << "," << t2.at(kZoneB).gamma << "} max_err=" << worst
           << " identity_err=" << identity;
  o.require(worst <= 5e-5, "values within 5e-5");
  o.require(identity <= 1e-9, "mode identity within 1e-9");
}

void criterion_3(Outcome& o) {
  const double a = confidence(0.875, 10);
  const double b = confidence(0.4, 10);
  bool zero = true;
  for (std::size_t y = 2; y <= 20; ++y) zero = zero && confidence(1.0 / static_cast<double>(y), y) == 0.0;
  o.detail << " f(0.875,10)=" << a << " f(0.4,10)=" << b << " f(1/|Y|)=0 for 2..20: "
           << (zero ? "yes" : "no");
  o.require(std::abs(a - 0.8611) <= 5e-5, "0.8611");
  o.require(std::abs(b - 0.3333) <= 5e-5, "0.3333");
  o.require(zero, "random baseline is exactly 0");
}

void criterion_4(Outcome& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 g(4);
  std::size_t texts = 0;
  std::size_t zones_checked = 0;
  double worst = 0.0;
  bool mass = true;
  bool telescoping = true;
  for (; texts < 3000; ++texts) {
    const auto vocab = 1 + uniform(g, 10);
    std::vector<std::pair<std::string, NfValue>> entries;
    for (std::size_t w = 0; w < vocab; ++w) entries.emplace_back(word_name("w", w), uniform(g, 1000000));
    const NFDictionary dict(entries, "random");
    std::vector<std::string> tokens;
    const auto n = 1 + uniform(g, 50);
    // Two extra words are absent from the dictionary.
    for (std::size_t i = 0; i < n; ++i) tokens.push_back(word_name("w", uniform(g, vocab + 2)));

    std::function<std::uint64_t(NfValue)> oracle_zone;
    PartitionScheme scheme = PartitionScheme::radix();
    switch (texts % 3) {
      case 0: {
        const auto L = 1 + uniform(g, 1000);
        scheme = PartitionScheme::linear(L);
        oracle_zone = [L](NfValue f) { return oracle_linear_zone(f, L); };
        break;
      }
      case 1: {
        const auto L = 1 + uniform(g, 100);
        const auto R = 2 + uniform(g, 30);
        scheme = PartitionScheme::radix(L, R);
        oracle_zone = [L, R](NfValue f) { return oracle_radix_zone(f, L, R); };
        break;
      }
      default: {
        const double r = 1.01 + unit(g);
        scheme = PartitionScheme::logarithm(r);
        oracle_zone = [r](NfValue f) { return oracle_log_zone(f, r); };
      }
    }
    const auto mode = texts % 2 ? OdvMode::Rms : OdvMode::Variance;
    const auto oracle = oracle_features(tokens, [&](const std::string& t) {
      return oracle_zone(dict.lookup(t));
    });

    const TokenSequence seq(tokens);
    const auto zones = partition(seq, dict, scheme);
    const auto v = style_vector(zones, seq.size(), scheme, mode);
    std::size_t total = 0;
    for (const auto& [k, z] : zones) total += z.count();
    mass = mass && total == n && zones.size() == oracle.size() && v.features.size() == oracle.size();
    for (const auto& [k, want] : oracle) {
      const auto it = zones.find(k);
      if (it == zones.end()) {
        mass = false;
        continue;
      }
      const auto d = occurrence_distances(it->second);
      double sum = 0.0;
      if (d.size() != want.distances.size()) {
        worst = INFINITY;
        continue;
      }
      for (std::size_t i = 0; i < d.size(); ++i) {
        worst = std::max(worst, std::abs(d[i] - want.distances[i]));
        sum += d[i];
      }
      telescoping = telescoping && std::abs(sum - 1.0) <= 1e-9;
      const auto got = v.at(k);
      worst = std::max(worst, std::abs(got.alpha - want.alpha));
      const double gamma = mode == OdvMode::Rms ? want.gamma_rms : want.gamma_variance;
      worst = std::max(worst, std::abs(got.gamma - gamma));
      ++zones_checked;
    }
  }
  const double elapsed = seconds_since(t0);
  o.detail << " texts=" << texts << " zones=" << zones_checked << " max_err=" << worst
           << " time=" << elapsed << "s";
  o.require(worst <= 1e-9, "oracle agreement within 1e-9");
  o.require(mass, "sum of n_k equals n");
  o.require(telescoping, "distances sum to 1");
  o.require(elapsed < 60.0, "runtime < 1 min");
}

void criterion_5(Outcome& o) {
  const auto t1 = fig1(kText1, OdvMode::Rms);
  const auto t2 = fig1(kText2, OdvMode::Rms);
  bool same_alpha = t1.features.size() == t2.features.size();
  double min_gap = INFINITY;
  for (const auto& [k, f] : t1.features) {
    same_alpha = same_alpha && t2.features.count(k) && t2.at(k).alpha == f.alpha;
    min_gap = std::min(min_gap, std::abs(t2.at(k).gamma - f.gamma));
  }
  o.detail << " identical_alpha=" << (same_alpha ? "yes" : "no") << " min_gamma_gap=" << min_gap;
  o.require(same_alpha, "identical alpha maps");
  o.require(min_gap > 0.1, "gamma differs by > 0.1");
}

// 3 candidate authors, 20 train and 10 test texts of 500 words each.
struct ClosedSetting {
  SyntheticWorld world = SyntheticWorld::make(4);
  std::vector<Document> train;
  std::vector<Document> test;

  ClosedSetting(double shared_fraction, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    train = world.documents(3, 20, shared_fraction, 500, g, "train");
    test = world.documents(3, 10, shared_fraction, 500, g, "test");
  }
};

PipelineConfig pipeline_500() {
  PipelineConfig c;
  c.word_length = 500;
  return c;
}

double delta_accuracy(const ClosedSetting& s, std::size_t n_words) {
  std::vector<LabeledText> train;
  for (const auto& d : s.train) train.push_back({front_sample(d, 500), *d.author_label});
  const auto profile = build_profile(train, s.world.dict, n_words);
  std::size_t correct = 0;
  for (const auto& d : s.test) {
    correct += delta_attribute(profile, front_sample(d, 500)).author == *d.author_label;
  }
  return static_cast<double>(correct) / static_cast<double>(s.test.size());
}

void criterion_6(Outcome& o) {
  const ClosedSetting disjoint(0.0, 61);
  const ClosedSetting overlap(0.9, 62);
  const auto dict = std::make_shared<const NFDictionary>(disjoint.world.dict);
  const double a = basic_attribute(disjoint.train, disjoint.test, dict, pipeline_500()).accuracy;
  const double b = basic_attribute(overlap.train, overlap.test, dict, pipeline_500()).accuracy;
  o.detail << " disjoint=" << a << " overlap90=" << b;
  o.require(a == 1.0, "100% on disjoint bands");
  o.require(b > 1.0 / 3.0 + 0.2, "> chance + 20 points with 90% shared tokens");
}

void criterion_7(Outcome& o) {
  const ClosedSetting setting(0.0, 71);
  const auto dict = std::make_shared<const NFDictionary>(setting.world.dict);
  const auto attributor = BasicAttributor::train(setting.train, dict, pipeline_500());
  std::mt19937_64 g(72);
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t min_segments = SIZE_MAX;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto author = i % 3;
    const Document doc{SyntheticWorld::label(author), "in/" + std::to_string(i),
                       setting.world.author_text(author, 0.0, 500 * 20 + 123, g)};
    const auto r = open_attribute(doc, attributor, 500, 0.5);
    accepted += r.decision == doc.author_label;
    min_segments = std::min(min_segments, r.segments);
  }
  // The outsider (author 3) writes partly from its own band and mixes the
  // candidates' bands with different weights in every passage.
  for (std::size_t i = 0; i < 5; ++i) {
    std::string text;
    for (int s = 0; s < 20; ++s) {
      text += setting.world.text({unit(g), unit(g), unit(g), 1.0}, 0.0, 500, g) + " ";
    }
    const auto r = open_attribute({std::nullopt, "out/" + std::to_string(i), text}, attributor, 500, 0.5);
    rejected += !r.decision;
    min_segments = std::min(min_segments, r.segments);
  }
  o.detail << " in_set_accepted=" << accepted << "/5 out_of_set_rejected=" << rejected
           << "/5 min_segments=" << min_segments;
  o.require(accepted >= 4, ">= 4/5 in-set accepted correctly");
  o.require(rejected >= 4, ">= 4/5 out-of-set rejected");
  o.require(min_segments >= 20, ">= 20 segments per text");
}

void criterion_8(Outcome& o) {
  std::mt19937_64 g(8);
  double worst = 0.0;
  std::size_t comparisons = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n_authors = 1 + uniform(g, 5);
    const auto vocab = 3 + uniform(g, 25);
    std::vector<std::pair<std::string, NfValue>> entries;
    for (std::size_t w = 0; w < vocab; ++w) entries.emplace_back(word_name("w", w), 1 + uniform(g, 100));
    const NFDictionary dict(entries, "random");
    const auto n_words = 1 + uniform(g, 20);
    OracleDelta oracle;
    oracle.words = dict.top_words(n_words);
    const auto random_tokens = [&] {
      std::vector<std::string> t;
      const auto len = 3 + uniform(g, 80);
      for (std::size_t i = 0; i < len; ++i) t.push_back(word_name("w", uniform(g, vocab + 3)));
      return t;
    };
    std::vector<LabeledText> train;
    for (std::size_t a = 0; a < n_authors; ++a) {
      const auto count = 1 + uniform(g, 6);
      for (std::size_t i = 0; i < count; ++i) {
        auto t = random_tokens();
        oracle.train_tokens.push_back(t);
        oracle.train_labels.push_back(SyntheticWorld::label(a));
        train.push_back({TokenSequence(std::move(t)), SyntheticWorld::label(a)});
      }
    }
    const auto profile = build_profile(train, dict, n_words);
    for (int q = 0; q < 3; ++q) {
      const auto test = random_tokens();
      for (std::size_t a = 0; a < n_authors; ++a) {
        const auto label = SyntheticWorld::label(a);
        worst = std::max(worst, std::abs(delta_score(profile, TokenSequence(test), label) -
                                         oracle.score(test, label)));
        ++comparisons;
      }
    }
  }

  // A text identical to an author's only training text scores 0.
  const ClosedSetting separable(0.0, 81);
  std::vector<LabeledText> single;
  for (std::size_t a = 0; a < 3; ++a) {
    single.push_back({front_sample(separable.train[a * 20], 500), SyntheticWorld::label(a)});
  }
  const auto profile = build_profile(single, separable.world.dict, 150);
  double identical = 0.0;
  for (const auto& t : single) identical = std::max(identical, delta_score(profile, t.tokens, t.label));

  const double delta_sep = delta_accuracy(separable, 150);
  const ClosedSetting overlap(0.9, 62);
  const auto dict = std::make_shared<const NFDictionary>(overlap.world.dict);
  const double nfz_overlap = basic_attribute(overlap.train, overlap.test, dict, pipeline_500()).accuracy;
  const double delta_overlap = delta_accuracy(overlap, 150);

  o.detail << " comparisons=" << comparisons << " max_err=" << worst << " identical_score="
           << identical << " delta_separable=" << delta_sep << " overlap: nfz=" << nfz_overlap
           << " delta=" << delta_overlap << " (nfz>=delta "
           << (nfz_overlap >= delta_overlap ? "holds" : "does not hold, reported only") << ")";
  o.require(worst <= 1e-9, "oracle agreement within 1e-9");
  o.require(identical == 0.0, "identical texts score 0");
  o.require(delta_sep == 1.0, "Delta 100% on the separable corpus");
}

void criterion_9(Outcome& o) {
  TempDir dir("acceptance_determinism");
  const auto world = SyntheticWorld::make(5);
  std::mt19937_64 g(91);
  write_corpus(dir, "train", world, 0, 5, 8, 0.5, 400, g);
  write_corpus(dir, "test", world, 0, 5, 4, 0.5, 400, g);
  write_dictionary(dir, "dict.tsv", world);
  dir.write("config.toml",
            "train_corpus = \"" + (dir.path / "train").string() + "\"\n" +
            "test_corpus = \"" + (dir.path / "test").string() + "\"\n" +
            "dictionary = \"" + (dir.path / "dict.tsv").string() + "\"\n" +
            "partitions = linear, radix, log\n"
            "word_lengths = 200, 400\n"
            "features = full, ode_only, odv_only\n"
            "author_counts = 2-3:4, 4:2\n"
            "train_test_counts = 5:2, 5:4\n"
            "delta_n_words = 20, 60\n"
            "delta_top_k = 2\n"
            "seed = 9\n");
  const auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  std::vector<std::string> runs[2];
  for (int i = 0; i < 2; ++i) {
    const auto config = load_experiment_config(dir.path / "config.toml");
    const auto results = run_closed_experiment(config);
    for (const auto& p :
         report_emit(results, ReportFormat::Csv, dir.path / ("run" + std::to_string(i)) / "closed")) {
      runs[i].push_back(slurp(p));
    }
  }
  std::size_t bytes = 0;
  for (const auto& s : runs[0]) bytes += s.size();
  o.detail << " files=" << runs[0].size() << " bytes=" << bytes;
  o.require(!runs[0].empty() && runs[0] == runs[1], "byte-identical CSV");
}

}  // namespace

int main() {
  const std::pair<const char*, void (*)(Outcome&)> criteria[] = {
      {"1 worked partition example", criterion_1},
      {"2 worked ODE/ODV example", criterion_2},
      {"3 confidence arithmetic", criterion_3},
      {"4 oracle equivalence on random texts", criterion_4},
      {"5 occurrence-level discrimination", criterion_5},
      {"6 synthetic closed-set floor", criterion_6},
      {"7 open-set behaviour", criterion_7},
      {"8 Delta baseline", criterion_8},
      {"9 experiment determinism", criterion_9},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s  criterion %s:%s\n", o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
