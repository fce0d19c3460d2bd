#include "nfzwda/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "json_util.hpp"
#include "nfzwda/error.hpp"
#include "nfzwda/parallel.hpp"

namespace nfzwda {

namespace {

bool uses_alpha(FeatureSelector s) { return s != FeatureSelector::OdvOnly; }
bool uses_gamma(FeatureSelector s) { return s != FeatureSelector::OdeOnly; }

std::size_t columns_per_zone(FeatureSelector s) {
  return (uses_alpha(s) ? 1 : 0) + (uses_gamma(s) ? 1 : 0);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct BinaryProblem {
  std::vector<std::size_t> rows;  // indices into the full training set
  std::vector<int> y;             // +1 for the first label, -1 for the second
};

// SMO on the dual of the linear soft-margin SVM with maximal violating pair
// selection. `gram` is the kernel matrix over the full training set.
LinearSvmModel::PairModel solve_pair(const BinaryProblem& problem,
                                     const std::vector<std::vector<double>>& gram,
                                     const std::vector<std::vector<double>>& x,
                                     const SvmConfig& config) {
  constexpr double kTau = 1e-12;
  const std::size_t l = problem.rows.size();
  const auto& y = problem.y;
  const double c = config.c;
  const auto kernel = [&](std::size_t a, std::size_t b) {
    return gram[problem.rows[a]][problem.rows[b]];
  };
  const auto q = [&](std::size_t a, std::size_t b) {
    return static_cast<double>(y[a] * y[b]) * kernel(a, b);
  };

  std::vector<double> alpha(l, 0.0);
  std::vector<double> grad(l, -1.0);
  const auto is_upper = [&](std::size_t t) { return alpha[t] >= c; };
  const auto is_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  std::uint64_t iter = 0;
  for (; iter < config.max_iterations; ++iter) {
    double g_max = -std::numeric_limits<double>::infinity();
    double g_max2 = -std::numeric_limits<double>::infinity();
    std::size_t i = l;
    std::size_t j = l;
    for (std::size_t t = 0; t < l; ++t) {
      const bool in_up = y[t] == 1 ? !is_upper(t) : !is_lower(t);
      const bool in_low = y[t] == 1 ? !is_lower(t) : !is_upper(t);
      const double v = -y[t] * grad[t];
      if (in_up && v > g_max) {
        g_max = v;
        i = t;
      }
      if (in_low && -v > g_max2) {
        g_max2 = -v;
        j = t;
      }
    }
    if (i == l || j == l || g_max + g_max2 < config.tolerance) break;

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = kernel(i, i) + kernel(j, j) + 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = kernel(i, i) + kernel(j, j) - 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = sum;
        }
        if (alpha[i] < 0) {
          alpha[i] = 0;
          alpha[j] = sum;
        }
      }
    }

    const double d_i = alpha[i] - old_ai;
    const double d_j = alpha[j] - old_aj;
    for (std::size_t t = 0; t < l; ++t) {
      grad[t] += q(i, t) * d_i + q(j, t) * d_j;
    }
  }

  // Offset from free support vectors, or the middle of the feasible interval.
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < l; ++t) {
    const double yg = y[t] * grad[t];
    if (is_upper(t)) {
      if (y[t] == -1) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else if (is_lower(t)) {
      if (y[t] == 1) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  LinearSvmModel::PairModel pair;
  pair.rho = free_count > 0 ? free_sum / static_cast<double>(free_count)
                            : (upper + lower) / 2.0;
  pair.iterations = iter;

  const std::size_t dim = x.empty() ? 0 : x.front().size();
  pair.weights.assign(dim, 0.0);
  for (std::size_t t = 0; t < l; ++t) {
    if (alpha[t] == 0.0) continue;
    const double coef = alpha[t] * y[t];
    const auto& row = x[problem.rows[t]];
    for (std::size_t d = 0; d < dim; ++d) pair.weights[d] += coef * row[d];
  }
  return pair;
}

}  // namespace

FeatureSelector parse_feature_selector(std::string_view name) {
  if (name == "full") return FeatureSelector::Full;
  if (name == "ode_only" || name == "ode") return FeatureSelector::OdeOnly;
  if (name == "odv_only" || name == "odv") return FeatureSelector::OdvOnly;
  throw Error(ErrorCode::InvalidArgument, "unknown feature selector '" + std::string(name) + "'");
}

const char* to_string(FeatureSelector selector) noexcept {
  switch (selector) {
    case FeatureSelector::Full: return "full";
    case FeatureSelector::OdeOnly: return "ode_only";
    case FeatureSelector::OdvOnly: return "odv_only";
  }
  return "full";
}

void ScalingParams::check_compatible(const StyleVector& v) const {
  if (!(v.scheme == scheme) || v.mode != mode) {
    throw Error(ErrorCode::ConfigMismatch,
                "vector built with " + v.scheme.describe() + "/" + to_string(v.mode) +
                    ", model expects " + scheme.describe() + "/" + to_string(mode));
  }
}

std::vector<double> ScalingParams::dense(const StyleVector& v) const {
  std::vector<double> out;
  out.reserve(dimension());
  for (const ZoneIndex k : zones) {
    const ZoneFeature f = v.at(k);
    if (uses_alpha(selector)) out.push_back(f.alpha);
    if (uses_gamma(selector)) out.push_back(f.gamma);
  }
  return out;
}

std::vector<double> ScalingParams::apply(const StyleVector& v) const {
  auto out = dense(v);
  for (std::size_t d = 0; d < out.size(); ++d) {
    const double span = max[d] - min[d];
    if (span <= 0.0) {
      out[d] = 0.5;
    } else {
      out[d] = std::clamp((out[d] - min[d]) / span, 0.0, 1.0);
    }
  }
  return out;
}

ScalingParams fit_scaling(std::span<const StyleVector> train, FeatureSelector selector) {
  if (train.empty()) throw Error(ErrorCode::EmptyTraining, "no training vectors");
  ScalingParams params;
  params.scheme = train.front().scheme;
  params.mode = train.front().mode;
  params.selector = selector;

  std::set<ZoneIndex> zones;
  for (const auto& v : train) {
    if (!(v.scheme == params.scheme) || v.mode != params.mode) {
      throw Error(ErrorCode::MixedConfig, "training vectors differ in scheme or ODV mode");
    }
    for (const auto& [k, f] : v.features) zones.insert(k);
  }
  params.zones.assign(zones.begin(), zones.end());

  const std::size_t dim = params.zones.size() * columns_per_zone(selector);
  params.min.assign(dim, std::numeric_limits<double>::infinity());
  params.max.assign(dim, -std::numeric_limits<double>::infinity());
  for (const auto& v : train) {
    const auto row = params.dense(v);
    for (std::size_t d = 0; d < dim; ++d) {
      params.min[d] = std::min(params.min[d], row[d]);
      params.max[d] = std::max(params.max[d], row[d]);
    }
  }
  return params;
}

LinearSvmModel::LinearSvmModel(std::vector<std::string> labels, ScalingParams scaling,
                               std::vector<PairModel> pairs, SvmConfig config)
    : labels_(std::move(labels)),
      scaling_(std::move(scaling)),
      pairs_(std::move(pairs)),
      config_(config) {
  if (labels_.size() < 2) throw Error(ErrorCode::SingleClass, "model needs >= 2 labels");
  for (const auto& p : pairs_) {
    if (p.weights.size() != scaling_.dimension() || p.first >= labels_.size() ||
        p.second >= labels_.size()) {
      throw Error(ErrorCode::FormatError, "pair model does not match the model shape");
    }
  }
}

std::vector<std::size_t> LinearSvmModel::votes(const StyleVector& v) const {
  scaling_.check_compatible(v);
  const auto x = scaling_.apply(v);
  std::vector<std::size_t> counts(labels_.size(), 0);
  for (const auto& p : pairs_) {
    const double decision = dot(p.weights, x) - p.rho;
    // A zero decision goes to the lower-ordered label.
    ++counts[decision >= 0.0 ? p.first : p.second];
  }
  return counts;
}

std::string LinearSvmModel::predict(const StyleVector& v) const {
  const auto counts = votes(v);
  const auto best = std::max_element(counts.begin(), counts.end());
  return labels_[static_cast<std::size_t>(best - counts.begin())];
}

std::string LinearSvmModel::to_json() const {
  nlohmann::json j;
  j["format"] = "nfzwda-linear-svm";
  j["version"] = 1;
  j["labels"] = labels_;
  j["config"] = {{"C", config_.c},
                 {"tolerance", config_.tolerance},
                 {"max_iterations", config_.max_iterations},
                 {"seed", config_.seed}};
  j["scheme"] = detail::scheme_to_json(scaling_.scheme);
  j["odv_mode"] = to_string(scaling_.mode);
  j["selector"] = to_string(scaling_.selector);
  j["scaling"] = {{"zones", scaling_.zones}, {"min", scaling_.min}, {"max", scaling_.max}};
  auto pairs = nlohmann::json::array();
  for (const auto& p : pairs_) {
    pairs.push_back({{"first", p.first},
                     {"second", p.second},
                     {"rho", p.rho},
                     {"iterations", p.iterations},
                     {"weights", p.weights}});
  }
  j["pairs"] = std::move(pairs);
  return j.dump();
}

LinearSvmModel LinearSvmModel::from_json(std::string_view text) {
  return detail::parse_guarded([&] {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "nfzwda-linear-svm") {
      throw Error(ErrorCode::FormatError, "not a linear SVM model document");
    }
    SvmConfig config;
    const auto& cj = j.at("config");
    config.c = cj.at("C").get<double>();
    config.tolerance = cj.at("tolerance").get<double>();
    config.max_iterations = cj.at("max_iterations").get<std::uint64_t>();
    config.seed = cj.at("seed").get<std::uint64_t>();

    ScalingParams scaling;
    scaling.scheme = detail::scheme_from_json(j.at("scheme"));
    scaling.mode = parse_odv_mode(j.at("odv_mode").get<std::string>());
    scaling.selector = parse_feature_selector(j.at("selector").get<std::string>());
    const auto& sj = j.at("scaling");
    scaling.zones = sj.at("zones").get<std::vector<ZoneIndex>>();
    scaling.min = sj.at("min").get<std::vector<double>>();
    scaling.max = sj.at("max").get<std::vector<double>>();
    if (scaling.min.size() != scaling.max.size() ||
        scaling.min.size() != scaling.zones.size() * columns_per_zone(scaling.selector)) {
      throw Error(ErrorCode::FormatError, "scaling arrays have inconsistent sizes");
    }

    std::vector<PairModel> pairs;
    for (const auto& pj : j.at("pairs")) {
      PairModel p;
      p.first = pj.at("first").get<std::size_t>();
      p.second = pj.at("second").get<std::size_t>();
      p.rho = pj.at("rho").get<double>();
      p.iterations = pj.at("iterations").get<std::uint64_t>();
      p.weights = pj.at("weights").get<std::vector<double>>();
      pairs.push_back(std::move(p));
    }
    return LinearSvmModel(j.at("labels").get<std::vector<std::string>>(), std::move(scaling),
                          std::move(pairs), config);
  });
}

LinearSvmModel train(std::span<const Sample> samples, const SvmConfig& config,
                     FeatureSelector selector) {
  if (samples.empty()) throw Error(ErrorCode::EmptyTraining, "no training samples");
  if (!(config.c > 0.0) || !(config.tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "C and tolerance must be positive");
  }

  std::set<std::string> label_set;
  for (const auto& s : samples) label_set.insert(s.label);
  if (label_set.size() < 2) {
    throw Error(ErrorCode::SingleClass, "training data has a single author");
  }
  std::vector<std::string> labels(label_set.begin(), label_set.end());
  std::map<std::string, std::size_t> label_index;
  for (std::size_t i = 0; i < labels.size(); ++i) label_index[labels[i]] = i;

  std::vector<StyleVector> vectors;
  vectors.reserve(samples.size());
  for (const auto& s : samples) vectors.push_back(s.features);
  ScalingParams scaling = fit_scaling(vectors, selector);

  std::vector<std::vector<double>> x(samples.size());
  std::vector<std::size_t> y(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    x[i] = scaling.apply(samples[i].features);
    y[i] = label_index.at(samples[i].label);
  }

  const std::size_t l = samples.size();
  std::vector<std::vector<double>> gram(l, std::vector<double>(l));
  detail::parallel_for(l, [&](std::size_t a) {
    for (std::size_t b = 0; b < l; ++b) gram[a][b] = dot(x[a], x[b]);
  });

  std::vector<BinaryProblem> problems;
  std::vector<LinearSvmModel::PairModel> pairs;
  for (std::size_t a = 0; a < labels.size(); ++a) {
    for (std::size_t b = a + 1; b < labels.size(); ++b) {
      BinaryProblem problem;
      for (std::size_t t = 0; t < l; ++t) {
        if (y[t] == a || y[t] == b) {
          problem.rows.push_back(t);
          problem.y.push_back(y[t] == a ? 1 : -1);
        }
      }
      problems.push_back(std::move(problem));
      pairs.push_back({a, b, {}, 0.0, 0});
    }
  }
  detail::parallel_for(problems.size(), [&](std::size_t p) {
    auto solved = solve_pair(problems[p], gram, x, config);
    solved.first = pairs[p].first;
    solved.second = pairs[p].second;
    pairs[p] = std::move(solved);
  });

  return LinearSvmModel(std::move(labels), std::move(scaling), std::move(pairs), config);
}

std::vector<std::vector<double>> AttributionReport::row_proportions() const {
  std::vector<std::vector<double>> out;
  out.reserve(confusion.size());
  for (const auto& row : confusion) {
    std::size_t total = 0;
    for (const auto c : row) total += c;
    std::vector<double> p(row.size(), 0.0);
    if (total > 0) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        p[i] = static_cast<double>(row[i]) / static_cast<double>(total);
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

AttributionReport evaluate(const Classifier& model, std::span<const Sample> test) {
  if (test.empty()) throw Error(ErrorCode::EmptyTest, "no test samples");
  AttributionReport report;
  report.labels = model.labels();
  for (const auto& s : test) {
    if (std::find(report.labels.begin(), report.labels.end(), s.label) == report.labels.end()) {
      report.labels.push_back(s.label);
    }
  }
  const auto index_of = [&](const std::string& label) {
    return static_cast<std::size_t>(
        std::find(report.labels.begin(), report.labels.end(), label) - report.labels.begin());
  };

  const std::size_t n = report.labels.size();
  report.confusion.assign(n, std::vector<std::size_t>(n, 0));
  std::size_t correct = 0;
  for (const auto& s : test) {
    auto predicted = model.predict(s.features);
    ++report.confusion[index_of(s.label)][index_of(predicted)];
    if (predicted == s.label) ++correct;
    report.predictions.push_back({s.source_id, s.label, std::move(predicted)});
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
  return report;
}

}  // namespace nfzwda
