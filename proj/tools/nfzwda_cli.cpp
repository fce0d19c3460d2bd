// nfzwda command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nfzwda/attribution.hpp"
#include "nfzwda/delta.hpp"
#include "nfzwda/error.hpp"
#include "nfzwda/experiment.hpp"

namespace fs = std::filesystem;
using namespace nfzwda;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct SchemeOptions {
  std::string partition = "radix";
  std::uint64_t base_size = 10;
  std::uint64_t radix = 100000;
  double ratio = 1.0001;
  std::string odv_mode = "variance";

  void add(CLI::App* app) {
    app->add_option("--partition", partition, "linear, radix or log")
        ->check(CLI::IsMember({"linear", "radix", "log"}))
        ->capture_default_str();
    app->add_option("--L", base_size, "base zone size (linear, radix)")->capture_default_str();
    app->add_option("--R", radix, "radix (radix)")->capture_default_str();
    app->add_option("--r", ratio, "ratio (log)")->capture_default_str();
    app->add_option("--odv-mode", odv_mode, "variance or rms")
        ->check(CLI::IsMember({"variance", "rms"}))
        ->capture_default_str();
  }

  PartitionScheme scheme() const {
    return PartitionScheme::from_name(partition, base_size, radix, ratio);
  }
  OdvMode mode() const { return parse_odv_mode(odv_mode); }
};

struct DictOptions {
  std::string path;
  bool permissive = false;

  void add(CLI::App* app, bool required = true) {
    auto* opt = app->add_option("--dict", path, "NF dictionary TSV");
    if (required) opt->required();
    app->add_flag("--permissive", permissive,
                  "accept unsorted, unnormalized or commented dictionary files");
  }

  std::shared_ptr<const NFDictionary> load() const {
    return std::make_shared<const NFDictionary>(load_dictionary(
        path, permissive ? DictionaryFormat::Permissive : DictionaryFormat::Canonical));
  }
};

void warn_errors(const CorpusLoad& load) {
  for (const auto& e : load.errors) {
    std::cerr << "warning: skipped " << e.path << ": " << e.reason << "\n";
  }
}

std::vector<Document> load_labelled(const std::string& root, std::size_t longest = 0) {
  auto load = load_corpus(root);
  warn_errors(load);
  if (longest > 0) return longest_documents(load.documents, longest);
  return std::move(load.documents);
}

std::vector<Document> load_inputs(const std::vector<std::string>& files) {
  std::vector<Document> docs;
  for (const auto& f : files) docs.push_back(load_document(f));
  return docs;
}

/// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Trained model file: the classifier JSON plus the segment length it was
// trained with.
std::string model_file(const LinearSvmModel& model, std::size_t word_length) {
  auto j = nlohmann::ordered_json::parse(model.to_json());
  j["word_length"] = word_length;
  return j.dump(2) + "\n";
}

std::string report_text(const AttributionReport& report) {
  std::ostringstream out;
  out << "source_id\ttrue_author\tpredicted\n";
  for (const auto& p : report.predictions) {
    out << p.source_id << "\t" << p.true_label << "\t" << p.predicted << "\n";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", report.accuracy);
  out << "# accuracy = " << buf << "\n";
  return out.str();
}

int run(int argc, char** argv) {
  CLI::App app{"Natural-frequency-zone authorship attribution"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "nfzwda 0.1.0");

  // build-dict
  auto* build = app.add_subcommand("build-dict", "Count case-folded words of a corpus into a TSV");
  std::string build_corpus;
  std::string build_out;
  build->add_option("--corpus", build_corpus, "corpus root (<root>/<author>/*.txt)")->required();
  build->add_option("--out", build_out, "output TSV (stdout if omitted)");

  // featurize
  auto* feat = app.add_subcommand("featurize", "Write one style-vector JSON record per text");
  SchemeOptions feat_scheme;
  DictOptions feat_dict;
  std::string feat_corpus;
  std::vector<std::string> feat_inputs;
  std::size_t feat_length = 1000;
  std::string feat_segment = "front";
  std::string feat_out;
  feat_scheme.add(feat);
  feat_dict.add(feat);
  feat->add_option("--corpus", feat_corpus, "corpus root");
  feat->add_option("--input", feat_inputs, "individual text files");
  feat->add_option("--word-length", feat_length, "segment length in words")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  feat->add_option("--segment-mode", feat_segment, "front or chunks")
      ->check(CLI::IsMember({"front", "chunks"}))
      ->capture_default_str();
  feat->add_option("--out", feat_out, "output JSONL (stdout if omitted)");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train the pairwise linear SVM on a corpus");
  SchemeOptions train_scheme;
  DictOptions train_dict;
  std::string train_corpus;
  std::string train_out;
  std::size_t train_length = 1000;
  std::string train_features = "full";
  std::size_t train_longest = 0;
  SvmConfig svm;
  train_scheme.add(train_cmd);
  train_dict.add(train_cmd);
  train_cmd->add_option("--corpus", train_corpus, "training corpus root")->required();
  train_cmd->add_option("--out", train_out, "model JSON (stdout if omitted)");
  train_cmd->add_option("--word-length", train_length, "front segment length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--features", train_features, "full, ode_only or odv_only")
      ->check(CLI::IsMember({"full", "ode_only", "odv_only"}))
      ->capture_default_str();
  train_cmd->add_option("--longest-chapters", train_longest, "keep the N longest texts per author");
  train_cmd->add_option("--C", svm.c, "soft-margin constant")->capture_default_str();
  train_cmd->add_option("--tolerance", svm.tolerance, "KKT tolerance")->capture_default_str();
  train_cmd->add_option("--max-iterations", svm.max_iterations, "SMO iteration cap")
      ->capture_default_str();
  train_cmd->add_option("--seed", svm.seed, "recorded with the model")->capture_default_str();

  // attribute
  auto* attr = app.add_subcommand("attribute", "Closed-set attribution with a trained model");
  DictOptions attr_dict;
  std::string attr_model;
  std::string attr_corpus;
  std::vector<std::string> attr_inputs;
  std::optional<std::size_t> attr_length;
  std::string attr_out;
  attr_dict.add(attr);
  attr->add_option("--model", attr_model, "model JSON from train")->required();
  attr->add_option("--corpus", attr_corpus, "labelled test corpus (reports accuracy)");
  attr->add_option("--input", attr_inputs, "individual text files");
  attr->add_option("--word-length", attr_length, "override the model's segment length")
      ->check(CLI::PositiveNumber);
  attr->add_option("--out", attr_out, "output TSV (stdout if omitted)");

  // open-attribute
  auto* open = app.add_subcommand("open-attribute",
                                  "Open-set attribution of long texts with confidence thresholding");
  DictOptions open_dict;
  std::string open_model;
  std::vector<std::string> open_inputs;
  std::optional<std::size_t> open_length;
  double theta = 0.5;
  std::string open_out;
  open_dict.add(open);
  open->add_option("--model", open_model, "model JSON from train")->required();
  open->add_option("--input", open_inputs, "long text files")->required();
  open->add_option("--word-length", open_length, "override the model's segment length")
      ->check(CLI::PositiveNumber);
  open->add_option("--theta", theta, "confidence threshold in (0, 1]")->capture_default_str();
  open->add_option("--out", open_out, "report JSON (stdout if omitted)");

  // delta
  auto* delta = app.add_subcommand("delta", "Burrows's Delta baseline");
  DictOptions delta_dict;
  std::string delta_train;
  std::string delta_profile_in;
  std::string delta_profile_out;
  std::string delta_test;
  std::vector<std::string> delta_inputs;
  std::size_t n_words = 150;
  std::size_t top_k = 1;
  std::optional<double> threshold;
  std::size_t delta_length = 1000;
  std::string delta_out;
  delta_dict.add(delta, false);
  delta->add_option("--train", delta_train, "training corpus root");
  delta->add_option("--profile", delta_profile_in, "load a saved profile instead of training");
  delta->add_option("--save-profile", delta_profile_out, "write the profile JSON");
  delta->add_option("--test", delta_test, "labelled test corpus (reports accuracy)");
  delta->add_option("--input", delta_inputs, "individual text files");
  delta->add_option("--n-words", n_words, "most frequent dictionary words used")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  delta->add_option("--top-k", top_k, "count a hit when the author ranks in the top k")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  delta->add_option("--threshold", threshold, "reject when the best score exceeds this");
  delta->add_option("--word-length", delta_length, "front segment length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  delta->add_option("--out", delta_out, "output TSV (stdout if omitted)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run closed and open protocol sweeps");
  std::string exp_config;
  std::vector<std::string> exp_sets;
  std::string exp_format = "csv";
  std::string exp_kind = "auto";
  std::optional<std::string> exp_output;
  std::optional<std::uint64_t> exp_seed;
  std::optional<std::string> exp_partition;
  std::optional<std::string> exp_odv;
  std::optional<std::string> exp_lengths;
  std::optional<std::string> exp_features;
  std::optional<std::size_t> exp_longest;
  exp->add_option("--config", exp_config, "key = value configuration file");
  exp->add_option("--set", exp_sets, "override a setting, key=value (repeatable)");
  exp->add_option("--format", exp_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  exp->add_option("--kind", exp_kind, "closed, open or auto")
      ->check(CLI::IsMember({"closed", "open", "auto"}))
      ->capture_default_str();
  exp->add_option("--output", exp_output, "output prefix");
  exp->add_option("--seed", exp_seed, "author sampling seed");
  exp->add_option("--partition", exp_partition, "partition list, e.g. radix,log");
  exp->add_option("--odv-mode", exp_odv, "variance or rms");
  exp->add_option("--word-lengths", exp_lengths, "comma list of segment lengths");
  exp->add_option("--features", exp_features, "comma list of full, ode_only, odv_only");
  exp->add_option("--longest-chapters", exp_longest, "keep the N longest texts per author");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  if (*build) {
    const auto docs = load_labelled(build_corpus);
    emit(build_out, to_tsv(build_dictionary(docs)));
    return 0;
  }

  if (*feat) {
    if (feat_corpus.empty() == feat_inputs.empty()) {
      std::cerr << "featurize: give exactly one of --corpus or --input\n";
      return kUsageError;
    }
    const auto scheme = feat_scheme.scheme();
    const auto mode = feat_scheme.mode();
    const auto mode_seg = parse_segment_mode(feat_segment);
    const auto dict = feat_dict.load();
    const auto docs = feat_corpus.empty() ? load_inputs(feat_inputs) : load_labelled(feat_corpus);
    std::string out;
    for (const auto& doc : docs) {
      const auto pieces = segment(tokenize(doc.text), feat_length, mode_seg);
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto id = mode_seg == SegmentMode::Chunks ? doc.source_id + "#" + std::to_string(i)
                                                        : doc.source_id;
        out += to_json_record(style_vector(pieces[i], *dict, scheme, mode), id, doc.author_label);
        out += '\n';
      }
    }
    emit(feat_out, out);
    return 0;
  }

  if (*train_cmd) {
    PipelineConfig config;
    config.scheme = train_scheme.scheme();
    config.mode = train_scheme.mode();
    config.word_length = train_length;
    config.selector = parse_feature_selector(train_features);
    config.svm = svm;
    const auto docs = load_labelled(train_corpus, train_longest);
    const auto attributor = BasicAttributor::train(docs, train_dict.load(), config);
    emit(train_out, model_file(attributor.model(), train_length));
    return 0;
  }

  const auto load_attributor = [](const std::string& model_path, const DictOptions& dict,
                                  std::optional<std::size_t> length) {
    const auto text = slurp(model_path);
    auto model = LinearSvmModel::from_json(text);
    PipelineConfig config;
    config.scheme = model.scaling().scheme;
    config.mode = model.scaling().mode;
    config.selector = model.scaling().selector;
    config.svm = model.config();
    config.word_length = length.value_or(1000);
    if (!length) {
      const auto j = nlohmann::json::parse(text, nullptr, false);
      if (j.is_object() && j.contains("word_length")) {
        config.word_length = j.at("word_length").get<std::size_t>();
      }
    }
    return BasicAttributor(dict.load(), config, std::move(model));
  };

  if (*attr) {
    if (attr_corpus.empty() == attr_inputs.empty()) {
      std::cerr << "attribute: give exactly one of --corpus or --input\n";
      return kUsageError;
    }
    const auto attributor = load_attributor(attr_model, attr_dict, attr_length);
    if (!attr_corpus.empty()) {
      emit(attr_out, report_text(attributor.evaluate(load_labelled(attr_corpus))));
      return 0;
    }
    std::string out = "source_id\tpredicted\n";
    for (const auto& doc : load_inputs(attr_inputs)) {
      out += doc.source_id + "\t" +
             attributor.attribute(front_sample(doc, attributor.config().word_length)) + "\n";
    }
    emit(attr_out, out);
    return 0;
  }

  if (*open) {
    const auto attributor = load_attributor(open_model, open_dict, open_length);
    std::vector<nlohmann::ordered_json> reports;
    for (const auto& doc : load_inputs(open_inputs)) {
      const auto r = open_attribute(doc, attributor, attributor.config().word_length, theta);
      reports.push_back(nlohmann::ordered_json::parse(r.to_json()));
    }
    const auto out = reports.size() == 1 ? reports.front() : nlohmann::ordered_json(reports);
    emit(open_out, out.dump(2) + "\n");
    return 0;
  }

  if (*delta) {
    DeltaProfile profile;
    if (!delta_profile_in.empty()) {
      profile = DeltaProfile::from_json(slurp(delta_profile_in));
    } else {
      if (delta_train.empty() || delta_dict.path.empty()) {
        std::cerr << "delta: --train and --dict are required without --profile\n";
        return kUsageError;
      }
      std::vector<LabeledText> train;
      for (const auto& doc : load_labelled(delta_train)) {
        train.push_back({front_sample(doc, delta_length), *doc.author_label});
      }
      profile = build_profile(train, *delta_dict.load(), n_words);
    }
    if (!delta_profile_out.empty()) emit(delta_profile_out, profile.to_json());

    std::vector<Document> docs;
    if (!delta_test.empty()) docs = load_labelled(delta_test);
    const auto inputs = load_inputs(delta_inputs);
    docs.insert(docs.end(), inputs.begin(), inputs.end());
    if (docs.empty()) {
      if (delta_profile_out.empty()) {
        std::cerr << "delta: nothing to do (give --test, --input or --save-profile)\n";
        return kUsageError;
      }
      return 0;
    }
    std::string out = "source_id\ttrue_author\tdecision\tscore\tranking\n";
    std::size_t labelled = 0;
    std::size_t hits = 0;
    for (const auto& doc : docs) {
      const auto sample = front_sample(doc, delta_length);
      const auto ranking = delta_ranking(profile, sample);
      const auto& best = ranking.front();
      const bool accepted = !threshold || best.score <= *threshold;
      std::string ranks;
      for (std::size_t i = 0; i < ranking.size() && i < std::max<std::size_t>(top_k, 1); ++i) {
        if (i) ranks += "|";
        ranks += ranking[i].author;
      }
      char score[32];
      std::snprintf(score, sizeof score, "%.6f", best.score);
      out += doc.source_id + "\t" + doc.author_label.value_or("") + "\t" +
             (accepted ? best.author : std::string("Reject")) + "\t" + score + "\t" + ranks + "\n";
      if (doc.author_label) {
        ++labelled;
        hits += accepted && delta_in_top_k(profile, sample, *doc.author_label, top_k);
      }
    }
    if (labelled > 0) {
      char acc[32];
      std::snprintf(acc, sizeof acc, "%.6f", static_cast<double>(hits) / static_cast<double>(labelled));
      out += std::string("# top_") + std::to_string(top_k) + "_accuracy = " + acc + "\n";
    }
    emit(delta_out, out);
    return 0;
  }

  if (*exp) {
    ExperimentConfig config;
    if (!exp_config.empty()) config = load_experiment_config(exp_config);
    for (const auto& s : exp_sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        std::cerr << "experiment: --set expects key=value, got '" << s << "'\n";
        return kUsageError;
      }
      const auto trim = [](std::string v) {
        const auto b = v.find_first_not_of(" \t");
        const auto e = v.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
      };
      apply_setting(config, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    if (exp_output) apply_setting(config, "output", *exp_output);
    if (exp_seed) apply_setting(config, "seed", std::to_string(*exp_seed));
    if (exp_partition) apply_setting(config, "partitions", *exp_partition);
    if (exp_odv) apply_setting(config, "odv_mode", *exp_odv);
    if (exp_lengths) apply_setting(config, "word_lengths", *exp_lengths);
    if (exp_features) apply_setting(config, "features", *exp_features);
    if (exp_longest) apply_setting(config, "longest_chapters", std::to_string(*exp_longest));

    const bool closed = exp_kind == "closed" || (exp_kind == "auto" && config.has_closed());
    const bool open_set = exp_kind == "open" || (exp_kind == "auto" && config.has_open());
    if (!closed && !open_set) {
      std::cerr << "experiment: configure train_corpus with test_corpus and/or open corpora\n";
      return kUsageError;
    }
    const auto format = exp_format == "json" ? ReportFormat::Json : ReportFormat::Csv;
    const auto write = [&](const ExperimentResults& results, const std::string& suffix) {
      auto prefix = config.output;
      prefix += suffix;
      for (const auto& p : report_emit(results, format, prefix)) {
        std::cerr << "wrote " << p.generic_string() << "\n";
      }
    };
    if (closed) write(run_closed_experiment(config), ".closed");
    if (open_set) write(run_open_experiment(config), ".open");
    return 0;
  }
  return kUsageError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what();
    if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
    std::cerr << "\n";
    return e.code() == ErrorCode::InvalidArgument ? kUsageError : kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
}
