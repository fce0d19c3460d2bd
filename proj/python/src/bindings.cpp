#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nfzwda/attribution.hpp"
#include "nfzwda/delta.hpp"
#include "nfzwda/error.hpp"
#include "nfzwda/experiment.hpp"

namespace py = pybind11;
using namespace nfzwda;

namespace {

std::vector<Document> to_documents(const std::vector<py::tuple>& items) {
  std::vector<Document> docs;
  for (const auto& t : items) {
    if (t.size() != 3) throw Error(ErrorCode::InvalidArgument, "documents are (label, id, text)");
    Document d;
    if (!t[0].is_none()) d.author_label = t[0].cast<std::string>();
    d.source_id = t[1].cast<std::string>();
    d.text = t[2].cast<std::string>();
    docs.push_back(std::move(d));
  }
  return docs;
}

py::tuple from_document(const Document& d) {
  return py::make_tuple(d.author_label ? py::cast(*d.author_label) : py::none(), d.source_id,
                        d.text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Natural-frequency-zone authorship attribution";

  static py::exception<Error> error_type(m, "NfzwdaError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
      exc.attr("code") = to_string(e.code());
      exc.attr("line") = e.line();
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  // Text
  py::class_<TokenSequence>(m, "TokenSequence")
      .def(py::init<std::vector<std::string>>(), py::arg("tokens"))
      .def_property_readonly("tokens", &TokenSequence::tokens)
      .def_property_readonly("positions", &TokenSequence::positions)
      .def("joined", &TokenSequence::joined)
      .def("__len__", &TokenSequence::size);
  m.def("tokenize", &tokenize, py::arg("text"));
  m.def("split_words", &split_words, py::arg("text"));
  m.def(
      "segment",
      [](const TokenSequence& seq, std::size_t word_length, const std::string& mode) {
        return segment(seq, word_length, parse_segment_mode(mode));
      },
      py::arg("seq"), py::arg("word_length"), py::arg("mode") = "front");
  m.def(
      "load_corpus",
      [](const std::filesystem::path& root) {
        const auto load = load_corpus(root);
        std::vector<py::tuple> docs;
        for (const auto& d : load.documents) docs.push_back(from_document(d));
        std::vector<std::pair<std::string, std::string>> errors;
        for (const auto& e : load.errors) errors.emplace_back(e.path, e.reason);
        return py::make_tuple(docs, errors);
      },
      py::arg("root"), "Returns ([(label, id, text)], [(path, reason)]).");

  // Dictionary
  py::class_<NFDictionary, std::shared_ptr<NFDictionary>>(m, "NFDictionary")
      .def(py::init<std::vector<std::pair<std::string, NfValue>>, std::string>(),
           py::arg("entries"), py::arg("source") = "")
      .def("lookup", &NFDictionary::lookup, py::arg("word"))
      .def_property_readonly("f_max", &NFDictionary::f_max)
      .def_property_readonly("source", &NFDictionary::source)
      .def("top_words", &NFDictionary::top_words, py::arg("count"))
      .def("entries", &NFDictionary::sorted_entries)
      .def("to_tsv", [](const NFDictionary& d) { return to_tsv(d); })
      .def("save", [](const NFDictionary& d, const std::filesystem::path& p) { save_dictionary(d, p); })
      .def("__len__", &NFDictionary::size)
      .def("__eq__", [](const NFDictionary& a, const NFDictionary& b) { return a == b; });
  m.def(
      "build_dictionary",
      [](const std::vector<py::tuple>& docs) { return build_dictionary(to_documents(docs)); },
      py::arg("documents"));
  m.def(
      "load_dictionary",
      [](const std::filesystem::path& path, bool permissive) {
        return load_dictionary(path, permissive ? DictionaryFormat::Permissive
                                                : DictionaryFormat::Canonical);
      },
      py::arg("path"), py::arg("permissive") = false);
  m.def(
      "parse_tsv",
      [](const std::string& text, bool permissive) {
        return parse_tsv(text, permissive ? DictionaryFormat::Permissive : DictionaryFormat::Canonical);
      },
      py::arg("text"), py::arg("permissive") = false);

  // Partition
  py::class_<PartitionScheme>(m, "PartitionScheme")
      .def_static("linear", &PartitionScheme::linear, py::arg("L") = 10)
      .def_static("radix", &PartitionScheme::radix, py::arg("L") = 10, py::arg("R") = 100000)
      .def_static("logarithm", &PartitionScheme::logarithm, py::arg("r") = 1.0001)
      .def_property_readonly("name", &PartitionScheme::name)
      .def("__repr__", &PartitionScheme::describe)
      .def("__eq__", [](const PartitionScheme& a, const PartitionScheme& b) { return a == b; });
  m.def("zone_index", &zone_index, py::arg("scheme"), py::arg("f"));
  m.def("zone_count", &zone_count, py::arg("scheme"), py::arg("f_max"));
  m.def(
      "partition",
      [](const TokenSequence& seq, const NFDictionary& dict, const PartitionScheme& scheme) {
        std::map<ZoneIndex, std::vector<double>> out;
        for (const auto& [k, z] : partition(seq, dict, scheme)) out[k] = z.positions;
        return out;
      },
      py::arg("seq"), py::arg("dict"), py::arg("scheme"), "Zone index -> positions.");

  // Features
  py::class_<StyleVector>(m, "StyleVector")
      .def_property_readonly("features",
                             [](const StyleVector& v) {
                               std::map<ZoneIndex, std::pair<double, double>> out;
                               for (const auto& [k, f] : v.features) out[k] = {f.alpha, f.gamma};
                               return out;
                             })
      .def_readonly("word_count", &StyleVector::word_count)
      .def_readonly("scheme", &StyleVector::scheme)
      .def_property_readonly("odv_mode", [](const StyleVector& v) { return to_string(v.mode); })
      .def("to_json", [](const StyleVector& v, const std::string& id,
                         std::optional<std::string> label) { return to_json_record(v, id, label); },
           py::arg("source_id") = "", py::arg("author_label") = py::none());
  m.def(
      "style_vector",
      [](const TokenSequence& seq, const NFDictionary& dict, const PartitionScheme& scheme,
         const std::string& mode) { return style_vector(seq, dict, scheme, parse_odv_mode(mode)); },
      py::arg("seq"), py::arg("dict"), py::arg("scheme") = PartitionScheme::radix(),
      py::arg("odv_mode") = "variance");

  // Classifier pipeline
  py::class_<SvmConfig>(m, "SvmConfig")
      .def(py::init<>())
      .def_readwrite("c", &SvmConfig::c)
      .def_readwrite("tolerance", &SvmConfig::tolerance)
      .def_readwrite("max_iterations", &SvmConfig::max_iterations)
      .def_readwrite("seed", &SvmConfig::seed);

  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init([](const PartitionScheme& scheme, const std::string& mode,
                       std::size_t word_length, const std::string& features, const SvmConfig& svm) {
             PipelineConfig c;
             c.scheme = scheme;
             c.mode = parse_odv_mode(mode);
             c.word_length = word_length;
             c.selector = parse_feature_selector(features);
             c.svm = svm;
             return c;
           }),
           py::arg("scheme") = PartitionScheme::radix(), py::arg("odv_mode") = "variance",
           py::arg("word_length") = 1000, py::arg("features") = "full",
           py::arg("svm") = SvmConfig{})
      .def_readonly("scheme", &PipelineConfig::scheme)
      .def_readonly("word_length", &PipelineConfig::word_length);

  py::class_<AttributionReport>(m, "AttributionReport")
      .def_readonly("labels", &AttributionReport::labels)
      .def_readonly("confusion", &AttributionReport::confusion)
      .def_readonly("accuracy", &AttributionReport::accuracy)
      .def_property_readonly("predictions",
                             [](const AttributionReport& r) {
                               std::vector<std::tuple<std::string, std::string, std::string>> out;
                               for (const auto& p : r.predictions) {
                                 out.emplace_back(p.source_id, p.true_label, p.predicted);
                               }
                               return out;
                             })
      .def("row_proportions", &AttributionReport::row_proportions);

  py::class_<ConfidenceReport>(m, "ConfidenceReport")
      .def_readonly("subset_id", &ConfidenceReport::subset_id)
      .def_readonly("segments", &ConfidenceReport::segments)
      .def_readonly("theta", &ConfidenceReport::theta)
      .def_readonly("decision", &ConfidenceReport::decision)
      .def_readonly("max_confidence", &ConfidenceReport::max_confidence)
      .def_property_readonly("candidates",
                             [](const ConfidenceReport& r) {
                               std::vector<std::tuple<std::string, std::size_t, double, double>> out;
                               for (const auto& c : r.candidates) {
                                 out.emplace_back(c.label, c.attributed_count, c.proportion,
                                                  c.confidence);
                               }
                               return out;
                             })
      .def("to_json", &ConfidenceReport::to_json);

  py::class_<BasicAttributor>(m, "BasicAttributor")
      .def_static(
          "train",
          [](const std::vector<py::tuple>& docs, std::shared_ptr<NFDictionary> dict,
             const PipelineConfig& config) {
            return BasicAttributor::train(to_documents(docs), std::move(dict), config);
          },
          py::arg("documents"), py::arg("dict"), py::arg("config") = PipelineConfig{},
          py::call_guard<py::gil_scoped_release>())
      .def_static(
          "from_model",
          [](const std::string& model_json, std::shared_ptr<NFDictionary> dict,
             std::size_t word_length) {
            auto model = LinearSvmModel::from_json(model_json);
            PipelineConfig c;
            c.scheme = model.scaling().scheme;
            c.mode = model.scaling().mode;
            c.selector = model.scaling().selector;
            c.svm = model.config();
            c.word_length = word_length;
            return BasicAttributor(std::move(dict), c, std::move(model));
          },
          py::arg("model_json"), py::arg("dict"), py::arg("word_length") = 1000)
      .def("attribute",
           [](const BasicAttributor& a, const std::string& text) {
             return a.attribute(front_sample(Document{std::nullopt, "", text}, a.config().word_length));
           },
           py::arg("text"))
      .def("evaluate",
           [](const BasicAttributor& a, const std::vector<py::tuple>& docs) {
             return a.evaluate(to_documents(docs));
           },
           py::arg("documents"))
      .def("open_attribute",
           [](const BasicAttributor& a, const std::string& text, double theta,
              const std::string& subset_id) {
             return open_attribute(Document{std::nullopt, subset_id, text}, a,
                                   a.config().word_length, theta);
           },
           py::arg("text"), py::arg("theta") = 0.5, py::arg("subset_id") = "")
      .def_property_readonly("labels", [](const BasicAttributor& a) { return a.model().labels(); })
      .def("model_json", [](const BasicAttributor& a) { return a.model().to_json(); });

  m.def("confidence", &confidence, py::arg("proportion"), py::arg("set_size"));
  m.def(
      "decide",
      [](const std::vector<std::pair<std::string, double>>& confidences, double theta) {
        std::vector<CandidateConfidence> c;
        for (const auto& [label, f] : confidences) c.push_back({label, 0, 0.0, f});
        return decide(c, theta);
      },
      py::arg("confidences"), py::arg("theta") = 0.5, "None means Reject.");

  // Delta
  py::class_<DeltaProfile>(m, "DeltaProfile")
      .def_readonly("words", &DeltaProfile::words)
      .def_readonly("mean", &DeltaProfile::mean)
      .def_readonly("stdev", &DeltaProfile::stdev)
      .def_readonly("authors", &DeltaProfile::authors)
      .def("to_json", &DeltaProfile::to_json)
      .def_static("from_json", &DeltaProfile::from_json, py::arg("text"))
      .def("score",
           [](const DeltaProfile& p, const std::vector<std::string>& tokens, const std::string& a) {
             return delta_score(p, TokenSequence(tokens), a);
           },
           py::arg("tokens"), py::arg("author"))
      .def("ranking",
           [](const DeltaProfile& p, const std::vector<std::string>& tokens) {
             std::vector<std::pair<std::string, double>> out;
             for (const auto& s : delta_ranking(p, TokenSequence(tokens))) out.emplace_back(s.author, s.score);
             return out;
           },
           py::arg("tokens"));
  m.def(
      "build_delta_profile",
      [](const std::vector<std::pair<std::vector<std::string>, std::string>>& texts,
         const NFDictionary& dict, std::size_t n_words) {
        std::vector<LabeledText> train;
        for (const auto& [tokens, label] : texts) train.push_back({TokenSequence(tokens), label});
        return build_profile(train, dict, n_words);
      },
      py::arg("texts"), py::arg("dict"), py::arg("n_words") = 150);

  // Experiments
  m.def(
      "run_experiment",
      [](const std::string& config_text, const std::vector<std::pair<std::string, std::string>>& overrides,
         const std::string& kind, const std::string& format) {
        auto config = parse_experiment_config(config_text);
        for (const auto& [k, v] : overrides) apply_setting(config, k, v);
        py::gil_scoped_release release;
        const auto results =
            kind == "open" ? run_open_experiment(config) : run_closed_experiment(config);
        const auto fmt = format == "json" ? ReportFormat::Json : ReportFormat::Csv;
        std::vector<std::string> paths;
        for (const auto& p : report_emit(results, fmt, config.output)) paths.push_back(p.string());
        return paths;
      },
      py::arg("config_text"), py::arg("overrides") = std::vector<std::pair<std::string, std::string>>{},
      py::arg("kind") = "closed", py::arg("format") = "csv",
      "Runs a closed or open protocol and returns the files written.");
}
