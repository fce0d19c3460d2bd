#include "nfzwda/style_features.hpp"

#include <cmath>

#include "json_util.hpp"
#include "nfzwda/error.hpp"

namespace nfzwda {

OdvMode parse_odv_mode(std::string_view name) {
  if (name == "variance") return OdvMode::Variance;
  if (name == "rms") return OdvMode::Rms;
  throw Error(ErrorCode::InvalidArgument, "unknown odv mode '" + std::string(name) + "'");
}

const char* to_string(OdvMode mode) noexcept {
  return mode == OdvMode::Variance ? "variance" : "rms";
}

ZoneFeature empty_zone_feature(OdvMode mode) noexcept {
  return {1.0, mode == OdvMode::Variance ? 0.0 : 1.0};
}

std::vector<double> occurrence_distances(const ZoneOccurrences& zone) {
  std::vector<double> d;
  d.reserve(zone.count() + 1);
  double previous = 0.0;
  for (const double l : zone.positions) {
    d.push_back(l - previous);
    previous = l;
  }
  d.push_back(1.0 - previous);
  return d;
}

double ode(const ZoneOccurrences& zone) {
  return 1.0 / static_cast<double>(zone.count() + 1);
}

double odv(const ZoneOccurrences& zone, OdvMode mode) {
  const double alpha = ode(zone);
  const double centre = mode == OdvMode::Variance ? alpha : 0.0;
  double sum = 0.0;
  double previous = 0.0;
  const auto add = [&](double d) {
    const double e = d - centre;
    sum += e * e;
  };
  for (const double l : zone.positions) {
    add(l - previous);
    previous = l;
  }
  add(1.0 - previous);
  return std::sqrt(sum * alpha) / alpha;
}

ZoneFeature StyleVector::at(ZoneIndex zone) const {
  const auto it = features.find(zone);
  return it == features.end() ? empty_zone_feature(mode) : it->second;
}

StyleVector style_vector(const ZoneMap& zones, std::size_t word_count,
                         const PartitionScheme& scheme, OdvMode mode) {
  StyleVector v;
  v.word_count = word_count;
  v.scheme = scheme;
  v.mode = mode;
  for (const auto& [k, zone] : zones) {
    v.features.emplace_hint(v.features.end(), k, ZoneFeature{ode(zone), odv(zone, mode)});
  }
  return v;
}

StyleVector style_vector(const TokenSequence& seq, const NFDictionary& dict,
                         const PartitionScheme& scheme, OdvMode mode) {
  return style_vector(partition(seq, dict, scheme), seq.size(), scheme, mode);
}

std::string to_json_record(const StyleVector& v, std::string_view source_id,
                           const std::optional<std::string>& author_label) {
  nlohmann::ordered_json j;
  j["source_id"] = source_id;
  j["author_label"] = author_label ? nlohmann::ordered_json(*author_label) : nullptr;
  j["n"] = v.word_count;
  j["scheme"] = detail::scheme_to_json(v.scheme);
  j["odv_mode"] = to_string(v.mode);
  auto features = nlohmann::ordered_json::array();
  for (const auto& [k, f] : v.features) features.push_back({k, f.alpha, f.gamma});
  j["features"] = std::move(features);
  return j.dump();
}

StyleRecord from_json_record(std::string_view line) {
  return detail::parse_guarded([&] {
    const auto j = nlohmann::json::parse(line);
    StyleRecord r;
    r.source_id = j.at("source_id").get<std::string>();
    if (!j.at("author_label").is_null()) r.author_label = j.at("author_label").get<std::string>();
    r.vector.word_count = j.at("n").get<std::size_t>();
    r.vector.scheme = detail::scheme_from_json(j.at("scheme"));
    r.vector.mode = parse_odv_mode(j.at("odv_mode").get<std::string>());
    for (const auto& t : j.at("features")) {
      r.vector.features[t.at(0).get<ZoneIndex>()] =
          ZoneFeature{t.at(1).get<double>(), t.at(2).get<double>()};
    }
    return r;
  });
}

}  // namespace nfzwda
