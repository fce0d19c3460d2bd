#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nfzwda/nf_dict.hpp"
#include "nfzwda/partition.hpp"
#include "nfzwda/text_ingest.hpp"

namespace nfzwda {

/// How the dispersion of a zone's occurrence distances is measured.
///
/// Variance: gamma = (1/alpha) * sqrt(mean((d - alpha)^2)), the centred form.
/// Rms:      gamma = (1/alpha) * sqrt(mean(d^2)).
/// Per zone gamma_rms^2 = gamma_var^2 + 1.
enum class OdvMode { Variance, Rms };

OdvMode parse_odv_mode(std::string_view name);
const char* to_string(OdvMode mode) noexcept;

struct ZoneFeature {
  double alpha = 1.0;  // ODE
  double gamma = 0.0;  // ODV
  friend bool operator==(const ZoneFeature&, const ZoneFeature&) = default;
};

/// Feature values of a zone without occurrences: the formulas evaluated on
/// the single boundary distance [1].
ZoneFeature empty_zone_feature(OdvMode mode) noexcept;

/// Gaps between neighbouring occurrences, including the two boundary gaps
/// from 0 to the first occurrence and from the last occurrence to 1.
/// Returns count() + 1 values summing to 1; [1] for an empty zone.
std::vector<double> occurrence_distances(const ZoneOccurrences& zone);

/// 1 / (n_k + 1).
double ode(const ZoneOccurrences& zone);

double odv(const ZoneOccurrences& zone, OdvMode mode);

/// Sparse per-zone (ODE, ODV) features of one text.
struct StyleVector {
  std::map<ZoneIndex, ZoneFeature> features;
  std::size_t word_count = 0;
  PartitionScheme scheme = PartitionScheme::radix();
  OdvMode mode = OdvMode::Variance;

  /// The stored feature, or the empty-zone values when the zone is absent.
  ZoneFeature at(ZoneIndex zone) const;
};

StyleVector style_vector(const TokenSequence& seq, const NFDictionary& dict,
                         const PartitionScheme& scheme, OdvMode mode = OdvMode::Variance);

StyleVector style_vector(const ZoneMap& zones, std::size_t word_count,
                         const PartitionScheme& scheme, OdvMode mode);

/// One-line JSON record: source_id, author_label (null when absent), n,
/// scheme, odv_mode and features as [zone, alpha, gamma] triples.
std::string to_json_record(const StyleVector& v, std::string_view source_id,
                           const std::optional<std::string>& author_label);

struct StyleRecord {
  std::string source_id;
  std::optional<std::string> author_label;
  StyleVector vector;
};

/// Inverse of to_json_record. Throws Error(FormatError).
StyleRecord from_json_record(std::string_view line);

}  // namespace nfzwda
