#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nfzwda/nf_dict.hpp"
#include "nfzwda/text_ingest.hpp"

namespace nfzwda {

using ZoneIndex = std::uint64_t;

struct LinearPartition {
  std::uint64_t base_size = 10;  // L
  friend bool operator==(const LinearPartition&, const LinearPartition&) = default;
};

struct RadixPartition {
  std::uint64_t base_size = 10;     // L
  std::uint64_t radix = 100000;     // R
  friend bool operator==(const RadixPartition&, const RadixPartition&) = default;
};

struct LogPartition {
  double ratio = 1.0001;  // r
  friend bool operator==(const LogPartition&, const LogPartition&) = default;
};

/// How NF values are grouped into zones. Parameters are validated on
/// construction: L >= 1, integer R > 1, real r > 1.
class PartitionScheme {
public:
  using Variant = std::variant<LinearPartition, RadixPartition, LogPartition>;

  static PartitionScheme linear(std::uint64_t base_size = 10);
  static PartitionScheme radix(std::uint64_t base_size = 10, std::uint64_t radix = 100000);
  static PartitionScheme logarithm(double ratio = 1.0001);

  /// `name` is one of linear, radix, log. Parameters not used by the
  /// variant are ignored.
  static PartitionScheme from_name(std::string_view name, std::uint64_t base_size,
                                   std::uint64_t radix, double ratio);

  const Variant& variant() const noexcept { return variant_; }
  std::string name() const;
  /// e.g. "radix(L=10,R=100000)"
  std::string describe() const;

  friend bool operator==(const PartitionScheme&, const PartitionScheme&) = default;

private:
  explicit PartitionScheme(Variant v) : variant_(v) {}
  Variant variant_;
};

/// Zone of a single NF value. f = 0 maps to zone 0 in every scheme.
ZoneIndex zone_index(const PartitionScheme& scheme, NfValue f);

/// Number of zones covering [0, f_max]: zone_index(f_max) + 1.
std::uint64_t zone_count(const PartitionScheme& scheme, NfValue f_max);

/// Repeated zone lookups for one scheme. For the logarithm scheme the zone
/// lower bounds r^k are tabulated once by iterated extended-precision
/// multiplication up to `f_max`, so each lookup is a binary search.
/// Immutable after construction.
class ZoneIndexer {
public:
  ZoneIndexer(const PartitionScheme& scheme, NfValue f_max);

  ZoneIndex operator()(NfValue f) const;

private:
  PartitionScheme scheme_;
  std::vector<long double> log_bounds_;  // log_bounds_[k] = r^k
};

struct ZoneOccurrences {
  ZoneIndex zone = 0;
  std::vector<double> positions;  // strictly increasing, each in [0, 1)

  std::size_t count() const noexcept { return positions.size(); }
};

using ZoneMap = std::map<ZoneIndex, ZoneOccurrences>;

/// Sparse grouping of the sequence's positions by zone; empty zones are not
/// present.
ZoneMap partition(const TokenSequence& seq, const NFDictionary& dict,
                  const PartitionScheme& scheme);

}  // namespace nfzwda
