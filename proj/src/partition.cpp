#include "nfzwda/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nfzwda/error.hpp"

namespace nfzwda {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ZoneIndex radix_zone(const RadixPartition& p, NfValue f) {
  const std::uint64_t base = f / p.base_size;
  if (base < p.radix) return base;
  // Largest E with R^E <= B, by integer exponentiation.
  std::uint64_t exponent = 0;
  std::uint64_t power = 1;
  while (power <= base / p.radix) {
    power *= p.radix;
    ++exponent;
  }
  return (p.radix - 1) * exponent + base / power;
}

// Largest k with r^k <= f, walking r^k upward by repeated multiplication.
ZoneIndex log_zone_from(long double ratio, long double power, ZoneIndex k, NfValue f) {
  const auto target = static_cast<long double>(f);
  for (;;) {
    const long double next = power * ratio;
    if (next > target) return k;
    power = next;
    ++k;
  }
}

}  // namespace

PartitionScheme PartitionScheme::linear(std::uint64_t base_size) {
  if (base_size < 1) throw Error(ErrorCode::InvalidArgument, "linear partition needs L >= 1");
  return PartitionScheme(LinearPartition{base_size});
}

PartitionScheme PartitionScheme::radix(std::uint64_t base_size, std::uint64_t radix) {
  if (base_size < 1) throw Error(ErrorCode::InvalidArgument, "radix partition needs L >= 1");
  if (radix < 2) throw Error(ErrorCode::InvalidArgument, "radix partition needs R > 1");
  return PartitionScheme(RadixPartition{base_size, radix});
}

PartitionScheme PartitionScheme::logarithm(double ratio) {
  if (!(ratio > 1.0) || !std::isfinite(ratio)) {
    throw Error(ErrorCode::InvalidArgument, "logarithm partition needs finite r > 1");
  }
  return PartitionScheme(LogPartition{ratio});
}

PartitionScheme PartitionScheme::from_name(std::string_view name, std::uint64_t base_size,
                                           std::uint64_t radix, double ratio) {
  if (name == "linear") return linear(base_size);
  if (name == "radix") return PartitionScheme::radix(base_size, radix);
  if (name == "log" || name == "logarithm") return logarithm(ratio);
  throw Error(ErrorCode::InvalidArgument, "unknown partition '" + std::string(name) + "'");
}

std::string PartitionScheme::name() const {
  return std::visit(overloaded{
                        [](const LinearPartition&) { return std::string("linear"); },
                        [](const RadixPartition&) { return std::string("radix"); },
                        [](const LogPartition&) { return std::string("log"); },
                    },
                    variant_);
}

std::string PartitionScheme::describe() const {
  return std::visit(
      overloaded{
          [](const LinearPartition& p) {
            return "linear(L=" + std::to_string(p.base_size) + ")";
          },
          [](const RadixPartition& p) {
            return "radix(L=" + std::to_string(p.base_size) +
                   ",R=" + std::to_string(p.radix) + ")";
          },
          [](const LogPartition& p) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "log(r=%.17g)", p.ratio);
            return std::string(buf);
          },
      },
      variant_);
}

ZoneIndex zone_index(const PartitionScheme& scheme, NfValue f) {
  return std::visit(overloaded{
                        [f](const LinearPartition& p) -> ZoneIndex { return f / p.base_size; },
                        [f](const RadixPartition& p) { return radix_zone(p, f); },
                        [f](const LogPartition& p) -> ZoneIndex {
                          if (f == 0) return 0;
                          return log_zone_from(p.ratio, 1.0L, 0, f);
                        },
                    },
                    scheme.variant());
}

std::uint64_t zone_count(const PartitionScheme& scheme, NfValue f_max) {
  return zone_index(scheme, f_max) + 1;
}

ZoneIndexer::ZoneIndexer(const PartitionScheme& scheme, NfValue f_max) : scheme_(scheme) {
  if (const auto* log = std::get_if<LogPartition>(&scheme.variant())) {
    const long double ratio = log->ratio;
    const auto limit = static_cast<long double>(f_max);
    long double power = 1.0L;
    log_bounds_.push_back(power);
    while (power <= limit) {
      power *= ratio;
      log_bounds_.push_back(power);
    }
  }
}

ZoneIndex ZoneIndexer::operator()(NfValue f) const {
  const auto* log = std::get_if<LogPartition>(&scheme_.variant());
  if (log == nullptr) return zone_index(scheme_, f);
  if (f == 0) return 0;
  const auto target = static_cast<long double>(f);
  if (target < log_bounds_.back()) {
    const auto it = std::upper_bound(log_bounds_.begin(), log_bounds_.end(), target);
    return static_cast<ZoneIndex>(it - log_bounds_.begin()) - 1;
  }
  const ZoneIndex last = log_bounds_.size() - 1;
  return log_zone_from(log->ratio, log_bounds_.back(), last, f);
}

ZoneMap partition(const TokenSequence& seq, const NFDictionary& dict,
                  const PartitionScheme& scheme) {
  const ZoneIndexer indexer(scheme, dict.f_max());
  ZoneMap zones;
  const auto& tokens = seq.tokens();
  const auto& positions = seq.positions();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const ZoneIndex k = indexer(dict.lookup(tokens[i]));
    auto& zone = zones[k];
    zone.zone = k;
    zone.positions.push_back(positions[i]);
  }
  return zones;
}

}  // namespace nfzwda
