#pragma once

#include <json.hpp>

#include "nfzwda/error.hpp"
#include "nfzwda/partition.hpp"

namespace nfzwda::detail {

inline nlohmann::json scheme_to_json(const PartitionScheme& scheme) {
  nlohmann::json j;
  j["type"] = scheme.name();
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, LinearPartition>) {
          j["L"] = p.base_size;
        } else if constexpr (std::is_same_v<T, RadixPartition>) {
          j["L"] = p.base_size;
          j["R"] = p.radix;
        } else {
          j["r"] = p.ratio;
        }
      },
      scheme.variant());
  return j;
}

inline PartitionScheme scheme_from_json(const nlohmann::json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "linear") return PartitionScheme::linear(j.at("L").get<std::uint64_t>());
  if (type == "radix") {
    return PartitionScheme::radix(j.at("L").get<std::uint64_t>(),
                                  j.at("R").get<std::uint64_t>());
  }
  if (type == "log") return PartitionScheme::logarithm(j.at("r").get<double>());
  throw Error(ErrorCode::FormatError, "unknown partition type '" + type + "'");
}

/// Wraps nlohmann parse/type errors as FormatError.
template <class F>
auto parse_guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError, e.what());
  }
}

}  // namespace nfzwda::detail
