#pragma once

#include <string>

#include "nfzwda/nf_dict.hpp"
#include "nfzwda/partition.hpp"
#include "nfzwda/text_ingest.hpp"

namespace nfzwda::testing {

// The two-group texts of the three-level word distribution figure: groups A
// and B, 14 words each, identical vocabulary and frequencies.
inline const char* kText1 = "ABAABBABBAABAA";
inline const char* kText2 = "AABBBBABBAAAAA";

inline std::string spell(const char* pattern) {
  std::string out;
  for (const char* c = pattern; *c; ++c) {
    if (!out.empty()) out.push_back(' ');
    out += (*c == 'A') ? "alpha" : "beta";
  }
  return out;
}

// "alpha" lands in zone 100 and "beta" in zone 0 under the default radix
// scheme (L=10).
inline NFDictionary two_group_dictionary() {
  return NFDictionary({{"alpha", 1000}, {"beta", 0}}, "two groups");
}

inline constexpr ZoneIndex kZoneA = 100;
inline constexpr ZoneIndex kZoneB = 0;

}  // namespace nfzwda::testing
