#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace gshift {

/// Index (chain, position) of a vector x^chain_position in an adapted set.
/// Both components start at 1.
struct ChainIndex {
  std::int64_t chain = 1;
  std::int64_t position = 1;

  // Member order makes the defaulted comparison lexicographic.
  friend auto operator<=>(const ChainIndex&, const ChainIndex&) = default;
  friend bool operator==(const ChainIndex&, const ChainIndex&) = default;

  [[nodiscard]] std::string str() const {
    return "(" + std::to_string(chain) + "," + std::to_string(position) + ")";
  }
};

[[nodiscard]] inline std::strong_ordering lex_compare(const ChainIndex& a, const ChainIndex& b) {
  return a <=> b;
}

/// (chain, position - 1), absent for the first position of a chain.
[[nodiscard]] inline std::optional<ChainIndex> immediate_predecessor(const ChainIndex& a) {
  if (a.position <= 1) return std::nullopt;
  return ChainIndex{a.chain, a.position - 1};
}

}  // namespace gshift
