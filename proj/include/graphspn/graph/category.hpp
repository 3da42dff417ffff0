#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace graphspn::graph {

// Place classes, encoded 0..9 in alphabetical order of their codes.
enum class PlaceCategory : std::uint8_t {
  k1PO,  // 1-person office
  k2PO,  // 2-person office
  kBA,   // bathroom
  kCR,   // corridor
  kDW,   // doorway
  kKT,   // kitchen
  kLAB,  // laboratory
  kLO,   // large office
  kMR,   // meeting room
  kUT,   // utility room
};

inline constexpr std::size_t kNumCategories = 10;

inline constexpr std::array<std::string_view, kNumCategories> kCategoryCodes = {
    "1PO", "2PO", "BA", "CR", "DW", "KT", "LAB", "LO", "MR", "UT"};

inline constexpr std::uint32_t index_of(PlaceCategory c) { return static_cast<std::uint32_t>(c); }
inline constexpr PlaceCategory category_at(std::uint32_t i) { return static_cast<PlaceCategory>(i); }

std::string_view to_code(PlaceCategory c);

// Throws DataError for an unknown code.
PlaceCategory category_from_code(std::string_view code);

}  // namespace graphspn::graph
