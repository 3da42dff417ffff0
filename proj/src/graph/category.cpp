#include "graphspn/graph/category.hpp"

#include <string>

#include "graphspn/common/errors.hpp"

namespace graphspn::graph {

std::string_view to_code(PlaceCategory c) { return kCategoryCodes.at(index_of(c)); }

PlaceCategory category_from_code(std::string_view code) {
  for (std::uint32_t i = 0; i < kNumCategories; ++i) {
    if (kCategoryCodes[i] == code) return category_at(i);
  }
  throw DataError("unknown place category '" + std::string(code) + "'");
}

}  // namespace graphspn::graph
