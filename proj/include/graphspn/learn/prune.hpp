#pragma once

#include "graphspn/spn/spn.hpp"

namespace graphspn::learn {

/// Drops sum edges whose weight is below epsilon (a sum always keeps its
/// heaviest child), removes nodes no longer reachable from the root,
/// renumbers the survivors in their original order and renormalizes.
spn::Spn prune(const spn::Spn& spn, double epsilon);

}  // namespace graphspn::learn
