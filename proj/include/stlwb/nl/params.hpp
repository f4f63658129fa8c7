#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stlwb/pstl/template.hpp"
#include "stlwb/world/grid.hpp"

namespace stlwb::nl {

/// Bindings for the argument slots of `atom` ("robotAt.x", "itemOnRobot.item",
/// ...) that can be read off `text`: coordinates written as "(x, y)" and item
/// names such as "purple cube" or "key". Only what is found is returned.
pstl::Valuation extract_parameters(const std::string& text, const std::string& atom);

/// Binding for the upper bound of the k-th temporal operator (1-based), read
/// from the k-th "N seconds" (or "N steps") mention.
pstl::Valuation extract_parameters(const std::string& text, std::size_t temporal_k);

/// Item mentioned first in `text`.
std::optional<world::Item> find_item(const std::string& text);

/// Every "N seconds" / "N steps" value in order of appearance.
std::vector<std::int64_t> find_durations(const std::string& text);

}  // namespace stlwb::nl
