#include "stlwb/nl/params.hpp"

#include <regex>

#include "stlwb/nl/tagger.hpp"
#include "stlwb/world/atoms.hpp"

namespace stlwb::nl {

namespace {

struct Alias {
  const char* words;
  world::Item item;
};

// Longer aliases first so "door key" wins over "key".
const Alias kAliases[] = {
    {"purple cube", world::Item::PurpleCube}, {"purple block", world::Item::PurpleCube},
    {"purple box", world::Item::PurpleCube},  {"violet cube", world::Item::PurpleCube},
    {"violet block", world::Item::PurpleCube}, {"violet box", world::Item::PurpleCube},
    {"green cube", world::Item::GreenCube},   {"green block", world::Item::GreenCube},
    {"green box", world::Item::GreenCube},    {"door key", world::Item::DoorKey},
    {"key", world::Item::DoorKey},
};

std::optional<std::pair<std::int64_t, std::int64_t>> find_coordinates(const std::string& text) {
  static const std::regex re(R"(\(\s*(\d+)\s*,\s*(\d+)\s*\))");
  std::smatch m;
  if (!std::regex_search(text, m, re)) return std::nullopt;
  return std::pair{std::stoll(m[1].str()), std::stoll(m[2].str())};
}

}  // namespace

std::optional<world::Item> find_item(const std::string& text) {
  const std::string norm = " " + normalize_phrase(text) + " ";
  std::optional<world::Item> best;
  std::size_t best_pos = std::string::npos;
  for (const auto& a : kAliases) {
    std::size_t p = norm.find(" " + std::string(a.words) + " ");
    if (p != std::string::npos && p < best_pos) {
      best_pos = p;
      best = a.item;
    }
  }
  return best;
}

std::vector<std::int64_t> find_durations(const std::string& text) {
  static const std::regex re(R"((\d+) (?:seconds?|secs?|steps?|time steps?)\b)");
  std::vector<std::int64_t> out;
  const std::string norm = normalize_phrase(text);
  for (auto it = std::sregex_iterator(norm.begin(), norm.end(), re); it != std::sregex_iterator(); ++it)
    out.push_back(std::stoll((*it)[1].str()));
  return out;
}

pstl::Valuation extract_parameters(const std::string& text, const std::string& atom) {
  pstl::Valuation v;
  const world::AtomInfo* info = world::find_atom(atom);
  if (!info) return v;
  for (const auto& p : info->params) {
    const std::string slot = pstl::atom_slot_name(atom, p.name);
    if (p.name == "x" || p.name == "y") {
      if (auto c = find_coordinates(text)) v[slot] = p.name == "x" ? c->first : c->second;
    } else if (p.name == "item") {
      if (auto it = find_item(text)) v[slot] = std::string(world::item_name(*it));
    }
  }
  return v;
}

pstl::Valuation extract_parameters(const std::string& text, std::size_t temporal_k) {
  pstl::Valuation v;
  auto d = find_durations(text);
  if (temporal_k >= 1 && temporal_k <= d.size()) v[pstl::interval_slot_name(temporal_k)] = d[temporal_k - 1];
  return v;
}

}  // namespace stlwb::nl
