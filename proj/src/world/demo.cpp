#include "stlwb/world/demo.hpp"

#include <fstream>

namespace stlwb::world {

using nlohmann::json;

Demonstration Demonstration::from_actions(const GridSpec& g, const WorldState& start,
                                          const std::vector<Action>& actions) {
  g.check_state(start);
  Demonstration d;
  d.steps.reserve(actions.size());
  WorldState s = start;
  for (Action a : actions) {
    d.steps.push_back({s, a});
    s = step(s, a, g);
  }
  return d;
}

std::vector<Action> Demonstration::actions() const {
  std::vector<Action> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.action);
  return out;
}

std::vector<WorldState> Demonstration::successors(const GridSpec& g) const {
  std::vector<WorldState> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(step(s.state, s.action, g));
  return out;
}

void Demonstration::validate(const GridSpec& g) const {
  if (steps.empty()) throw WorldError("demonstration is empty");
  try {
    g.check_state(steps.front().state);
  } catch (const GridError& e) {
    throw WorldError(std::string("demonstration start: ") + e.what());
  }
  for (std::size_t i = 0; i + 1 < steps.size(); ++i)
    if (step(steps[i].state, steps[i].action, g) != steps[i + 1].state)
      throw WorldError("demonstration is inconsistent at step " + std::to_string(i + 1));
}

stl::Trace demo_to_trace(const Demonstration& d, const GridSpec& g) {
  return demo_to_trace(d, g, StateEncoder(g));
}

stl::Trace demo_to_trace(const Demonstration& d, const GridSpec& g, const StateEncoder& enc) {
  d.validate(g);
  return enc.trace(d.successors(g));
}

std::vector<Demonstration> prefixes_as_negatives(const Demonstration& d) {
  std::vector<Demonstration> out;
  for (std::size_t n = 1; n < d.size(); ++n) {
    Demonstration p;
    p.steps.assign(d.steps.begin(), d.steps.begin() + static_cast<std::ptrdiff_t>(n));
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Demonstration> inject_delays(const Demonstration& d, const std::vector<Delay>& delays, const GridSpec& g) {
  std::vector<Demonstration> out;
  if (delays.empty()) return out;
  if (d.empty()) throw WorldError("cannot delay an empty demonstration");
  const std::vector<Action> base = d.actions();
  for (const auto& delay : delays) {
    if (delay.position > base.size())
      throw WorldError("delay position " + std::to_string(delay.position) + " is beyond the demonstration");
    if (delay.waits == 0) throw WorldError("a delay needs at least one wait");
    std::vector<Action> acts(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(delay.position));
    acts.insert(acts.end(), delay.waits, Action::Wait);
    acts.insert(acts.end(), base.begin() + static_cast<std::ptrdiff_t>(delay.position), base.end());
    out.push_back(Demonstration::from_actions(g, d.initial(), acts));
  }
  return out;
}

void write_demo(std::ostream& out, const Demonstration& d) {
  for (const auto& s : d.steps) out << json{{"state", to_json(s.state)}, {"action", action_name(s.action)}}.dump() << '\n';
}

Demonstration read_demo(std::istream& in, const GridSpec& g) {
  Demonstration d;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    try {
      json j = json::parse(line);
      auto a = action_from_name(j.at("action").get<std::string>());
      if (!a) throw WorldError("unknown action");
      WorldState base;
      for (Item i : kItems) base.item(i) = ItemPlace{false, g.item_cells[static_cast<std::size_t>(i)]};
      d.steps.push_back({state_from_json(j.at("state"), d.empty() ? base : d.steps.back().state), *a});
    } catch (const std::exception& e) {
      throw WorldError("demonstration line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  d.validate(g);
  return d;
}

std::vector<Action> parse_actions(const json& names) {
  if (!names.is_array()) throw WorldError("actions must be a list of names");
  std::vector<Action> out;
  for (const auto& n : names) {
    auto a = n.is_string() ? action_from_name(n.get<std::string>()) : std::nullopt;
    if (!a) throw WorldError("unknown action " + n.dump());
    out.push_back(*a);
  }
  return out;
}

LabeledDemo fixture_from_json(const json& j, const GridSpec& g) {
  try {
    LabeledDemo d;
    d.name = j.value("name", std::string());
    std::string label = j.value("label", std::string("positive"));
    if (label != "positive" && label != "negative") throw WorldError("label must be positive or negative");
    d.positive = label == "positive";
    WorldState start = state_from_json(j.value("initial", json::object()), g.start);
    d.demo = Demonstration::from_actions(g, start, parse_actions(j.at("actions")));
    if (d.demo.empty()) throw WorldError("fixture has no actions");
    return d;
  } catch (const json::exception& e) {
    throw WorldError(std::string("malformed fixture: ") + e.what());
  } catch (const GridError& e) {
    throw WorldError(std::string("fixture start state: ") + e.what());
  }
}

LabeledDemo load_fixture(const std::string& path, const GridSpec& g) {
  std::ifstream in(path);
  if (!in) throw WorldError("cannot open fixture " + path);
  try {
    return fixture_from_json(json::parse(in), g);
  } catch (const json::parse_error& e) {
    throw WorldError("fixture " + path + ": " + e.what());
  }
}

json to_json(const LabeledDemo& d) {
  json actions = json::array();
  for (Action a : d.demo.actions()) actions.push_back(action_name(a));
  return {{"name", d.name},
          {"label", d.positive ? "positive" : "negative"},
          {"initial", d.demo.empty() ? json::object() : to_json(d.demo.initial())},
          {"actions", actions}};
}

}  // namespace stlwb::world
