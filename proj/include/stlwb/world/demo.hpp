#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "stlwb/stl/trace.hpp"
#include "stlwb/world/atoms.hpp"
#include "stlwb/world/grid.hpp"

namespace stlwb::world {

/// One state-action pair: the action taken in `state`.
struct DemoStep {
  WorldState state;
  Action action;
  friend bool operator==(const DemoStep&, const DemoStep&) = default;
};

struct Demonstration {
  std::vector<DemoStep> steps;

  /// Replays `actions` from `start` to fill in the states.
  static Demonstration from_actions(const GridSpec& g, const WorldState& start, const std::vector<Action>& actions);

  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
  const WorldState& initial() const { return steps.front().state; }
  std::vector<Action> actions() const;
  /// State after each action; element i is the state reached by action i.
  std::vector<WorldState> successors(const GridSpec& g) const;
  /// Throws WorldError unless each state is the step() image of the previous
  /// pair and the first state fits the grid.
  void validate(const GridSpec& g) const;

  friend bool operator==(const Demonstration&, const Demonstration&) = default;
};

/// One trace record per step: the state after that step's action.
stl::Trace demo_to_trace(const Demonstration& d, const GridSpec& g);
stl::Trace demo_to_trace(const Demonstration& d, const GridSpec& g, const StateEncoder& enc);

/// Proper prefixes of lengths 1 .. size-1, shortest first.
std::vector<Demonstration> prefixes_as_negatives(const Demonstration& d);

/// `waits` wait actions inserted after the first `position` steps.
struct Delay {
  std::size_t position = 0;
  std::size_t waits = 1;
};

/// One unlabeled variant of `d` per delay. Throws WorldError when a position
/// exceeds the demonstration length or a wait count is zero.
std::vector<Demonstration> inject_delays(const Demonstration& d, const std::vector<Delay>& delays, const GridSpec& g);

/// Demonstration file: one JSON object {"state": {...}, "action": "moveN"}
/// per line.
void write_demo(std::ostream& out, const Demonstration& d);
Demonstration read_demo(std::istream& in, const GridSpec& g);

struct LabeledDemo {
  std::string name;
  Demonstration demo;
  bool positive = true;
};

/// Fixture file: {"name", "label": "positive"|"negative", "initial": partial
/// state over the grid's start state, "actions": [names]}.
LabeledDemo fixture_from_json(const nlohmann::json& j, const GridSpec& g);
LabeledDemo load_fixture(const std::string& path, const GridSpec& g);
nlohmann::json to_json(const LabeledDemo& d);

/// Parses action names; throws WorldError on an unknown name.
std::vector<Action> parse_actions(const nlohmann::json& names);

}  // namespace stlwb::world
