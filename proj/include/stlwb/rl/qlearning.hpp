#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <deque>
#include <mutex>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "stlwb/stl/formula.hpp"
#include "stlwb/stl/trace.hpp"
#include "stlwb/world/atoms.hpp"

namespace stlwb::rl {

class RlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Hyperparams {
  std::size_t episodes = 50000;
  std::size_t max_steps = 40;
  double gamma = 0.99;
  double alpha = 0.1;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  /// Per-episode multiplier of epsilon; 0 picks the rate that reaches
  /// epsilon_end halfway through training.
  double epsilon_decay = 0;
  std::size_t replay_threshold = 500;  // M
  std::size_t replay_capacity = 20000;
  std::size_t target_sync = 50;  // C, in episodes
  std::size_t batch_size = 32;
  double terminal_bonus = 1.0;
  /// Subtracted from every reward. Unvisited actions (Q = 0) then look better
  /// than visited ones, which is what drives exploration when the robustness
  /// of propositional formulas stays flat.
  double step_cost = 0.01;
  /// Robustness is clamped to [-rho_clip, rho_clip] before differencing, so
  /// infinite values from empty windows stay usable as rewards.
  double rho_clip = 10;
  std::uint64_t seed = 7;

  /// Throws RlError for a zero or negative value or an epsilon outside [0, 1].
  void validate() const;
  double epsilon_at(std::size_t episode) const;
};

nlohmann::json to_json(const Hyperparams& h);
/// Missing keys keep their defaults.
Hyperparams hyperparams_from_json(const nlohmann::json& j);

/// Keeps only the parts of a WorldState that the atoms of a formula read,
/// plus the robot's cell, and packs them into one integer.
class StateProjection {
 public:
  StateProjection() = default;
  StateProjection(const world::GridSpec& g, const stl::Formula& f);

  std::uint64_t key(const world::WorldState& s) const;
  nlohmann::json describe() const;

 private:
  std::size_t cells_ = 1;
  int width_ = 1;
  bool lamp_ = false, fire_ = false, door_ = false, charger_ = false, sitting_ = false, wall_ = false;
  std::vector<world::Item> items_;
};

using ActionValues = std::array<double, world::kActionCount>;

struct QFunction {
  StateProjection projection;
  std::unordered_map<std::uint64_t, ActionValues> table;

  double value(std::uint64_t key, world::Action a) const;
  /// Highest-valued action; ties go to the earliest action in all_actions().
  world::Action best(std::uint64_t key) const;
  world::Action best(const world::WorldState& s) const { return best(projection.key(s)); }
};

struct Transition {
  std::uint64_t state = 0;
  world::Action action = world::Action::Wait;
  double reward = 0;
  std::uint64_t next = 0;
  bool done = false;
};

/// Fixed-capacity FIFO of transitions.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity);
  void push(const Transition& t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& operator[](std::size_t i) const { return items_[i]; }

 private:
  std::size_t capacity_;
  std::deque<Transition> items_;
};

struct CurvePoint {
  std::size_t episode = 0;
  double ret = 0;
  double epsilon = 0;
  std::size_t replay_size = 0;
  bool reached_goal = false;
};

struct TrainResult {
  QFunction policy;
  std::vector<CurvePoint> curve;
  bool cancelled = false;
  /// Episodes at which the target table was refreshed.
  std::vector<std::size_t> target_syncs;
};

struct Progress {
  std::size_t episode = 0;
  std::size_t episodes = 0;
  double epsilon = 0;
  std::size_t goals = 0;
  std::vector<CurvePoint> tail;  // most recent points
  bool finished = false;
};

/// Shared between a training run and whoever watches it. The watcher may
/// set `cancel`; the run checks it between episodes.
class TrainControl {
 public:
  std::atomic<bool> cancel{false};
  Progress snapshot() const;
  void publish(const Progress& p);

 private:
  mutable std::mutex mu_;
  Progress progress_;
};

/// Robustness of `partial` at time 0. Throws RlError for an empty trace or a
/// formula with unresolved parameters.
double robustness_reward(const stl::Trace& partial, const stl::Formula& f);

/// Tabular Q-learning from `s0` towards `f`. Each episode starts with an
/// empty trajectory and appends the state after every action. Rewards are the step-to-step
/// change in robustness of the partial trajectory, a bonus when it turns
/// positive (which also ends the episode), and minus the step cost. Updates
/// start once the replay memory holds more than M transitions and bootstrap
/// from a snapshot of the table refreshed every C episodes.
TrainResult train(const world::GridSpec& g, const world::WorldState& s0, const stl::Formula& f,
                  const Hyperparams& h, TrainControl* control = nullptr);

struct Rollout {
  bool satisfied = false;
  std::vector<world::Action> actions;
  /// The start state followed by the state after each action.
  std::vector<world::WorldState> states;
  /// One record per action, like a demonstration trace.
  stl::Trace trace;
};

/// Greedy rollout of at most `max_steps` actions. Stops early once the partial
/// trajectory has positive robustness.
Rollout evaluate(const QFunction& policy, const world::GridSpec& g, const world::WorldState& s0,
                 const stl::Formula& f, std::size_t max_steps);

/// episode,return,epsilon,replaySize
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);
/// One "stateKey bestAction qValue" line per visited state, by key.
void write_policy(std::ostream& out, const QFunction& q);
/// Reads write_policy output back. Only the best action of each state keeps
/// its value; the others are set just below it, which preserves the greedy
/// choice. Lines starting with '#' are skipped.
QFunction read_policy(std::istream& in, const StateProjection& projection);

}  // namespace stlwb::rl
