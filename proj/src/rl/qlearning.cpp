#include "stlwb/rl/qlearning.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "stlwb/stl/monitor.hpp"

namespace stlwb::rl {

using world::Action;
using world::WorldState;

void Hyperparams::validate() const {
  if (max_steps == 0) throw RlError("maxSteps must be positive");
  if (!(gamma > 0 && gamma <= 1)) throw RlError("gamma must lie in (0, 1]");
  if (!(alpha > 0 && alpha <= 1)) throw RlError("alpha must lie in (0, 1]");
  for (double e : {epsilon_start, epsilon_end})
    if (!(e >= 0 && e <= 1)) throw RlError("epsilon must lie in [0, 1]");
  if (epsilon_end > epsilon_start) throw RlError("epsilon must not grow");
  if (!(epsilon_decay >= 0 && epsilon_decay <= 1)) throw RlError("epsilon decay must lie in [0, 1]");
  if (replay_threshold == 0 || replay_capacity == 0 || target_sync == 0 || batch_size == 0)
    throw RlError("M, C, the replay capacity and the batch size must be positive");
  if (replay_capacity <= replay_threshold) throw RlError("replay capacity must exceed M");
  if (!std::isfinite(terminal_bonus) || !std::isfinite(step_cost) || step_cost < 0)
    throw RlError("terminal bonus and step cost must be finite, the step cost non-negative");
  if (!(rho_clip > 0) || !std::isfinite(rho_clip)) throw RlError("rho clip must be positive");
}

double Hyperparams::epsilon_at(std::size_t episode) const {
  double rate = epsilon_decay;
  if (rate == 0) {
    if (epsilon_start <= 0 || epsilon_end <= 0 || episodes < 2) return epsilon_end;
    rate = std::pow(epsilon_end / epsilon_start, 2.0 / static_cast<double>(episodes));
  }
  return std::max(epsilon_end, epsilon_start * std::pow(rate, static_cast<double>(episode)));
}

nlohmann::json to_json(const Hyperparams& h) {
  return {{"episodes", h.episodes},
          {"maxSteps", h.max_steps},
          {"gamma", h.gamma},
          {"alpha", h.alpha},
          {"epsilonStart", h.epsilon_start},
          {"epsilonEnd", h.epsilon_end},
          {"epsilonDecay", h.epsilon_decay},
          {"M", h.replay_threshold},
          {"replayCapacity", h.replay_capacity},
          {"C", h.target_sync},
          {"batchSize", h.batch_size},
          {"terminalBonus", h.terminal_bonus},
          {"stepCost", h.step_cost},
          {"rhoClip", h.rho_clip},
          {"seed", h.seed}};
}

Hyperparams hyperparams_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw RlError("hyperparameters must be a JSON object");
  Hyperparams h;
  auto get = [&](const char* k, auto& field) {
    if (j.contains(k)) field = j.at(k).get<std::remove_reference_t<decltype(field)>>();
  };
  try {
    get("episodes", h.episodes);
    get("maxSteps", h.max_steps);
    get("gamma", h.gamma);
    get("alpha", h.alpha);
    get("epsilonStart", h.epsilon_start);
    get("epsilonEnd", h.epsilon_end);
    get("epsilonDecay", h.epsilon_decay);
    get("M", h.replay_threshold);
    get("replayCapacity", h.replay_capacity);
    get("C", h.target_sync);
    get("batchSize", h.batch_size);
    get("terminalBonus", h.terminal_bonus);
    get("stepCost", h.step_cost);
    get("rhoClip", h.rho_clip);
    get("seed", h.seed);
  } catch (const nlohmann::json::exception& e) {
    throw RlError(std::string("bad hyperparameter: ") + e.what());
  }
  h.validate();
  return h;
}

StateProjection::StateProjection(const world::GridSpec& g, const stl::Formula& f)
    : cells_(g.cell_count()), width_(g.width) {
  for (const auto& a : stl::atoms_of(f)) {
    const std::string& n = a.name;
    if (n == "lampOn" || n == "lampOff") lamp_ = true;
    else if (n == "fireOn" || n == "fireOff") fire_ = true;
    else if (n == "doorOpen" || n == "doorClosed") door_ = true;
    else if (n == "chargerPlugged" || n == "chargerUnplugged") charger_ = true;
    else if (n == "robotSittingOnChair" || n == "robotStanding") sitting_ = true;
    else if (n == "robotAtWall") wall_ = true;
    else if (n == "itemOnRobot" || n == "itemAt") {
      if (a.args.empty() || a.args[0].is_slot()) throw RlError("atom " + a.key() + " has an unresolved item");
      auto name = std::get_if<std::string>(&a.args[0].value());
      auto item = name ? world::item_from_name(*name) : std::nullopt;
      if (!item) throw RlError("atom " + a.key() + " names no known item");
      if (std::find(items_.begin(), items_.end(), *item) == items_.end()) items_.push_back(*item);
    }
  }
  std::sort(items_.begin(), items_.end());
  long double range = static_cast<long double>(cells_) * std::pow(static_cast<long double>(cells_ + 1), items_.size()) *
                      std::pow(2.0L, 6);
  if (range >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max()))
    throw RlError("state key does not fit in 64 bits for this grid");
}

std::uint64_t StateProjection::key(const WorldState& s) const {
  auto cell = [&](world::Cell c) { return static_cast<std::uint64_t>(c.y) * width_ + static_cast<std::uint64_t>(c.x); };
  std::uint64_t k = cell(s.robot);
  for (world::Item i : items_) {
    const auto& p = s.item(i);
    k = k * (cells_ + 1) + (p.on_robot ? cells_ : cell(p.cell));
  }
  for (auto [used, flag] : {std::pair{lamp_, s.lamp_on}, std::pair{fire_, s.fire_on}, std::pair{door_, s.door_open},
                            std::pair{charger_, s.charger_plugged}, std::pair{sitting_, s.sitting},
                            std::pair{wall_, s.hit_wall}})
    if (used) k = k * 2 + (flag ? 1 : 0);
  return k;
}

nlohmann::json StateProjection::describe() const {
  nlohmann::json items = nlohmann::json::array();
  for (auto i : items_) items.push_back(world::item_name(i));
  return {{"cells", cells_},   {"items", items},        {"lamp", lamp_},       {"fire", fire_},
          {"door", door_},     {"charger", charger_},   {"sitting", sitting_}, {"hitWall", wall_}};
}

double QFunction::value(std::uint64_t key, Action a) const {
  auto it = table.find(key);
  return it == table.end() ? 0.0 : it->second[static_cast<std::size_t>(a)];
}

Action QFunction::best(std::uint64_t key) const {
  auto it = table.find(key);
  if (it == table.end()) return world::all_actions()[0];
  std::size_t arg = 0;
  for (std::size_t i = 1; i < world::kActionCount; ++i)
    if (it->second[i] > it->second[arg]) arg = i;
  return world::all_actions()[arg];
}

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw RlError("replay capacity must be positive");
}

void ReplayMemory::push(const Transition& t) {
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(t);
}

Progress TrainControl::snapshot() const {
  std::lock_guard lock(mu_);
  return progress_;
}

void TrainControl::publish(const Progress& p) {
  std::lock_guard lock(mu_);
  progress_ = p;
}

double robustness_reward(const stl::Trace& partial, const stl::Formula& f) {
  if (partial.empty()) throw RlError("robustness of an empty trajectory");
  if (!f.is_ground()) throw RlError("formula has unresolved parameters");
  return stl::robustness(f, partial, 0);
}

namespace {

// Keeps the partial trajectory of one episode and its robustness.
class Episode {
 public:
  Episode(const world::GridSpec& g, const stl::Formula& f, double clip)
      : encoder_(world::encoder_for(g, f)), monitor_(f, *encoder_.schema()), trace_(encoder_.schema()), clip_(clip) {}

  void reset() { trace_.truncate(0); }
  double push(const WorldState& s) {
    encoder_.append(trace_, s);
    return rho();
  }
  const stl::Trace& trace() const { return trace_; }

 private:
  double rho() const {
    double r = monitor_.robustness(trace_, 0);
    if (std::isnan(r)) throw RlError("robustness is NaN");
    return std::clamp(r, -clip_, clip_);
  }

  world::StateEncoder encoder_;
  stl::Monitor monitor_;
  stl::Trace trace_;
  double clip_;
};

double max_value(const std::unordered_map<std::uint64_t, ActionValues>& t, std::uint64_t key) {
  auto it = t.find(key);
  if (it == t.end()) return 0;
  return *std::max_element(it->second.begin(), it->second.end());
}

}  // namespace

TrainResult train(const world::GridSpec& g, const WorldState& s0, const stl::Formula& f, const Hyperparams& h,
                  TrainControl* control) {
  h.validate();
  if (!f.is_ground()) throw RlError("formula has unresolved parameters");
  g.check_state(s0);

  TrainResult res;
  res.policy.projection = StateProjection(g, f);
  auto& q = res.policy.table;
  auto target = q;
  ReplayMemory memory(h.replay_capacity);
  Episode ep(g, f, h.rho_clip);
  std::mt19937_64 rng(h.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_action(0, world::kActionCount - 1);
  const auto actions = world::all_actions();
  std::size_t goals = 0;

  auto publish = [&](std::size_t episode, bool finished) {
    if (!control) return;
    Progress p;
    p.episode = episode;
    p.episodes = h.episodes;
    p.epsilon = h.epsilon_at(episode);
    p.goals = goals;
    p.finished = finished;
    std::size_t from = res.curve.size() > 100 ? res.curve.size() - 100 : 0;
    p.tail.assign(res.curve.begin() + static_cast<std::ptrdiff_t>(from), res.curve.end());
    control->publish(p);
  };

  for (std::size_t e = 0; e < h.episodes; ++e) {
    if (control && control->cancel.load()) {
      res.cancelled = true;
      break;
    }
    if (e > 0 && e % h.target_sync == 0) {
      target = q;
      res.target_syncs.push_back(e);
    }
    const double eps = h.epsilon_at(e);
    WorldState s = s0;
    ep.reset();
    double rho = 0;  // replaced after the first step
    double ret = 0;
    bool goal = false;
    for (std::size_t step = 0; step < h.max_steps && !goal; ++step) {
      const std::uint64_t key = res.policy.projection.key(s);
      Action a = unit(rng) < eps ? actions[pick_action(rng)] : res.policy.best(key);
      WorldState next = world::step(s, a, g);
      double rho_next = ep.push(next);
      goal = rho_next > 0;
      // No delta on the first step: the state key carries no step count, so a
      // first-step-only offset would leak into whichever actions start episodes.
      double delta = step == 0 ? 0.0 : rho_next - rho;
      double r = delta - h.step_cost + (goal ? h.terminal_bonus : 0.0);
      ret += r;
      memory.push({key, a, r, res.policy.projection.key(next), goal});

      if (memory.size() > h.replay_threshold) {
        std::uniform_int_distribution<std::size_t> pick(0, memory.size() - 1);
        for (std::size_t b = 0; b < h.batch_size; ++b) {
          const Transition& t = memory[pick(rng)];
          double y = t.reward + (t.done ? 0.0 : h.gamma * max_value(target, t.next));
          double& cell = q[t.state][static_cast<std::size_t>(t.action)];
          cell += h.alpha * (y - cell);
          if (!std::isfinite(cell))
            throw RlError("non-finite Q value at episode " + std::to_string(e) + ", state " + std::to_string(t.state));
        }
      }
      s = next;
      rho = rho_next;
    }
    if (goal) ++goals;
    res.curve.push_back({e, ret, eps, memory.size(), goal});
    if (control && (e % 100 == 0 || e + 1 == h.episodes)) publish(e + 1, false);
  }
  publish(res.curve.size(), true);
  return res;
}

Rollout evaluate(const QFunction& policy, const world::GridSpec& g, const WorldState& s0, const stl::Formula& f,
                 std::size_t max_steps) {
  Episode ep(g, f, std::numeric_limits<double>::max());
  std::vector<Action> actions;
  std::vector<WorldState> states{s0};
  ep.reset();
  bool goal = false;
  for (std::size_t step = 0; step < max_steps && !goal; ++step) {
    Action a = policy.best(states.back());
    states.push_back(world::step(states.back(), a, g));
    actions.push_back(a);
    goal = ep.push(states.back()) > 0;
  }
  bool ok = !ep.trace().empty() && stl::satisfies(f, ep.trace(), 0);
  return Rollout{ok, std::move(actions), std::move(states), ep.trace()};
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "episode,return,epsilon,replaySize\n";
  out << std::setprecision(10);
  for (const auto& p : curve) out << p.episode << ',' << p.ret << ',' << p.epsilon << ',' << p.replay_size << '\n';
}

void write_policy(std::ostream& out, const QFunction& q) {
  std::map<std::uint64_t, const ActionValues*> sorted;
  for (const auto& [k, v] : q.table) sorted.emplace(k, &v);
  out << std::setprecision(10);
  for (const auto& [k, v] : sorted) {
    Action a = q.best(k);
    out << k << ' ' << world::action_name(a) << ' ' << (*v)[static_cast<std::size_t>(a)] << '\n';
  }
}

QFunction read_policy(std::istream& in, const StateProjection& projection) {
  QFunction q;
  q.projection = projection;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::uint64_t key = 0;
    std::string name;
    double value = 0;
    if (!(ls >> key >> name >> value) || !std::isfinite(value))
      throw RlError("policy line " + std::to_string(lineno) + " is malformed");
    auto a = world::action_from_name(name);
    if (!a) throw RlError("policy line " + std::to_string(lineno) + ": unknown action '" + name + "'");
    ActionValues row;
    row.fill(value - 1.0);
    row[static_cast<std::size_t>(*a)] = value;
    q.table[key] = row;
  }
  return q;
}

}  // namespace stlwb::rl
