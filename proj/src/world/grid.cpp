#include "stlwb/world/grid.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

namespace stlwb::world {

using nlohmann::json;

bool near(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y) <= 1; }

namespace {

constexpr std::array<const char*, kItemCount> kItemNames{"doorKey", "greenCube", "purpleCube"};
constexpr std::array<const char*, kActionCount> kActionNames{
    "moveN", "moveS", "moveE", "moveW", "pickUp", "drop", "toggleLamp",
    "toggleFire", "toggleDoor", "plugCharger", "sit", "stand", "wait"};

// Matches data/default_grid.json.
constexpr const char* kDefaultGrid = R"({
  "width": 8,
  "height": 8,
  "walls": [[3, 1], [3, 2], [3, 3], [5, 5], [5, 6]],
  "water": [[2, 2], [2, 3], [4, 7]],
  "lamp": [0, 0],
  "fire": [6, 6],
  "door": [6, 2],
  "charger": [7, 0],
  "chair": [0, 7],
  "items": {"doorKey": [1, 0], "greenCube": [7, 5], "purpleCube": [2, 5]},
  "start": {"robot": [4, 4], "lampOn": false, "fireOn": true, "doorOpen": false, "chargerPlugged": false, "sitting": false}
})";

json cell_json(Cell c) { return json::array({c.x, c.y}); }

Cell cell_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw GridError(std::string("expected [x, y] for ") + what);
  return {j[0].get<int>(), j[1].get<int>()};
}

std::set<Cell> cells_from(const json& j, const char* what) {
  std::set<Cell> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw GridError(std::string("expected a list of cells for ") + what);
  for (const auto& c : j) out.insert(cell_from(c, what));
  return out;
}

bool flag(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) throw GridError(std::string("'") + key + "' must be a Boolean");
  return j[key].get<bool>();
}

Cell moved(Cell c, Action a) {
  switch (a) {
    case Action::MoveN: return {c.x, c.y - 1};
    case Action::MoveS: return {c.x, c.y + 1};
    case Action::MoveE: return {c.x + 1, c.y};
    case Action::MoveW: return {c.x - 1, c.y};
    default: return c;
  }
}

}  // namespace

const char* item_name(Item i) { return kItemNames[static_cast<std::size_t>(i)]; }

std::optional<Item> item_from_name(std::string_view name) {
  for (Item i : kItems)
    if (name == item_name(i)) return i;
  return std::nullopt;
}

const char* action_name(Action a) { return kActionNames[static_cast<std::size_t>(a)]; }

std::optional<Action> action_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kActionCount; ++i)
    if (name == kActionNames[i]) return static_cast<Action>(i);
  return std::nullopt;
}

std::array<Action, kActionCount> all_actions() {
  std::array<Action, kActionCount> out{};
  for (std::size_t i = 0; i < kActionCount; ++i) out[i] = static_cast<Action>(i);
  return out;
}

void GridSpec::validate() const {
  if (width <= 0 || height <= 0) throw GridError("grid dimensions must be positive");
  auto check = [&](Cell c, const std::string& what) {
    if (!in_bounds(c)) throw GridError(what + " is out of bounds");
    if (is_wall(c)) throw GridError(what + " is on a wall");
  };
  for (Cell c : walls)
    if (!in_bounds(c)) throw GridError("wall out of bounds");
  for (Cell c : water) check(c, "water cell");
  check(lamp, "lamp");
  check(fire, "fire");
  check(door, "door");
  check(charger, "charger");
  check(chair, "chair");
  for (Item i : kItems) check(item_cells[static_cast<std::size_t>(i)], item_name(i));
  check_state(start);
}

void GridSpec::check_state(const WorldState& s) const {
  if (!in_bounds(s.robot) || is_wall(s.robot)) throw GridError("robot is out of bounds or on a wall");
  if (s.robot == door && !s.door_open) throw GridError("robot is inside the closed door");
  for (Item i : kItems) {
    const ItemPlace& p = s.item(i);
    if (!p.on_robot && (!in_bounds(p.cell) || is_wall(p.cell)))
      throw GridError(std::string(item_name(i)) + " is out of bounds or on a wall");
  }
  if (s.sitting && s.robot != chair) throw GridError("robot sits away from the chair");
}

WorldState step(const WorldState& s, Action a, const GridSpec& g) {
  WorldState n = s;
  n.hit_wall = false;
  switch (a) {
    case Action::MoveN:
    case Action::MoveS:
    case Action::MoveE:
    case Action::MoveW: {
      if (s.sitting) break;
      Cell to = moved(s.robot, a);
      if (!g.in_bounds(to)) break;
      if (g.is_wall(to)) {
        n.hit_wall = true;
        break;
      }
      if (to == g.door && !s.door_open) break;
      n.robot = to;
      break;
    }
    case Action::PickUp:
      for (Item i : kItems) {
        ItemPlace& p = n.item(i);
        if (p.on_robot || p.cell != s.robot) continue;
        if (s.lamp_on || near(p.cell, g.lamp)) p = ItemPlace{true, {}};
      }
      break;
    case Action::Drop:
      for (Item i : kItems) {
        ItemPlace& p = n.item(i);
        if (p.on_robot) p = ItemPlace{false, s.robot};
      }
      break;
    case Action::ToggleLamp:
      if (near(s.robot, g.lamp)) n.lamp_on = !s.lamp_on;
      break;
    case Action::ToggleFire:
      if (near(s.robot, g.fire)) n.fire_on = !s.fire_on;
      break;
    case Action::ToggleDoor:
      if (near(s.robot, g.door) && s.item(Item::DoorKey).on_robot && !(s.door_open && s.robot == g.door))
        n.door_open = !s.door_open;
      break;
    case Action::PlugCharger:
      if (near(s.robot, g.charger)) n.charger_plugged = !s.charger_plugged;
      break;
    case Action::Sit:
      if (s.robot == g.chair) n.sitting = true;
      break;
    case Action::Stand:
      n.sitting = false;
      break;
    case Action::Wait:
      break;
  }
  return n;
}

long double state_count(const GridSpec& g) {
  long double cells = static_cast<long double>(g.cell_count());
  return std::pow(cells, 1.0L + kItemCount) * std::pow(2.0L, kItemCount) * std::pow(2.0L, 6);
}

json to_json(const GridSpec& g) {
  json walls = json::array(), water = json::array(), items = json::object();
  for (Cell c : g.walls) walls.push_back(cell_json(c));
  for (Cell c : g.water) water.push_back(cell_json(c));
  for (Item i : kItems) items[item_name(i)] = cell_json(g.item_cells[static_cast<std::size_t>(i)]);
  json start = to_json(g.start);
  start.erase("items");
  start.erase("hitWall");
  return {{"width", g.width}, {"height", g.height}, {"walls", walls},     {"water", water},
          {"lamp", cell_json(g.lamp)}, {"fire", cell_json(g.fire)},     {"door", cell_json(g.door)},
          {"charger", cell_json(g.charger)}, {"chair", cell_json(g.chair)}, {"items", items},
          {"start", start}};
}

GridSpec grid_from_json(const json& j) {
  try {
    GridSpec g;
    g.width = j.at("width").get<int>();
    g.height = j.at("height").get<int>();
    g.walls = cells_from(j.value("walls", json()), "walls");
    g.water = cells_from(j.value("water", json()), "water");
    g.lamp = cell_from(j.at("lamp"), "lamp");
    g.fire = cell_from(j.at("fire"), "fire");
    g.door = cell_from(j.at("door"), "door");
    g.charger = cell_from(j.at("charger"), "charger");
    g.chair = cell_from(j.at("chair"), "chair");
    const json& items = j.at("items");
    for (Item i : kItems) g.item_cells[static_cast<std::size_t>(i)] = cell_from(items.at(item_name(i)), item_name(i));
    WorldState base;
    for (Item i : kItems) base.item(i) = ItemPlace{false, g.item_cells[static_cast<std::size_t>(i)]};
    g.start = state_from_json(j.value("start", json::object()), base);
    g.validate();
    return g;
  } catch (const json::exception& e) {
    throw GridError(std::string("malformed grid: ") + e.what());
  }
}

GridSpec load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GridError("cannot open grid file " + path);
  try {
    return grid_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw GridError("grid file " + path + ": " + e.what());
  }
}

const GridSpec& default_grid() {
  static const GridSpec g = grid_from_json(json::parse(kDefaultGrid));
  return g;
}

json to_json(const WorldState& s) {
  json items = json::object();
  for (Item i : kItems) {
    const ItemPlace& p = s.item(i);
    items[item_name(i)] = p.on_robot ? json("onRobot") : cell_json(p.cell);
  }
  return {{"robot", cell_json(s.robot)},     {"items", items},
          {"lampOn", s.lamp_on},             {"fireOn", s.fire_on},
          {"doorOpen", s.door_open},         {"chargerPlugged", s.charger_plugged},
          {"sitting", s.sitting},            {"hitWall", s.hit_wall}};
}

WorldState state_from_json(const json& j, const WorldState& base) {
  if (!j.is_object()) throw GridError("state must be a JSON object");
  WorldState s = base;
  if (j.contains("robot")) s.robot = cell_from(j["robot"], "robot");
  if (j.contains("items")) {
    for (const auto& [name, v] : j["items"].items()) {
      auto i = item_from_name(name);
      if (!i) throw GridError("unknown item '" + name + "'");
      if (v.is_string() && v.get<std::string>() == "onRobot")
        s.item(*i) = ItemPlace{true, {}};
      else
        s.item(*i) = ItemPlace{false, cell_from(v, name.c_str())};
    }
  }
  s.lamp_on = flag(j, "lampOn", s.lamp_on);
  s.fire_on = flag(j, "fireOn", s.fire_on);
  s.door_open = flag(j, "doorOpen", s.door_open);
  s.charger_plugged = flag(j, "chargerPlugged", s.charger_plugged);
  s.sitting = flag(j, "sitting", s.sitting);
  s.hit_wall = flag(j, "hitWall", s.hit_wall);
  return s;
}

}  // namespace stlwb::world
