#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace stlwb::world {

struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

/// Cells sharing an edge with `c`, or `c` itself.
bool near(Cell a, Cell b);

enum class Item : std::uint8_t { DoorKey, GreenCube, PurpleCube };
inline constexpr std::size_t kItemCount = 3;
inline constexpr std::array<Item, kItemCount> kItems{Item::DoorKey, Item::GreenCube, Item::PurpleCube};

const char* item_name(Item i);
std::optional<Item> item_from_name(std::string_view name);

enum class Action : std::uint8_t {
  MoveN,
  MoveS,
  MoveE,
  MoveW,
  PickUp,
  Drop,
  ToggleLamp,
  ToggleFire,
  ToggleDoor,
  PlugCharger,
  Sit,
  Stand,
  Wait,
};
inline constexpr std::size_t kActionCount = 13;

const char* action_name(Action a);
std::optional<Action> action_from_name(std::string_view name);
std::array<Action, kActionCount> all_actions();

/// Position of a movable item: on a cell, or carried by the robot.
struct ItemPlace {
  bool on_robot = false;
  Cell cell;
  auto operator<=>(const ItemPlace&) const = default;
};

struct WorldState {
  Cell robot;
  std::array<ItemPlace, kItemCount> items;
  bool lamp_on = false;
  bool fire_on = false;
  bool door_open = false;
  bool charger_plugged = false;
  bool sitting = false;
  /// Set when the action that produced this state tried to enter a wall.
  bool hit_wall = false;

  const ItemPlace& item(Item i) const { return items[static_cast<std::size_t>(i)]; }
  ItemPlace& item(Item i) { return items[static_cast<std::size_t>(i)]; }

  auto operator<=>(const WorldState&) const = default;
};

/// Static layout. North is y - 1; (0,0) is the top-left corner.
struct GridSpec {
  int width = 8;
  int height = 8;
  std::set<Cell> walls;
  std::set<Cell> water;
  Cell lamp;
  Cell fire;
  Cell door;
  Cell charger;
  Cell chair;
  std::array<Cell, kItemCount> item_cells;
  /// Start state: robot position and fixture flags; items start at item_cells.
  WorldState start;

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  bool is_wall(Cell c) const { return walls.count(c) != 0; }
  bool is_water(Cell c) const { return water.count(c) != 0; }
  std::size_t cell_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }

  /// Throws GridError when a cell is out of bounds or an object sits on a wall.
  void validate() const;
  /// Throws GridError when `s` does not fit this grid.
  void check_state(const WorldState& s) const;
};

/// Environment dynamics. Illegal actions leave the state unchanged apart from
/// clearing (or, for a blocked move into a wall, setting) `hit_wall`.
WorldState step(const WorldState& s, Action a, const GridSpec& g);

/// Number of distinct states: positions of the robot and of every item,
/// a carried flag per item, and the six Boolean flags of WorldState.
long double state_count(const GridSpec& g);

class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const GridSpec& g);
GridSpec grid_from_json(const nlohmann::json& j);
GridSpec load_grid(const std::string& path);
/// Built-in 8x8 layout, identical to data/default_grid.json.
const GridSpec& default_grid();

nlohmann::json to_json(const WorldState& s);
/// Fields absent from `j` are taken from `base`.
WorldState state_from_json(const nlohmann::json& j, const WorldState& base);

}  // namespace stlwb::world
