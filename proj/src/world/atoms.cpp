#include "stlwb/world/atoms.hpp"

#include <algorithm>
#include <map>

namespace stlwb::world {

using stl::SlotKind;

const std::vector<AtomInfo>& atom_registry() {
  static const std::vector<AtomInfo> registry{
      {"robotAt", {{"x", SlotKind::Coordinate}, {"y", SlotKind::Coordinate}}, ""},
      {"robotAtWall", {}, ""},
      {"robotAtWater", {}, ""},
      {"lampOn", {}, "lampOff"},
      {"lampOff", {}, "lampOn"},
      {"fireOn", {}, "fireOff"},
      {"fireOff", {}, "fireOn"},
      {"doorOpen", {}, "doorClosed"},
      {"doorClosed", {}, "doorOpen"},
      {"itemOnRobot", {{"item", SlotKind::ItemName}}, ""},
      {"itemAt", {{"item", SlotKind::ItemName}, {"x", SlotKind::Coordinate}, {"y", SlotKind::Coordinate}}, ""},
      {"chargerPlugged", {}, "chargerUnplugged"},
      {"chargerUnplugged", {}, "chargerPlugged"},
      {"robotSittingOnChair", {}, "robotStanding"},
      {"robotStanding", {}, "robotSittingOnChair"},
  };
  return registry;
}

const AtomInfo* find_atom(const std::string& name) {
  const auto& r = atom_registry();
  auto it = std::find_if(r.begin(), r.end(), [&](const AtomInfo& a) { return a.name == name; });
  return it == r.end() ? nullptr : &*it;
}

const stl::AtomSignature& world_signature() {
  static const stl::AtomSignature sig = [] {
    stl::AtomSignature s;
    for (const auto& a : atom_registry()) {
      auto& kinds = s.atoms[a.name];
      for (const auto& p : a.params) kinds.push_back(p.kind);
    }
    s.signals = {"robotX", "robotY"};
    return s;
  }();
  return sig;
}

std::map<std::string, std::vector<stl::SlotKind>> atom_arg_kinds() { return world_signature().atoms; }

namespace {

std::int64_t int_arg(const stl::Atom& a, std::size_t i) {
  const stl::Term& t = a.args[i];
  if (t.is_slot()) throw WorldError("atom " + a.key() + " has an unresolved argument");
  auto v = std::get_if<std::int64_t>(&t.value());
  if (!v) throw WorldError("atom " + a.key() + ": argument " + std::to_string(i + 1) + " must be an integer");
  return *v;
}

Item item_arg(const stl::Atom& a, std::size_t i) {
  const stl::Term& t = a.args[i];
  if (t.is_slot()) throw WorldError("atom " + a.key() + " has an unresolved argument");
  auto v = std::get_if<std::string>(&t.value());
  auto item = v ? item_from_name(*v) : std::nullopt;
  if (!item) throw WorldError("atom " + a.key() + ": unknown item");
  return *item;
}

}  // namespace

bool atom_eval(const WorldState& s, const stl::Atom& a, const GridSpec& g) {
  if (a.is_numeric()) throw WorldError("numeric atom " + a.name + " is not a world atom");
  const AtomInfo* info = find_atom(a.name);
  if (!info) throw WorldError("unregistered atom '" + a.name + "'");
  if (a.args.size() != info->params.size())
    throw WorldError("atom '" + a.name + "' takes " + std::to_string(info->params.size()) + " argument(s)");
  const std::string& n = a.name;
  if (n == "robotAt") return s.robot == Cell{static_cast<int>(int_arg(a, 0)), static_cast<int>(int_arg(a, 1))};
  if (n == "robotAtWall") return s.hit_wall;
  if (n == "robotAtWater") return g.is_water(s.robot);
  if (n == "lampOn") return s.lamp_on;
  if (n == "lampOff") return !s.lamp_on;
  if (n == "fireOn") return s.fire_on;
  if (n == "fireOff") return !s.fire_on;
  if (n == "doorOpen") return s.door_open;
  if (n == "doorClosed") return !s.door_open;
  if (n == "itemOnRobot") return s.item(item_arg(a, 0)).on_robot;
  if (n == "itemAt") {
    const ItemPlace& p = s.item(item_arg(a, 0));
    return !p.on_robot && p.cell == Cell{static_cast<int>(int_arg(a, 1)), static_cast<int>(int_arg(a, 2))};
  }
  if (n == "chargerPlugged") return s.charger_plugged;
  if (n == "chargerUnplugged") return !s.charger_plugged;
  if (n == "robotSittingOnChair") return s.sitting;
  if (n == "robotStanding") return !s.sitting;
  throw WorldError("unregistered atom '" + n + "'");
}

StateEncoder::StateEncoder(const GridSpec& g) : grid_(&g), schema_(std::make_shared<stl::TraceSchema>()) {
  for (const auto& info : atom_registry()) {
    if (info.name == "robotAt") {
      for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x)
          add(stl::Atom::proposition("robotAt", {stl::Term::integer(x), stl::Term::integer(y)}));
    } else if (info.name == "itemOnRobot") {
      for (Item i : kItems) add(stl::Atom::proposition("itemOnRobot", {stl::Term::symbol(item_name(i))}));
    } else if (info.name == "itemAt") {
      for (Item i : kItems)
        for (int y = 0; y < g.height; ++y)
          for (int x = 0; x < g.width; ++x)
            add(stl::Atom::proposition(
                "itemAt", {stl::Term::symbol(item_name(i)), stl::Term::integer(x), stl::Term::integer(y)}));
    } else {
      add(stl::Atom::proposition(info.name));
    }
  }
  schema_->add("robotX", stl::ChannelKind::Numeric);
  schema_->add("robotY", stl::ChannelKind::Numeric);
  signals_ = true;
}

StateEncoder::StateEncoder(const GridSpec& g, const std::vector<stl::Atom>& atoms)
    : grid_(&g), schema_(std::make_shared<stl::TraceSchema>()) {
  for (const auto& a : atoms) {
    if (a.is_numeric()) {
      if (a.name != "robotX" && a.name != "robotY") throw WorldError("unknown signal '" + a.name + "'");
      signals_ = true;
      continue;
    }
    if (schema_->find(a.key())) continue;
    atom_eval(grid_->start, a, g);  // validates the atom
    add(a);
  }
  if (signals_) {
    schema_->add("robotX", stl::ChannelKind::Numeric);
    schema_->add("robotY", stl::ChannelKind::Numeric);
  }
}

StateEncoder::Column StateEncoder::compile(const stl::Atom& a) {
  static const std::map<std::string, std::pair<ColumnKind, bool>> plain{
      {"robotAtWall", {ColumnKind::Wall, false}},       {"robotAtWater", {ColumnKind::Water, false}},
      {"lampOn", {ColumnKind::Lamp, false}},            {"lampOff", {ColumnKind::Lamp, true}},
      {"fireOn", {ColumnKind::Fire, false}},            {"fireOff", {ColumnKind::Fire, true}},
      {"doorOpen", {ColumnKind::Door, false}},          {"doorClosed", {ColumnKind::Door, true}},
      {"chargerPlugged", {ColumnKind::Charger, false}}, {"chargerUnplugged", {ColumnKind::Charger, true}},
      {"robotSittingOnChair", {ColumnKind::Sitting, false}}, {"robotStanding", {ColumnKind::Sitting, true}},
  };
  Column c{};
  if (a.name == "robotAt") {
    c.kind = ColumnKind::RobotAt;
    c.cell = Cell{static_cast<int>(int_arg(a, 0)), static_cast<int>(int_arg(a, 1))};
  } else if (a.name == "itemOnRobot") {
    c.kind = ColumnKind::ItemOnRobot;
    c.item = item_arg(a, 0);
  } else if (a.name == "itemAt") {
    c.kind = ColumnKind::ItemAt;
    c.item = item_arg(a, 0);
    c.cell = Cell{static_cast<int>(int_arg(a, 1)), static_cast<int>(int_arg(a, 2))};
  } else {
    auto it = plain.find(a.name);
    if (it == plain.end()) throw WorldError("unregistered atom '" + a.name + "'");
    c.kind = it->second.first;
    c.negate = it->second.second;
  }
  return c;
}

bool StateEncoder::eval(const Column& c, const WorldState& s) const {
  bool v = false;
  switch (c.kind) {
    case ColumnKind::RobotAt: v = s.robot == c.cell; break;
    case ColumnKind::Wall: v = s.hit_wall; break;
    case ColumnKind::Water: v = grid_->is_water(s.robot); break;
    case ColumnKind::Lamp: v = s.lamp_on; break;
    case ColumnKind::Fire: v = s.fire_on; break;
    case ColumnKind::Door: v = s.door_open; break;
    case ColumnKind::ItemOnRobot: v = s.item(c.item).on_robot; break;
    case ColumnKind::ItemAt: {
      const ItemPlace& p = s.item(c.item);
      v = !p.on_robot && p.cell == c.cell;
      break;
    }
    case ColumnKind::Charger: v = s.charger_plugged; break;
    case ColumnKind::Sitting: v = s.sitting; break;
  }
  return v != c.negate;
}

void StateEncoder::add(const stl::Atom& a) {
  schema_->add(a.key(), stl::ChannelKind::Boolean);
  columns_.push_back(compile(a));
}

void StateEncoder::encode(const WorldState& s, std::vector<double>& row) const {
  row.resize(schema_->size());
  std::size_t c = 0;
  for (const auto& col : columns_) row[c++] = eval(col, s) ? 1.0 : 0.0;
  if (signals_) {
    row[c++] = s.robot.x;
    row[c++] = s.robot.y;
  }
}

void StateEncoder::append(stl::Trace& trace, const WorldState& s) const {
  encode(s, scratch_);
  trace.push_back(scratch_);
}

stl::Trace StateEncoder::trace(const std::vector<WorldState>& states) const {
  stl::Trace t(schema_);
  t.reserve(states.size());
  for (const auto& s : states) append(t, s);
  return t;
}

StateEncoder encoder_for(const GridSpec& g, const stl::Formula& f) { return StateEncoder(g, stl::atoms_of(f)); }

}  // namespace stlwb::world
