#include <doctest.h>

#include <random>
#include <sstream>

#include "stlwb/stl/monitor.hpp"
#include "stlwb/stl/parser.hpp"
#include "stlwb/world/demo.hpp"

using namespace stlwb;
using namespace stlwb::world;
using stl::parse_formula;

namespace {

const std::string kData = STLWB_DATA_DIR;

LabeledDemo fixture(const std::string& name) { return load_fixture(kData + "/fixtures/" + name + ".json", default_grid()); }

bool holds(const std::string& formula, const Demonstration& d) {
  return stl::satisfies(parse_formula(formula), demo_to_trace(d, default_grid()), 0);
}

WorldState at(Cell c) {
  WorldState s = default_grid().start;
  s.robot = c;
  return s;
}

}  // namespace

TEST_CASE("plain moves and blocked moves") {
  const GridSpec& g = default_grid();
  CHECK(step(at({1, 0}), Action::MoveW, g).robot == Cell{0, 0});
  // (4,3) is east of the wall at (3,3)
  WorldState s = step(at({4, 3}), Action::MoveW, g);
  CHECK(s.robot == Cell{4, 3});
  CHECK(s.hit_wall);
  WorldState after = step(s, Action::Wait, g);
  CHECK_FALSE(after.hit_wall);
  CHECK(step(at({0, 0}), Action::MoveN, g).robot == Cell{0, 0});
  CHECK_FALSE(step(at({0, 0}), Action::MoveN, g).hit_wall);
  // closed door blocks, open door does not
  CHECK(step(at({6, 3}), Action::MoveN, g).robot == Cell{6, 3});
  WorldState open = at({6, 3});
  open.door_open = true;
  CHECK(step(open, Action::MoveN, g).robot == Cell{6, 2});
}

TEST_CASE("pick up needs light unless the item lies next to the lamp") {
  const GridSpec& g = default_grid();
  WorldState dark = at({2, 5});
  CHECK_FALSE(step(dark, Action::PickUp, g).item(Item::PurpleCube).on_robot);
  WorldState lit = dark;
  lit.lamp_on = true;
  WorldState s = step(lit, Action::PickUp, g);
  CHECK(s.item(Item::PurpleCube).on_robot);
  CHECK(atom_eval(s, stl::Atom::proposition("itemOnRobot", {stl::Term::symbol("purpleCube")}), g));
  CHECK(step(at({1, 0}), Action::PickUp, g).item(Item::DoorKey).on_robot);
  WorldState dropped = step(s, Action::Drop, g);
  CHECK(dropped.item(Item::PurpleCube) == ItemPlace{false, {2, 5}});
}

TEST_CASE("fixtures need the robot nearby and the door needs the key") {
  const GridSpec& g = default_grid();
  CHECK(step(at({1, 0}), Action::ToggleLamp, g).lamp_on);
  CHECK_FALSE(step(at({1, 1}), Action::ToggleLamp, g).lamp_on);
  CHECK_FALSE(step(at({6, 3}), Action::ToggleDoor, g).door_open);
  WorldState keyed = at({6, 3});
  keyed.item(Item::DoorKey) = ItemPlace{true, {}};
  CHECK(step(keyed, Action::ToggleDoor, g).door_open);
  CHECK(step(at({6, 0}), Action::PlugCharger, g).charger_plugged);
  CHECK_FALSE(step(at({6, 5}), Action::ToggleFire, g).fire_on);
  CHECK_FALSE(step(at({1, 7}), Action::Sit, g).sitting);
  WorldState seated = step(at({0, 7}), Action::Sit, g);
  CHECK(seated.sitting);
  CHECK(step(seated, Action::MoveN, g).robot == Cell{0, 7});
  CHECK_FALSE(step(seated, Action::Stand, g).sitting);
}

TEST_CASE("random walks keep the robot legal, conserve items and keep complements") {
  const GridSpec& g = default_grid();
  std::mt19937_64 rng(17);
  const std::vector<std::pair<std::string, std::string>> pairs{
      {"lampOn", "lampOff"}, {"fireOn", "fireOff"}, {"doorOpen", "doorClosed"},
      {"chargerPlugged", "chargerUnplugged"}, {"robotSittingOnChair", "robotStanding"}};
  for (int walk = 0; walk < 200; ++walk) {
    WorldState s = g.start;
    if (walk % 2) s.item(Item::DoorKey) = ItemPlace{true, {}};
    for (int i = 0; i < 200; ++i) {
      s = step(s, static_cast<Action>(rng() % kActionCount), g);
      REQUIRE(g.in_bounds(s.robot));
      REQUIRE_FALSE(g.is_wall(s.robot));
      REQUIRE_NOTHROW(g.check_state(s));
      for (Item it : kItems) {
        int places = s.item(it).on_robot ? 1 : 0;
        for (int y = 0; y < g.height; ++y)
          for (int x = 0; x < g.width; ++x)
            places += atom_eval(s,
                                stl::Atom::proposition("itemAt", {stl::Term::symbol(item_name(it)), stl::Term::integer(x),
                                                                  stl::Term::integer(y)}),
                                g);
        REQUIRE(places == 1);
      }
      for (const auto& [a, b] : pairs)
        REQUIRE(atom_eval(s, stl::Atom::proposition(a), g) != atom_eval(s, stl::Atom::proposition(b), g));
    }
  }
}

TEST_CASE("atom evaluation") {
  const GridSpec& g = default_grid();
  CHECK(atom_eval(at({0, 0}), stl::Atom::proposition("robotAt", {stl::Term::integer(0), stl::Term::integer(0)}), g));
  CHECK(atom_eval(at({2, 2}), stl::Atom::proposition("robotAtWater"), g));
  CHECK(atom_eval(g.start, stl::Atom::proposition("lampOff"), g));
  CHECK_FALSE(atom_eval(g.start, stl::Atom::proposition("lampOn"), g));
  CHECK(atom_registry().size() == 15);
  CHECK_THROWS_AS(atom_eval(g.start, stl::Atom::proposition("lampBroken"), g), WorldError);
  CHECK_THROWS_AS(atom_eval(g.start, stl::Atom::proposition("robotAt", {stl::Term::slot("x"), stl::Term::integer(0)}), g),
                  WorldError);
  CHECK_THROWS_AS(atom_eval(g.start, stl::Atom::proposition("itemOnRobot", {stl::Term::symbol("redCube")}), g),
                  WorldError);
}

TEST_CASE("the safe and the unsafe route") {
  auto green = fixture("safe_route").demo;
  auto red = fixture("unsafe_route").demo;
  const auto tg = std::to_string(green.size()), tr = std::to_string(red.size());
  CHECK(holds("F[0,15](robotAt(0,0))", green));
  CHECK(holds("F[0,15](robotAt(0,0))", red));
  CHECK(holds("G[0," + tg + "](!(robotAtWall))", green));
  CHECK(holds("G[0," + tg + "](!(robotAtWater))", green));
  CHECK_FALSE(holds("G[0," + tr + "](!(robotAtWall))", red));
  CHECK_FALSE(holds("G[0," + tr + "](!(robotAtWater))", red));
  CHECK(holds("G[0,14](!(robotAtWall))", green));
  auto trace = demo_to_trace(green, default_grid());
  CHECK(stl::robustness(parse_formula("F[0,15](robotAt(0,0))"), trace, 0) == 1.0);
  CHECK(trace.size() == green.size());
  // green never touches water
  auto water = parse_formula("robotAtWater");
  for (std::size_t t = 0; t < trace.size(); ++t) CHECK_FALSE(stl::satisfies(water, trace, t));
}

TEST_CASE("traces from demonstrations") {
  const GridSpec& g = default_grid();
  auto one = Demonstration::from_actions(g, g.start, {Action::MoveW});
  CHECK(demo_to_trace(one, g).size() == 1);
  CHECK(holds("robotAt(3,4)", one));
  CHECK(holds("(robotX = 3 & robotY <= 4)", one));
  auto red = fixture("unsafe_route").demo;
  auto trace = demo_to_trace(red, g);
  int walls = 0;
  for (std::size_t t = 0; t < trace.size(); ++t) walls += stl::satisfies(parse_formula("robotAtWall"), trace, t);
  CHECK(walls >= 1);
  // a compact encoder over the formula's atoms gives the same verdicts
  auto phi = parse_formula("G[0,20](!(robotAtWall))");
  CHECK(stl::satisfies(phi, demo_to_trace(red, g, encoder_for(g, phi)), 0) == stl::satisfies(phi, trace, 0));
  Demonstration broken = red;
  broken.steps[3].state.lamp_on = true;
  CHECK_THROWS_AS(demo_to_trace(broken, g), WorldError);
}

TEST_CASE("prefixes are negatives") {
  const GridSpec& g = default_grid();
  auto five = Demonstration::from_actions(g, g.start, std::vector<Action>(5, Action::Wait));
  CHECK(prefixes_as_negatives(five).size() == 4);
  auto two = Demonstration::from_actions(g, g.start, {Action::MoveW, Action::MoveW});
  auto p = prefixes_as_negatives(two);
  REQUIRE(p.size() == 1);
  CHECK(p[0].size() == 1);
  CHECK(prefixes_as_negatives(Demonstration::from_actions(g, g.start, {Action::Wait})).empty());
  const std::string phi3 = "F[0,15](lampOn & F[0,10](itemOnRobot(purpleCube)))";
  auto demo = fixture("running_example").demo;
  CHECK(holds(phi3, demo));
  for (const auto& pre : prefixes_as_negatives(demo)) CHECK_FALSE(holds(phi3, pre));
}

TEST_CASE("delays") {
  const GridSpec& g = default_grid();
  auto three = Demonstration::from_actions(g, g.start, {Action::MoveW, Action::MoveW, Action::MoveN});
  auto v = inject_delays(three, {{1, 2}}, g);
  REQUIRE(v.size() == 1);
  CHECK(v[0].actions() ==
        std::vector<Action>{Action::MoveW, Action::Wait, Action::Wait, Action::MoveW, Action::MoveN});
  CHECK_NOTHROW(v[0].validate(g));
  CHECK(inject_delays(three, {}, g).empty());
  CHECK_THROWS_AS(inject_delays(three, {{4, 1}}, g), WorldError);
  CHECK_THROWS_AS(inject_delays(three, {{1, 0}}, g), WorldError);
  auto demo = fixture("running_example").demo;
  auto late = inject_delays(demo, {{0, 20}}, g);
  CHECK_FALSE(holds("F[0,15](lampOn & F[0,10](itemOnRobot(purpleCube)))", late[0]));
}

TEST_CASE("state space size") {
  CHECK(state_count(default_grid()) > 8e9L);
  CHECK(state_count(default_grid()) == 8589934592.0L);
}

TEST_CASE("grid and demonstration files") {
  GridSpec file = load_grid(kData + "/default_grid.json");
  CHECK(to_json(file) == to_json(default_grid()));
  CHECK(default_grid().lamp == Cell{0, 0});
  CHECK(to_json(grid_from_json(to_json(file))) == to_json(file));
  auto bad = to_json(file);
  bad["lamp"] = nlohmann::json::array({3, 1});
  CHECK_THROWS_AS(grid_from_json(bad), GridError);

  auto red = fixture("unsafe_route").demo;
  std::stringstream io;
  write_demo(io, red);
  CHECK(read_demo(io, default_grid()) == red);
  std::stringstream broken("{\"state\": {\"robot\": [4, 4]}, \"action\": \"moveW\"}\n"
                           "{\"state\": {\"robot\": [1, 1]}, \"action\": \"moveW\"}\n");
  CHECK_THROWS_AS(read_demo(broken, default_grid()), WorldError);
  CHECK_THROWS_AS(fixture_from_json(nlohmann::json{{"actions", {"fly"}}}, default_grid()), WorldError);
}

TEST_CASE("every shipped fixture replays") {
  for (const char* name : {"safe_route", "unsafe_route", "running_example", "pick_purple", "fire_off", "door_then_charge",
                           "goto_then_green", "lamp_until_purple", "gate_until_green", "lamp_route", "fire_route",
                           "chair_route", "purple_route"}) {
    CAPTURE(name);
    CHECK_NOTHROW(fixture(name).demo.validate(default_grid()));
  }
  CHECK(holds("F[0,15](itemOnRobot(purpleCube))", fixture("pick_purple").demo));
  CHECK(holds("F[0,8](fireOff)", fixture("fire_off").demo));
  CHECK(holds("F[0,10](doorOpen & F[0,15](chargerPlugged))", fixture("door_then_charge").demo));
  CHECK(holds("F[0,15](robotAt(7,4) & F[0,4](itemOnRobot(greenCube)))", fixture("goto_then_green").demo));
  CHECK(holds("F[0,10]((lampOn U[0,8] itemOnRobot(purpleCube)))", fixture("lamp_until_purple").demo));
  CHECK(holds("F[0,6]((doorOpen U[0,6] itemOnRobot(greenCube)))", fixture("gate_until_green").demo));
  for (const char* n : {"lamp_route", "fire_route"}) CHECK(holds("F[0,20]((lampOn | fireOn))", fixture(n).demo));
  for (const char* n : {"chair_route", "purple_route"})
    CHECK(holds("F[0,20]((robotSittingOnChair | itemOnRobot(purpleCube)))", fixture(n).demo));
}
