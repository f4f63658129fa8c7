#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stlwb/stl/formula.hpp"
#include "stlwb/stl/parser.hpp"
#include "stlwb/stl/trace.hpp"
#include "stlwb/world/grid.hpp"

namespace stlwb::world {

struct AtomParam {
  std::string name;
  stl::SlotKind kind;
};

struct AtomInfo {
  std::string name;
  std::vector<AtomParam> params;
  /// The atom that is its pointwise negation, if any.
  std::string complement;
};

/// The fifteen registered atoms, in a fixed order.
const std::vector<AtomInfo>& atom_registry();
const AtomInfo* find_atom(const std::string& name);

/// Registered atoms plus the numeric signals robotX and robotY.
const stl::AtomSignature& world_signature();

/// Argument kinds per atom name, as the synthesis module wants them.
std::map<std::string, std::vector<stl::SlotKind>> atom_arg_kinds();

/// Truth value of a ground registered atom. Throws WorldError for unknown
/// atoms, unresolved or ill-typed arguments.
bool atom_eval(const WorldState& s, const stl::Atom& atom, const GridSpec& g);

/// Maps world states to trace records over a fixed set of channels. The grid
/// passed to the constructor must outlive the encoder.
class StateEncoder {
 public:
  /// Every ground instance of every registered atom on grid `g`, plus the
  /// robotX/robotY signals.
  explicit StateEncoder(const GridSpec& g);
  /// Only the given ground atoms; parameterized atoms of the same family that
  /// are not listed read false in the monitor.
  StateEncoder(const GridSpec& g, const std::vector<stl::Atom>& atoms);

  std::shared_ptr<const stl::TraceSchema> schema() const { return schema_; }
  void encode(const WorldState& s, std::vector<double>& row) const;
  void append(stl::Trace& trace, const WorldState& s) const;
  stl::Trace trace(const std::vector<WorldState>& states) const;

 private:
  enum class ColumnKind : std::uint8_t {
    RobotAt, Wall, Water, Lamp, Fire, Door, ItemOnRobot, ItemAt, Charger, Sitting
  };
  struct Column {
    ColumnKind kind;
    bool negate = false;
    Item item = Item::DoorKey;
    Cell cell{};
  };
  static Column compile(const stl::Atom& a);
  bool eval(const Column& c, const WorldState& s) const;
  void add(const stl::Atom& a);

  const GridSpec* grid_;
  std::shared_ptr<stl::TraceSchema> schema_;
  std::vector<Column> columns_;
  bool signals_ = false;
  mutable std::vector<double> scratch_;
};

/// Encoder for the atoms mentioned by `f`.
StateEncoder encoder_for(const GridSpec& g, const stl::Formula& f);

class WorldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stlwb::world
