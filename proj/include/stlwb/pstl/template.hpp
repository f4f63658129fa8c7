#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlwb/stl/formula.hpp"

namespace stlwb::pstl {

using stl::Formula;
using stl::SlotKind;
using stl::Value;

struct SlotInfo {
  std::string name;
  SlotKind kind;
  friend bool operator==(const SlotInfo&, const SlotInfo&) = default;
};

/// Formula skeleton whose interval bounds, atom arguments and thresholds may
/// be named slots. Slots are listed in preorder of first occurrence.
struct PstlTemplate {
  Formula skeleton;
  std::vector<SlotInfo> slots;

  /// Collects the slots of `skeleton`. Kinds of atom-argument slots come from
  /// `arg_kinds` (atom name -> kind per argument position); an argument slot
  /// of an atom missing there is an error. Throws TemplateError when a slot
  /// name occurs twice.
  static PstlTemplate from_skeleton(Formula skeleton,
                                    const std::map<std::string, std::vector<SlotKind>>& arg_kinds = {});

  bool has_slot(const std::string& name) const;
  const SlotInfo* find_slot(const std::string& name) const;
};

using Valuation = std::map<std::string, Value>;

/// Replaces every slot by its binding. Throws TemplateError on a missing
/// binding, a binding of the wrong type for the slot's kind, or an interval
/// whose bounds end up with lo > hi.
Formula instantiate(const PstlTemplate& t, const Valuation& v);

/// True when `v` binds every slot of `t`.
bool is_total(const PstlTemplate& t, const Valuation& v);

/// Canonical text, used for ordering and duplicate elimination.
std::string canonical(const PstlTemplate& t);

/// Renames interval slots to ?t1, ?t2, ... in preorder of the temporal nodes.
/// Concrete bounds are left alone.
Formula number_interval_slots(const Formula& f);

/// Name of the interval slot of the k-th temporal node (1-based).
std::string interval_slot_name(std::size_t k);

/// Conventional name of the slot for argument `param` of atom `atom`.
std::string atom_slot_name(const std::string& atom, const std::string& param);

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stlwb::pstl
