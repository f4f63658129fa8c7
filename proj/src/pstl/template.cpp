#include "stlwb/pstl/template.hpp"

#include <algorithm>

#include "stlwb/stl/parser.hpp"

namespace stlwb::pstl {

namespace {

void add_slot(std::vector<SlotInfo>& out, const std::string& name, SlotKind kind) {
  for (const auto& s : out)
    if (s.name == name) throw TemplateError("slot '?" + name + "' occurs more than once");
  out.push_back({name, kind});
}

void collect(const Formula& f, const std::map<std::string, std::vector<SlotKind>>& arg_kinds,
             std::vector<SlotInfo>& out) {
  switch (f.op()) {
    case stl::Op::True:
      return;
    case stl::Op::Atom: {
      const stl::Atom& a = f.atom();
      if (a.is_numeric()) {
        if (a.threshold.is_slot()) add_slot(out, a.threshold.as_slot().name, SlotKind::Threshold);
        return;
      }
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (!a.args[i].is_slot()) continue;
        auto it = arg_kinds.find(a.name);
        if (it == arg_kinds.end() || i >= it->second.size())
          throw TemplateError("no argument kind known for slot '?" + a.args[i].as_slot().name + "' of atom '" +
                              a.name + "'");
        add_slot(out, a.args[i].as_slot().name, it->second[i]);
      }
      return;
    }
    default:
      if (stl::is_temporal(f.op())) {
        const stl::Interval& i = f.interval();
        if (auto s = std::get_if<stl::Slot>(&i.lo)) add_slot(out, s->name, SlotKind::IntervalBound);
        if (auto s = std::get_if<stl::Slot>(&i.hi)) add_slot(out, s->name, SlotKind::IntervalBound);
      }
      collect(f.lhs(), arg_kinds, out);
      if (f.arity() == 2) collect(f.rhs(), arg_kinds, out);
  }
}

const Value& binding(const Valuation& v, const std::string& name) {
  auto it = v.find(name);
  if (it == v.end()) throw TemplateError("no binding for slot '?" + name + "'");
  return it->second;
}

std::int64_t bound_value(const Valuation& v, const stl::Bound& b) {
  if (auto i = std::get_if<std::int64_t>(&b)) return *i;
  const std::string& name = std::get<stl::Slot>(b).name;
  const Value& val = binding(v, name);
  auto i = std::get_if<std::int64_t>(&val);
  if (!i || *i < 0)
    throw TemplateError("slot '?" + name + "' needs a non-negative integer, got " + stl::format_value(val));
  return *i;
}

stl::Term resolve(const Valuation& v, const stl::Term& term, SlotKind kind) {
  if (!term.is_slot()) return term;
  const std::string& name = term.as_slot().name;
  const Value& val = binding(v, name);
  switch (kind) {
    case SlotKind::Coordinate:
    case SlotKind::IntervalBound:
      if (std::holds_alternative<std::int64_t>(val)) return stl::Term(val);
      break;
    case SlotKind::ItemName:
      if (std::holds_alternative<std::string>(val)) return stl::Term(val);
      break;
    case SlotKind::Threshold:
      if (auto i = std::get_if<std::int64_t>(&val)) return stl::Term::real(static_cast<double>(*i));
      if (std::holds_alternative<double>(val)) return stl::Term(val);
      break;
  }
  throw TemplateError("slot '?" + name + "' of kind " + stl::to_string(kind) + " cannot take " +
                      stl::format_value(val));
}

}  // namespace

PstlTemplate PstlTemplate::from_skeleton(Formula skeleton,
                                         const std::map<std::string, std::vector<SlotKind>>& arg_kinds) {
  PstlTemplate t{std::move(skeleton), {}};
  collect(t.skeleton, arg_kinds, t.slots);
  return t;
}

bool PstlTemplate::has_slot(const std::string& name) const { return find_slot(name) != nullptr; }

const SlotInfo* PstlTemplate::find_slot(const std::string& name) const {
  auto it = std::find_if(slots.begin(), slots.end(), [&](const SlotInfo& s) { return s.name == name; });
  return it == slots.end() ? nullptr : &*it;
}

Formula instantiate(const PstlTemplate& t, const Valuation& v) {
  auto kind_of = [&](const std::string& name) {
    const SlotInfo* s = t.find_slot(name);
    if (!s) throw TemplateError("slot '?" + name + "' is not declared by the template");
    return s->kind;
  };
  Formula f = stl::map_intervals(t.skeleton, [&](const stl::Interval& i) {
    std::int64_t lo = bound_value(v, i.lo), hi = bound_value(v, i.hi);
    if (lo > hi)
      throw TemplateError("interval [" + std::to_string(lo) + "," + std::to_string(hi) + "] has lo > hi");
    return stl::Interval::closed(lo, hi);
  });
  return stl::map_atoms(f, [&](const stl::Atom& a) {
    stl::Atom out = a;
    if (a.is_numeric()) {
      if (a.threshold.is_slot()) out.threshold = resolve(v, a.threshold, kind_of(a.threshold.as_slot().name));
    } else {
      for (auto& arg : out.args)
        if (arg.is_slot()) arg = resolve(v, arg, kind_of(arg.as_slot().name));
    }
    return Formula::atom(std::move(out));
  });
}

bool is_total(const PstlTemplate& t, const Valuation& v) {
  return std::all_of(t.slots.begin(), t.slots.end(), [&](const SlotInfo& s) { return v.count(s.name) != 0; });
}

std::string canonical(const PstlTemplate& t) { return stl::format_formula(t.skeleton); }

std::string interval_slot_name(std::size_t k) { return "t" + std::to_string(k); }

std::string atom_slot_name(const std::string& atom, const std::string& param) { return atom + "." + param; }

Formula number_interval_slots(const Formula& f) {
  std::size_t k = 0;
  return stl::map_intervals(f, [&](const stl::Interval& i) {
    ++k;
    stl::Interval out = i;
    if (std::holds_alternative<stl::Slot>(i.hi)) out.hi = stl::Slot{interval_slot_name(k)};
    return out;
  });
}

}  // namespace stlwb::pstl
