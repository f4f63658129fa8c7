#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace stlwb::stl {

/// Kind of value a parameter slot (or an atom argument) accepts.
enum class SlotKind { IntervalBound, Coordinate, ItemName, Threshold };

const char* to_string(SlotKind kind);

/// Named placeholder for a value supplied later by a valuation.
struct Slot {
  std::string name;
  friend bool operator==(const Slot&, const Slot&) = default;
};

/// A concrete parameter value: integer (bounds, coordinates), real
/// (thresholds) or symbol (item names).
using Value = std::variant<std::int64_t, double, std::string>;

std::string format_value(const Value& v);

/// Atom argument or threshold: either a concrete value or an unresolved slot.
class Term {
 public:
  Term() : rep_(Value{std::int64_t{0}}) {}
  Term(Value v) : rep_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  Term(Slot s) : rep_(std::move(s)) {}   // NOLINT(google-explicit-constructor)

  static Term integer(std::int64_t v) { return Term(Value{v}); }
  static Term real(double v) { return Term(Value{v}); }
  static Term symbol(std::string v) { return Term(Value{std::move(v)}); }
  static Term slot(std::string name) { return Term(Slot{std::move(name)}); }

  bool is_slot() const { return std::holds_alternative<Slot>(rep_); }
  const Slot& as_slot() const { return std::get<Slot>(rep_); }
  const Value& value() const { return std::get<Value>(rep_); }

  friend bool operator==(const Term&, const Term&) = default;

 private:
  std::variant<Value, Slot> rep_;
};

std::string format_term(const Term& t);

/// Interval endpoint: a non-negative integer number of seconds or a slot.
using Bound = std::variant<std::int64_t, Slot>;

/// Closed integer interval [lo, hi].
struct Interval {
  Bound lo = std::int64_t{0};
  Bound hi = std::int64_t{0};

  Interval() = default;
  Interval(Bound l, Bound h);
  static Interval closed(std::int64_t l, std::int64_t h) { return {l, h}; }

  bool is_ground() const;
  std::int64_t lower() const { return std::get<std::int64_t>(lo); }
  std::int64_t upper() const { return std::get<std::int64_t>(hi); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class Comparison { LessEq, GreaterEq, Equal };

/// Atomic predicate. Environment form: `name(args...)`; numeric form:
/// `signal ~ threshold`. The two forms are mutually exclusive.
struct Atom {
  std::string name;
  std::vector<Term> args;
  std::optional<Comparison> comparison;  // set only for the numeric form
  Term threshold;

  static Atom proposition(std::string name, std::vector<Term> args = {});
  static Atom numeric(std::string signal, Comparison cmp, Term threshold);

  bool is_numeric() const { return comparison.has_value(); }
  bool is_ground() const;
  /// Text used to look the atom up in a trace: `name` or `name(a,b)`.
  std::string key() const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

enum class Op { True, Atom, Not, And, Or, Implies, Eventually, Always, Until };

bool is_unary(Op op);
bool is_binary(Op op);
bool is_temporal(Op op);

/// Immutable STL/PSTL formula. Copies share structure; equality is structural.
class Formula {
 public:
  Formula();  // true

  static Formula truth();
  static Formula atom(Atom a);
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula eventually(Interval i, Formula f);
  static Formula always(Interval i, Formula f);
  static Formula until(Interval i, Formula lhs, Formula rhs);
  /// Rebuilds a node of kind `op` from parts; `i` is ignored for non-temporal ops.
  static Formula make(Op op, const Interval& i, Formula lhs, std::optional<Formula> rhs = {});

  Op op() const;
  const Atom& atom() const;
  const Interval& interval() const;
  /// Operand of a unary node, or left operand of a binary node.
  const Formula& lhs() const;
  const Formula& rhs() const;
  std::size_t arity() const;

  bool is_ground() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Number of atom and operator nodes; `true` contributes nothing.
std::size_t formula_length(const Formula& f);

/// Atoms in preorder.
std::vector<Atom> atoms_of(const Formula& f);

/// Temporal operator nodes (F, G, U) in preorder.
std::vector<Formula> temporal_nodes(const Formula& f);

/// Applies `fn` to every atom, rebuilding the tree.
template <typename Fn>
Formula map_atoms(const Formula& f, Fn&& fn) {
  switch (f.op()) {
    case Op::True:
      return f;
    case Op::Atom:
      return fn(f.atom());
    default: {
      Formula l = map_atoms(f.lhs(), fn);
      if (f.arity() == 1) return Formula::make(f.op(), f.interval(), std::move(l));
      return Formula::make(f.op(), f.interval(), std::move(l), map_atoms(f.rhs(), fn));
    }
  }
}

/// Applies `fn` to the interval of every temporal node, rebuilding the tree.
template <typename Fn>
Formula map_intervals(const Formula& f, Fn&& fn) {
  if (f.op() == Op::True || f.op() == Op::Atom) return f;
  Interval i = is_temporal(f.op()) ? fn(f.interval()) : f.interval();
  Formula l = map_intervals(f.lhs(), fn);
  if (f.arity() == 1) return Formula::make(f.op(), i, std::move(l));
  return Formula::make(f.op(), i, std::move(l), map_intervals(f.rhs(), fn));
}

class FormulaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stlwb::stl
