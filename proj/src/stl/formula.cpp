#include "stlwb/stl/formula.hpp"

#include <charconv>
#include <cmath>

namespace stlwb::stl {

const char* to_string(SlotKind kind) {
  switch (kind) {
    case SlotKind::IntervalBound: return "intervalBound";
    case SlotKind::Coordinate: return "coordinate";
    case SlotKind::ItemName: return "itemName";
    case SlotKind::Threshold: return "threshold";
  }
  return "?";
}

namespace {

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  // keep reals distinguishable from integers when re-parsed
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

std::string format_value(const Value& v) {
  if (auto i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (auto d = std::get_if<double>(&v)) return format_real(*d);
  return std::get<std::string>(v);
}

std::string format_term(const Term& t) {
  if (t.is_slot()) return "?" + t.as_slot().name;
  return format_value(t.value());
}

Interval::Interval(Bound l, Bound h) : lo(std::move(l)), hi(std::move(h)) {
  auto neg = [](const Bound& b) {
    auto v = std::get_if<std::int64_t>(&b);
    return v && *v < 0;
  };
  if (neg(lo) || neg(hi)) throw FormulaError("interval bounds must be non-negative");
  if (is_ground() && lower() > upper())
    throw FormulaError("malformed interval [" + std::to_string(lower()) + "," +
                       std::to_string(upper()) + "]: lower bound exceeds upper bound");
}

bool Interval::is_ground() const {
  return std::holds_alternative<std::int64_t>(lo) && std::holds_alternative<std::int64_t>(hi);
}

Atom Atom::proposition(std::string name, std::vector<Term> args) {
  Atom a;
  a.name = std::move(name);
  a.args = std::move(args);
  return a;
}

Atom Atom::numeric(std::string signal, Comparison cmp, Term threshold) {
  Atom a;
  a.name = std::move(signal);
  a.comparison = cmp;
  a.threshold = std::move(threshold);
  return a;
}

bool Atom::is_ground() const {
  for (const auto& t : args)
    if (t.is_slot()) return false;
  return !(is_numeric() && threshold.is_slot());
}

std::string Atom::key() const {
  if (args.empty()) return name;
  std::string s = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ',';
    s += format_term(args[i]);
  }
  return s + ")";
}

bool is_unary(Op op) { return op == Op::Not || op == Op::Eventually || op == Op::Always; }
bool is_binary(Op op) {
  return op == Op::And || op == Op::Or || op == Op::Implies || op == Op::Until;
}
bool is_temporal(Op op) { return op == Op::Eventually || op == Op::Always || op == Op::Until; }

struct Formula::Node {
  Op op = Op::True;
  std::optional<Atom> atom;
  Interval interval;
  std::array<std::optional<Formula>, 2> kids;
};

Formula::Formula() : node_(std::make_shared<const Node>()) {}

Formula Formula::truth() { return Formula(); }

Formula Formula::atom(Atom a) {
  auto n = std::make_shared<Node>();
  n->op = Op::Atom;
  n->atom = std::move(a);
  return Formula(std::move(n));
}

Formula Formula::make(Op op, const Interval& i, Formula lhs, std::optional<Formula> rhs) {
  if (op == Op::True || op == Op::Atom) throw FormulaError("make() needs an operator node");
  if (is_binary(op) != rhs.has_value()) throw FormulaError("operand count does not match operator");
  auto n = std::make_shared<Node>();
  n->op = op;
  if (is_temporal(op)) n->interval = i;
  n->kids[0] = std::move(lhs);
  n->kids[1] = std::move(rhs);
  return Formula(std::move(n));
}

Formula Formula::negation(Formula f) { return make(Op::Not, {}, std::move(f)); }
Formula Formula::conjunction(Formula l, Formula r) { return make(Op::And, {}, std::move(l), std::move(r)); }
Formula Formula::disjunction(Formula l, Formula r) { return make(Op::Or, {}, std::move(l), std::move(r)); }
Formula Formula::implication(Formula l, Formula r) { return make(Op::Implies, {}, std::move(l), std::move(r)); }
Formula Formula::eventually(Interval i, Formula f) { return make(Op::Eventually, i, std::move(f)); }
Formula Formula::always(Interval i, Formula f) { return make(Op::Always, i, std::move(f)); }
Formula Formula::until(Interval i, Formula l, Formula r) {
  return make(Op::Until, i, std::move(l), std::move(r));
}

Op Formula::op() const { return node_->op; }

const Atom& Formula::atom() const {
  if (!node_->atom) throw FormulaError("not an atom node");
  return *node_->atom;
}

const Interval& Formula::interval() const { return node_->interval; }

const Formula& Formula::lhs() const {
  if (!node_->kids[0]) throw FormulaError("node has no operands");
  return *node_->kids[0];
}

const Formula& Formula::rhs() const {
  if (!node_->kids[1]) throw FormulaError("node has no right operand");
  return *node_->kids[1];
}

std::size_t Formula::arity() const {
  return node_->kids[1] ? 2 : node_->kids[0] ? 1 : 0;
}

bool Formula::is_ground() const {
  switch (op()) {
    case Op::True: return true;
    case Op::Atom: return atom().is_ground();
    default:
      if (is_temporal(op()) && !interval().is_ground()) return false;
      return lhs().is_ground() && (arity() == 1 || rhs().is_ground());
  }
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::True: return true;
    case Op::Atom: return a.atom() == b.atom();
    default:
      if (is_temporal(a.op()) && !(a.interval() == b.interval())) return false;
      if (!(a.lhs() == b.lhs())) return false;
      return a.arity() == 1 || a.rhs() == b.rhs();
  }
}

std::size_t formula_length(const Formula& f) {
  switch (f.op()) {
    case Op::True: return 0;
    case Op::Atom: return 1;
    default: return 1 + formula_length(f.lhs()) + (f.arity() == 2 ? formula_length(f.rhs()) : 0);
  }
}

namespace {

void collect(const Formula& f, std::vector<Atom>* atoms, std::vector<Formula>* temporal) {
  if (f.op() == Op::True) return;
  if (f.op() == Op::Atom) {
    if (atoms) atoms->push_back(f.atom());
    return;
  }
  if (temporal && is_temporal(f.op())) temporal->push_back(f);
  collect(f.lhs(), atoms, temporal);
  if (f.arity() == 2) collect(f.rhs(), atoms, temporal);
}

}  // namespace

std::vector<Atom> atoms_of(const Formula& f) {
  std::vector<Atom> out;
  collect(f, &out, nullptr);
  return out;
}

std::vector<Formula> temporal_nodes(const Formula& f) {
  std::vector<Formula> out;
  collect(f, nullptr, &out);
  return out;
}

}  // namespace stlwb::stl
