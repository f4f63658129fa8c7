#pragma once
// Test-only reference evaluator: temporal operators are unrolled into explicit
// conjunctions/disjunctions over time indices, then the resulting
// propositional expression is evaluated. Shares no code with stl::Monitor.

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "stlwb/stl/formula.hpp"
#include "stlwb/stl/trace.hpp"

namespace stlwb::testing {

struct Prop {
  enum class Kind { Const, Var, Not, All, Any } kind = Kind::Const;
  bool value = true;
  std::size_t atom = 0;  // index into the atom list
  std::size_t time = 0;
  std::vector<Prop> kids;

  static Prop constant(bool v) { return Prop{Kind::Const, v, 0, 0, {}}; }
  static Prop var(std::size_t a, std::size_t t) { return Prop{Kind::Var, true, a, t, {}}; }
  static Prop negate(Prop p) { return Prop{Kind::Not, true, 0, 0, {std::move(p)}}; }
  static Prop all(std::vector<Prop> k) { return Prop{Kind::All, true, 0, 0, std::move(k)}; }
  static Prop any(std::vector<Prop> k) { return Prop{Kind::Any, true, 0, 0, std::move(k)}; }
};

/// Unrolls `f` at time `t` over a trace of length `len`. Atoms are looked up by
/// key in `atoms`; each must be a plain proposition.
inline Prop unroll(const stl::Formula& f, std::size_t t, std::size_t len,
                   const std::vector<std::string>& atoms) {
  using stl::Op;
  auto window = [&](const stl::Formula& g) {
    std::vector<std::size_t> ts;
    for (auto u = t + static_cast<std::size_t>(g.interval().lower());
         u <= t + static_cast<std::size_t>(g.interval().upper()) && u < len; ++u)
      ts.push_back(u);
    return ts;
  };
  switch (f.op()) {
    case Op::True: return Prop::constant(true);
    case Op::Atom: {
      for (std::size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i] == f.atom().key()) return Prop::var(i, t);
      throw std::runtime_error("unknown atom in oracle");
    }
    case Op::Not: return Prop::negate(unroll(f.lhs(), t, len, atoms));
    case Op::And: return Prop::all({unroll(f.lhs(), t, len, atoms), unroll(f.rhs(), t, len, atoms)});
    case Op::Or: return Prop::any({unroll(f.lhs(), t, len, atoms), unroll(f.rhs(), t, len, atoms)});
    case Op::Implies:
      return Prop::any({Prop::negate(unroll(f.lhs(), t, len, atoms)), unroll(f.rhs(), t, len, atoms)});
    case Op::Always: {
      std::vector<Prop> k;
      for (auto u : window(f)) k.push_back(unroll(f.lhs(), u, len, atoms));
      return Prop::all(std::move(k));
    }
    case Op::Eventually: {
      std::vector<Prop> k;
      for (auto u : window(f)) k.push_back(unroll(f.lhs(), u, len, atoms));
      return Prop::any(std::move(k));
    }
    case Op::Until: {
      std::vector<Prop> k;
      for (auto u : window(f)) {
        std::vector<Prop> conj{unroll(f.rhs(), u, len, atoms)};
        for (std::size_t v = t; v < u; ++v) conj.push_back(unroll(f.lhs(), v, len, atoms));
        k.push_back(Prop::all(std::move(conj)));
      }
      return Prop::any(std::move(k));
    }
  }
  return Prop::constant(false);
}

/// `bits(atom, time)` gives the proposition value.
template <typename Bits>
bool eval(const Prop& p, const Bits& bits) {
  switch (p.kind) {
    case Prop::Kind::Const: return p.value;
    case Prop::Kind::Var: return bits(p.atom, p.time);
    case Prop::Kind::Not: return !eval(p.kids[0], bits);
    case Prop::Kind::All:
      for (const auto& k : p.kids)
        if (!eval(k, bits)) return false;
      return true;
    case Prop::Kind::Any:
      for (const auto& k : p.kids)
        if (eval(k, bits)) return true;
      return false;
  }
  return false;
}

/// Trace over propositions `names` whose bit for (atom a, time t) is bit
/// `t * names.size() + a` of `mask`.
inline stl::Trace bit_trace(const std::vector<std::string>& names, std::size_t len, std::uint64_t mask) {
  auto schema = std::make_shared<stl::TraceSchema>();
  for (const auto& n : names) schema->add(n, stl::ChannelKind::Boolean);
  stl::Trace tr(schema);
  std::vector<double> row(names.size());
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t a = 0; a < names.size(); ++a) row[a] = (mask >> (t * names.size() + a)) & 1U;
    tr.push_back(row);
  }
  return tr;
}

/// All formulas of exactly `length` nodes over propositions `atoms`, with
/// every interval [lo,hi], 0 <= lo <= hi <= max_bound.
inline std::vector<stl::Formula> all_formulas(const std::vector<std::string>& atoms,
                                              std::size_t max_length, std::int64_t max_bound) {
  using stl::Formula;
  using stl::Op;
  std::vector<stl::Interval> intervals;
  for (std::int64_t lo = 0; lo <= max_bound; ++lo)
    for (std::int64_t hi = lo; hi <= max_bound; ++hi) intervals.push_back(stl::Interval::closed(lo, hi));
  std::vector<std::vector<Formula>> by_len(max_length + 1);
  for (const auto& a : atoms) by_len[1].push_back(Formula::atom(stl::Atom::proposition(a)));
  for (std::size_t n = 2; n <= max_length; ++n) {
    for (const auto& f : by_len[n - 1]) {
      by_len[n].push_back(Formula::negation(f));
      for (const auto& i : intervals) {
        by_len[n].push_back(Formula::eventually(i, f));
        by_len[n].push_back(Formula::always(i, f));
      }
    }
    for (std::size_t l = 1; l + 1 < n; ++l) {
      for (const auto& a : by_len[l])
        for (const auto& b : by_len[n - 1 - l]) {
          by_len[n].push_back(Formula::conjunction(a, b));
          by_len[n].push_back(Formula::disjunction(a, b));
          by_len[n].push_back(Formula::implication(a, b));
          for (const auto& i : intervals) by_len[n].push_back(Formula::until(i, a, b));
        }
    }
  }
  std::vector<Formula> out;
  for (auto& v : by_len) out.insert(out.end(), v.begin(), v.end());
  return out;
}

/// Random ground formula mixing Boolean atoms `props` and numeric atoms over
/// `signals`.
class FormulaGenerator {
 public:
  FormulaGenerator(std::vector<std::string> props, std::vector<std::string> signals, std::uint64_t seed)
      : props_(std::move(props)), signals_(std::move(signals)), rng_(seed) {}

  stl::Formula operator()(int depth) {
    using stl::Formula;
    if (depth == 0 || pick(4) == 0) return leaf();
    auto interval = [&] {
      std::int64_t lo = pick(4), hi = lo + pick(5);
      return stl::Interval::closed(lo, hi);
    };
    switch (pick(7)) {
      case 0: return Formula::negation((*this)(depth - 1));
      case 1: return Formula::conjunction((*this)(depth - 1), (*this)(depth - 1));
      case 2: return Formula::disjunction((*this)(depth - 1), (*this)(depth - 1));
      case 3: return Formula::implication((*this)(depth - 1), (*this)(depth - 1));
      case 4: return Formula::eventually(interval(), (*this)(depth - 1));
      case 5: return Formula::always(interval(), (*this)(depth - 1));
      default: return Formula::until(interval(), (*this)(depth - 1), (*this)(depth - 1));
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::int64_t pick(std::int64_t n) { return static_cast<std::int64_t>(rng_() % static_cast<std::uint64_t>(n)); }

  stl::Formula leaf() {
    using stl::Formula;
    if (!signals_.empty() && pick(2) == 0) {
      auto cmp = pick(3) == 0 ? stl::Comparison::GreaterEq : stl::Comparison::LessEq;
      double c = static_cast<double>(pick(9) - 4) / 4.0;
      return Formula::atom(stl::Atom::numeric(signals_[pick(static_cast<std::int64_t>(signals_.size()))],
                                              cmp, stl::Term::real(c)));
    }
    return Formula::atom(stl::Atom::proposition(props_[pick(static_cast<std::int64_t>(props_.size()))]));
  }

  std::vector<std::string> props_;
  std::vector<std::string> signals_;
  std::mt19937_64 rng_;
};

}  // namespace stlwb::testing
