#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stlwb/pstl/template.hpp"
#include "stlwb/stl/formula.hpp"

namespace stlwb::pstl {

using stl::Op;

struct SynthesisBounds {
  std::size_t lower = 1;
  std::size_t upper = 1;
  friend bool operator==(const SynthesisBounds&, const SynthesisBounds&) = default;
};

/// l = 2n - 1 and u = 2n + conjunctions + adverbs for n verb phrases.
SynthesisBounds compute_length_bounds(std::size_t verb_phrases, std::size_t conjunctions,
                                      std::size_t adverbs);

/// Leaf of the enumeration: an atom, possibly negated, with the kinds of its
/// arguments. A negated literal is the two-node formula !(atom).
struct AtomLiteral {
  stl::Atom atom;
  bool negated = false;
  std::vector<SlotKind> arg_kinds;

  Formula formula() const;
};

/// Every template with length in `bounds` built from `ops` that uses each
/// literal exactly once. Nested identical unary operators are not produced.
/// Temporal intervals are [0, ?tK]. Sorted by (length, canonical text).
std::vector<PstlTemplate> enumerate_pstl(const std::vector<AtomLiteral>& literals, const std::vector<Op>& ops,
                                         SynthesisBounds bounds);

/// `after` must not become true before `before` has.
struct CausalDependency {
  std::string before;
  std::string after;
};

/// Boolean trace over named atoms; bits[a][t].
struct BitTrace {
  std::vector<std::string> atoms;
  std::vector<std::vector<bool>> bits;

  /// "lampOn=0110 itemOnRobot=0011"
  std::string format() const;
};

/// Searches for a trace of length horizon+1 that satisfies `f` at time 0 and
/// in which `after` holds somewhere but never at or after a time where
/// `before` holds. Every interval of `f` is replaced by [0, horizon] and every
/// atom by the proposition named after it, so `f` may contain slots.
std::optional<BitTrace> order_counterexample(const Formula& f, const CausalDependency& dep,
                                             std::int64_t horizon);

struct PrunedTemplate {
  PstlTemplate pstl;
  BitTrace counterexample;
  std::string reason;  // set instead of a counterexample for syntactic prunes
};

struct PruneResult {
  std::vector<PstlTemplate> survivors;
  std::vector<PrunedTemplate> pruned;

  /// One line per pruned template: canonical text, tab, counterexample.
  std::string report() const;
};

/// Removes every template for which order_counterexample finds a witness.
/// Throws std::invalid_argument if horizon < 1 or a template lacks one of
/// the two atoms.
PruneResult prune_causal(const std::vector<PstlTemplate>& templates, const CausalDependency& dep,
                         std::int64_t horizon = 3);

/// Removes templates where the first occurrence of `dep.after` is written to
/// the left of the first occurrence of `dep.before`. Two templates that differ
/// only by swapping conjuncts both pass the semantic check; after the user has
/// confirmed an order, the copy written in that order is the one kept.
PruneResult prune_reading_order(const std::vector<PstlTemplate>& templates, const CausalDependency& dep);

}  // namespace stlwb::pstl
