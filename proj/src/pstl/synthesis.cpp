#include "stlwb/pstl/synthesis.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "stlwb/stl/monitor.hpp"
#include "stlwb/stl/parser.hpp"

namespace stlwb::pstl {

SynthesisBounds compute_length_bounds(std::size_t verb_phrases, std::size_t conjunctions, std::size_t adverbs) {
  if (verb_phrases == 0) throw std::invalid_argument("length bounds need at least one verb phrase");
  return {2 * verb_phrases - 1, 2 * verb_phrases + conjunctions + adverbs};
}

Formula AtomLiteral::formula() const {
  Formula f = Formula::atom(atom);
  return negated ? Formula::negation(f) : f;
}

namespace {

const stl::Interval kOpenInterval{std::int64_t{0}, stl::Slot{"t"}};

}  // namespace

std::vector<PstlTemplate> enumerate_pstl(const std::vector<AtomLiteral>& literals, const std::vector<Op>& ops,
                                         SynthesisBounds bounds) {
  if (literals.empty()) throw std::invalid_argument("enumeration needs at least one atom");
  if (literals.size() > 8) throw std::invalid_argument("enumeration supports at most 8 atoms");
  std::vector<Op> unary, binary;
  for (Op op : ops) {
    if (stl::is_unary(op) && std::find(unary.begin(), unary.end(), op) == unary.end()) unary.push_back(op);
    if (stl::is_binary(op) && std::find(binary.begin(), binary.end(), op) == binary.end()) binary.push_back(op);
  }
  std::map<std::string, std::vector<SlotKind>> arg_kinds;
  for (const auto& l : literals) arg_kinds[l.atom.name] = l.arg_kinds;

  const std::size_t masks = std::size_t{1} << literals.size();
  const std::size_t full = masks - 1;
  // by_len[n][mask]: formulas of length n using exactly the literals in mask
  std::vector<std::vector<std::vector<Formula>>> by_len(bounds.upper + 1,
                                                        std::vector<std::vector<Formula>>(masks));
  for (std::size_t n = 1; n <= bounds.upper; ++n) {
    auto& here = by_len[n];
    for (std::size_t i = 0; i < literals.size(); ++i) {
      Formula leaf = literals[i].formula();
      if (stl::formula_length(leaf) == n) here[std::size_t{1} << i].push_back(leaf);
    }
    if (n >= 2) {
      for (std::size_t m = 1; m < masks; ++m)
        for (const auto& f : by_len[n - 1][m])
          for (Op op : unary) {
            if (f.op() == op) continue;
            here[m].push_back(Formula::make(op, kOpenInterval, f));
          }
    }
    for (std::size_t l1 = 1; l1 + 1 < n; ++l1) {
      std::size_t l2 = n - 1 - l1;
      for (std::size_t m1 = 1; m1 < masks; ++m1)
        for (std::size_t m2 = 1; m2 < masks; ++m2) {
          if (m1 & m2) continue;
          for (const auto& a : by_len[l1][m1])
            for (const auto& b : by_len[l2][m2])
              for (Op op : binary) here[m1 | m2].push_back(Formula::make(op, kOpenInterval, a, b));
        }
    }
  }

  std::vector<std::pair<std::size_t, PstlTemplate>> out;
  std::set<std::string> seen;
  for (std::size_t n = std::max<std::size_t>(bounds.lower, 1); n <= bounds.upper; ++n)
    for (const auto& f : by_len[n][full]) {
      PstlTemplate t = PstlTemplate::from_skeleton(number_interval_slots(f), arg_kinds);
      if (seen.insert(canonical(t)).second) out.emplace_back(n, std::move(t));
    }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return canonical(a.second) < canonical(b.second);
  });
  std::vector<PstlTemplate> result;
  result.reserve(out.size());
  for (auto& [n, t] : out) result.push_back(std::move(t));
  return result;
}

std::string BitTrace::format() const {
  std::string s;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (a) s += ' ';
    s += atoms[a];
    s += '=';
    for (bool b : bits[a]) s += b ? '1' : '0';
  }
  return s;
}

std::optional<BitTrace> order_counterexample(const Formula& f, const CausalDependency& dep, std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("probe horizon must be at least 1");
  if (dep.before == dep.after) throw std::invalid_argument("a dependency needs two distinct atoms");
  Formula reduced = stl::map_intervals(f, [&](const stl::Interval&) { return stl::Interval::closed(0, horizon); });
  reduced = stl::map_atoms(reduced, [](const stl::Atom& a) {
    if (a.is_numeric()) throw std::invalid_argument("ordering checks apply to Boolean atoms only");
    return Formula::atom(stl::Atom::proposition(a.name));
  });
  std::vector<std::string> names;
  for (const auto& a : stl::atoms_of(reduced))
    if (std::find(names.begin(), names.end(), a.name) == names.end()) names.push_back(a.name);
  auto index_of = [&](const std::string& n) -> std::size_t {
    auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) throw std::invalid_argument("atom '" + n + "' does not occur in " + stl::format_formula(f));
    return static_cast<std::size_t>(it - names.begin());
  };
  const std::size_t before = index_of(dep.before), after = index_of(dep.after);
  const std::size_t len = static_cast<std::size_t>(horizon) + 1;
  const std::size_t bits = names.size() * len;
  if (bits > 24) throw std::invalid_argument("ordering check too large: " + std::to_string(bits) + " bits");

  auto schema = std::make_shared<stl::TraceSchema>();
  for (const auto& n : names) schema->add(n, stl::ChannelKind::Boolean);
  stl::Monitor monitor(reduced, *schema);
  std::vector<double> row(names.size());
  auto bit = [&](std::uint64_t m, std::size_t a, std::size_t t) { return ((m >> (t * names.size() + a)) & 1U) != 0; };
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << bits); ++m) {
    std::optional<std::size_t> first_before, last_after;
    for (std::size_t t = 0; t < len; ++t) {
      if (!first_before && bit(m, before, t)) first_before = t;
      if (bit(m, after, t)) last_after = t;
    }
    if (!last_after || (first_before && *first_before <= *last_after)) continue;
    stl::Trace trace(schema);
    for (std::size_t t = 0; t < len; ++t) {
      for (std::size_t a = 0; a < names.size(); ++a) row[a] = bit(m, a, t) ? 1.0 : 0.0;
      trace.push_back(row);
    }
    if (!monitor.satisfies(trace, 0)) continue;
    BitTrace cex{names, std::vector<std::vector<bool>>(names.size(), std::vector<bool>(len))};
    for (std::size_t a = 0; a < names.size(); ++a)
      for (std::size_t t = 0; t < len; ++t) cex.bits[a][t] = bit(m, a, t);
    return cex;
  }
  return std::nullopt;
}

std::string PruneResult::report() const {
  std::string s;
  for (const auto& p : pruned) {
    s += canonical(p.pstl);
    s += '\t';
    s += p.reason.empty() ? p.counterexample.format() : p.reason;
    s += '\n';
  }
  return s;
}

PruneResult prune_causal(const std::vector<PstlTemplate>& templates, const CausalDependency& dep,
                         std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("probe horizon must be at least 1");
  PruneResult r;
  for (const auto& t : templates) {
    if (auto cex = order_counterexample(t.skeleton, dep, horizon))
      r.pruned.push_back({t, std::move(*cex), {}});
    else
      r.survivors.push_back(t);
  }
  return r;
}

PruneResult prune_reading_order(const std::vector<PstlTemplate>& templates, const CausalDependency& dep) {
  PruneResult r;
  for (const auto& t : templates) {
    const auto atoms = stl::atoms_of(t.skeleton);
    auto first = [&](const std::string& name) {
      return std::find_if(atoms.begin(), atoms.end(), [&](const stl::Atom& a) { return a.name == name; });
    };
    auto b = first(dep.before), a = first(dep.after);
    if (a != atoms.end() && b != atoms.end() && a < b)
      r.pruned.push_back({t, {}, dep.after + " written before " + dep.before});
    else
      r.survivors.push_back(t);
  }
  return r;
}

}  // namespace stlwb::pstl
