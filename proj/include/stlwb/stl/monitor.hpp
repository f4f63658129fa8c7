#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

#include "stlwb/stl/formula.hpp"
#include "stlwb/stl/trace.hpp"

namespace stlwb::stl {

class MonitorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ground formula bound to a trace schema: atoms are resolved to columns
/// once, so the monitor can be reused across traces sharing the schema.
///
/// Windows `[t+lo, t+hi]` are clipped to the end of the trace. An empty G
/// window holds vacuously (+inf robustness); an empty F or U window fails
/// (-inf).
class Monitor {
 public:
  Monitor(const Formula& formula, const TraceSchema& schema);

  bool satisfies(const Trace& trace, std::size_t t) const;
  double robustness(const Trace& trace, std::size_t t) const;

  const Formula& formula() const { return formula_; }

 private:
  struct Node {
    Op op;
    // atoms
    std::ptrdiff_t column = -1;  // -1: absent instance of a known family, reads false
    bool numeric = false;
    Comparison cmp = Comparison::LessEq;
    double threshold = 0;
    // temporal
    std::size_t lo = 0, hi = 0;
    int kids[2] = {-1, -1};
  };

  int compile(const Formula& f, const TraceSchema& schema);
  bool sat(int node, const Trace& x, std::size_t t) const;
  double rho(int node, const Trace& x, std::size_t t) const;
  void check(const Trace& x, std::size_t t) const;

  Formula formula_;
  std::vector<Node> nodes_;
  int root_ = -1;
  std::size_t width_;
};

/// Boolean satisfaction of `formula` by `trace` at time `t`.
bool satisfies(const Formula& formula, const Trace& trace, std::size_t t = 0);

/// Quantitative robustness: numeric atoms measure distance to the threshold,
/// propositions score +1/-1, Not negates, And/G take the min, Or/F the max.
double robustness(const Formula& formula, const Trace& trace, std::size_t t = 0);

}  // namespace stlwb::stl
