#include "stlwb/stl/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stlwb/stl/parser.hpp"

namespace stlwb::stl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double to_real(const Value& v) {
  if (auto i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (auto d = std::get_if<double>(&v)) return *d;
  throw MonitorError("numeric threshold must be a number, got '" + std::get<std::string>(v) + "'");
}

}  // namespace

Monitor::Monitor(const Formula& formula, const TraceSchema& schema)
    : formula_(formula), width_(schema.size()) {
  if (!formula.is_ground())
    throw MonitorError("formula has unresolved parameters: " + format_formula(formula));
  root_ = compile(formula, schema);
}

int Monitor::compile(const Formula& f, const TraceSchema& schema) {
  Node n;
  n.op = f.op();
  switch (f.op()) {
    case Op::True:
      break;
    case Op::Atom: {
      const Atom& a = f.atom();
      if (a.is_numeric()) {
        auto col = schema.find(a.name);
        if (!col || schema.kind(*col) != ChannelKind::Numeric)
          throw MonitorError("trace has no numeric signal '" + a.name + "'");
        n.column = static_cast<std::ptrdiff_t>(*col);
        n.numeric = true;
        n.cmp = *a.comparison;
        n.threshold = to_real(a.threshold.value());
      } else {
        const std::string key = a.key();
        auto col = schema.find(key);
        if (col && schema.kind(*col) == ChannelKind::Boolean) {
          n.column = static_cast<std::ptrdiff_t>(*col);
        } else if (!a.args.empty() && schema.has_family(a.name)) {
          n.column = -1;
        } else {
          throw MonitorError("trace has no proposition '" + key + "'");
        }
      }
      break;
    }
    default: {
      if (is_temporal(f.op())) {
        n.lo = static_cast<std::size_t>(f.interval().lower());
        n.hi = static_cast<std::size_t>(f.interval().upper());
      }
      int l = compile(f.lhs(), schema);
      int r = f.arity() == 2 ? compile(f.rhs(), schema) : -1;
      n.kids[0] = l;
      n.kids[1] = r;
    }
  }
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size() - 1);
}

void Monitor::check(const Trace& x, std::size_t t) const {
  if (x.schema().size() != width_)
    throw MonitorError("trace schema differs from the monitor's schema");
  if (t >= x.size())
    throw MonitorError("time index " + std::to_string(t) + " outside trace of length " +
                       std::to_string(x.size()));
}

bool Monitor::satisfies(const Trace& x, std::size_t t) const {
  check(x, t);
  return sat(root_, x, t);
}

double Monitor::robustness(const Trace& x, std::size_t t) const {
  check(x, t);
  return rho(root_, x, t);
}

bool Monitor::sat(int id, const Trace& x, std::size_t t) const {
  const Node& n = nodes_[id];
  const std::size_t last = x.size() - 1;
  switch (n.op) {
    case Op::True:
      return true;
    case Op::Atom: {
      if (n.column < 0) return false;
      double v = x.at(t, static_cast<std::size_t>(n.column));
      if (!n.numeric) return v != 0.0;
      if (std::isnan(v)) throw MonitorError("missing sample for signal at t=" + std::to_string(t));
      switch (n.cmp) {
        case Comparison::LessEq: return v <= n.threshold;
        case Comparison::GreaterEq: return v >= n.threshold;
        case Comparison::Equal: return v == n.threshold;
      }
      return false;
    }
    case Op::Not:
      return !sat(n.kids[0], x, t);
    case Op::And:
      return sat(n.kids[0], x, t) && sat(n.kids[1], x, t);
    case Op::Or:
      return sat(n.kids[0], x, t) || sat(n.kids[1], x, t);
    case Op::Implies:
      return !sat(n.kids[0], x, t) || sat(n.kids[1], x, t);
    case Op::Always: {
      const std::size_t end = std::min(t + n.hi, last);
      for (std::size_t u = t + n.lo; u <= end; ++u)
        if (!sat(n.kids[0], x, u)) return false;
      return true;
    }
    case Op::Eventually: {
      const std::size_t end = std::min(t + n.hi, last);
      for (std::size_t u = t + n.lo; u <= end; ++u)
        if (sat(n.kids[0], x, u)) return true;
      return false;
    }
    case Op::Until: {
      const std::size_t end = std::min(t + n.hi, last);
      for (std::size_t u = t; u <= end; ++u) {
        if (u >= t + n.lo && sat(n.kids[1], x, u)) return true;
        if (!sat(n.kids[0], x, u)) return false;
      }
      return false;
    }
  }
  return false;
}

double Monitor::rho(int id, const Trace& x, std::size_t t) const {
  const Node& n = nodes_[id];
  const std::size_t last = x.size() - 1;
  switch (n.op) {
    case Op::True:
      return kInf;
    case Op::Atom: {
      if (n.column < 0) return -1.0;
      double v = x.at(t, static_cast<std::size_t>(n.column));
      if (!n.numeric) return v != 0.0 ? 1.0 : -1.0;
      if (std::isnan(v)) throw MonitorError("missing sample for signal at t=" + std::to_string(t));
      switch (n.cmp) {
        case Comparison::LessEq: return n.threshold - v;
        case Comparison::GreaterEq: return v - n.threshold;
        case Comparison::Equal: return -std::abs(v - n.threshold);
      }
      return 0;
    }
    case Op::Not:
      return -rho(n.kids[0], x, t);
    case Op::And:
      return std::min(rho(n.kids[0], x, t), rho(n.kids[1], x, t));
    case Op::Or:
      return std::max(rho(n.kids[0], x, t), rho(n.kids[1], x, t));
    case Op::Implies:
      return std::max(-rho(n.kids[0], x, t), rho(n.kids[1], x, t));
    case Op::Always: {
      double r = kInf;
      const std::size_t end = std::min(t + n.hi, last);
      for (std::size_t u = t + n.lo; u <= end; ++u) r = std::min(r, rho(n.kids[0], x, u));
      return r;
    }
    case Op::Eventually: {
      double r = -kInf;
      const std::size_t end = std::min(t + n.hi, last);
      for (std::size_t u = t + n.lo; u <= end; ++u) r = std::max(r, rho(n.kids[0], x, u));
      return r;
    }
    case Op::Until: {
      // max over u in window of min(rho2(u), min_{t <= v < u} rho1(v))
      double best = -kInf;
      double prefix = kInf;
      const std::size_t end = std::min(t + n.hi, last);
      for (std::size_t u = t; u <= end; ++u) {
        if (u >= t + n.lo) best = std::max(best, std::min(rho(n.kids[1], x, u), prefix));
        prefix = std::min(prefix, rho(n.kids[0], x, u));
      }
      return best;
    }
  }
  return 0;
}

bool satisfies(const Formula& formula, const Trace& trace, std::size_t t) {
  return Monitor(formula, trace.schema()).satisfies(trace, t);
}

double robustness(const Formula& formula, const Trace& trace, std::size_t t) {
  return Monitor(formula, trace.schema()).robustness(trace, t);
}

}  // namespace stlwb::stl
