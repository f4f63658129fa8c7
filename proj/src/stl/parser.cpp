#include "stlwb/stl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace stlwb::stl {

ParseError::ParseError(std::size_t position, const std::string& message)
    : std::runtime_error("parse error at " + std::to_string(position) + ": " + message),
      position_(position) {}

bool AtomSignature::has_signal(const std::string& name) const {
  return std::find(signals.begin(), signals.end(), name) != signals.end();
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

class Parser {
 public:
  Parser(std::string_view text, const AtomSignature* sig) : text_(text), sig_(sig) {}

  Formula parse() {
    Formula f = formula();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string ident() {
    skip_ws();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  // True when the next token is the single-letter keyword `k` followed by '['.
  bool at_temporal_keyword(char k) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != k) return false;
    std::size_t p = pos_ + 1;
    if (p < text_.size() && ident_char(text_[p])) return false;
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    return p < text_.size() && text_[p] == '[';
  }

  Value number() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    bool real = false;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '.' || c == 'e' || c == 'E') {
        real = true;
        ++pos_;
        if ((c == 'e' || c == 'E') && pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+'))
          ++pos_;
      } else {
        break;
      }
    }
    std::string_view tok = text_.substr(start, pos_ - start);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    if (tok.empty() || tok == "-") {
      pos_ = start;
      fail("expected number");
    }
    if (real) {
      double d = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), d);
      if (ec != std::errc() || p != tok.data() + tok.size()) {
        pos_ = start;
        fail("malformed number");
      }
      return d;
    }
    std::int64_t i = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), i);
    if (ec != std::errc() || p != tok.data() + tok.size()) {
      pos_ = start;
      fail("malformed integer");
    }
    return i;
  }

  Slot slot() {
    expect("?");
    return Slot{ident()};
  }

  Bound bound() {
    if (peek() == '?') return slot();
    std::size_t at = pos_;
    Value v = number();
    auto i = std::get_if<std::int64_t>(&v);
    if (!i || *i < 0) {
      pos_ = at;
      fail("interval bound must be a non-negative integer");
    }
    return *i;
  }

  Interval interval() {
    std::size_t at = (skip_ws(), pos_);
    expect("[");
    Bound lo = bound();
    expect(",");
    Bound hi = bound();
    expect("]");
    try {
      return Interval(std::move(lo), std::move(hi));
    } catch (const FormulaError& e) {
      throw ParseError(at, e.what());
    }
  }

  Term term() {
    char c = peek();
    if (c == '?') return slot();
    if (ident_start(c)) return Term::symbol(ident());
    return Term(number());
  }

  Formula atom(std::size_t at, std::string name) {
    std::optional<Comparison> cmp;
    if (accept("<=")) cmp = Comparison::LessEq;
    else if (accept(">=")) cmp = Comparison::GreaterEq;
    else if (accept("==") || accept("=")) cmp = Comparison::Equal;
    if (cmp) {
      if (sig_ && !sig_->has_signal(name)) throw ParseError(at, "unknown signal '" + name + "'");
      Term threshold = peek() == '?' ? Term(slot()) : Term(number());
      return Formula::atom(Atom::numeric(std::move(name), *cmp, std::move(threshold)));
    }
    std::vector<Term> args;
    if (peek() == '(') {
      expect("(");
      args.push_back(term());
      while (accept(",")) args.push_back(term());
      expect(")");
    }
    if (sig_) {
      auto it = sig_->atoms.find(name);
      if (it == sig_->atoms.end()) throw ParseError(at, "unknown atom '" + name + "'");
      if (it->second.size() != args.size())
        throw ParseError(at, "atom '" + name + "' takes " + std::to_string(it->second.size()) +
                                 " argument(s), got " + std::to_string(args.size()));
    }
    return Formula::atom(Atom::proposition(std::move(name), std::move(args)));
  }

  // Contents of a parenthesized group up to and including the closing ')':
  // either a single formula or one binary operator application.
  Formula group_body() {
    Formula lhs = formula();
    if (accept(")")) return lhs;
    if (at_temporal_keyword('U')) {
      ++pos_;
      Interval i = interval();
      Formula rhs = formula();
      expect(")");
      return Formula::until(i, std::move(lhs), std::move(rhs));
    }
    Op op;
    if (accept("->")) op = Op::Implies;
    else if (accept("&")) op = Op::And;
    else if (accept("|")) op = Op::Or;
    else fail("expected ')' or a binary operator");
    Formula rhs = formula();
    expect(")");
    return Formula::make(op, {}, std::move(lhs), std::move(rhs));
  }

  Formula formula() {
    char c = peek();
    if (c == '\0') fail("unexpected end of input");
    if (c == '!') {
      ++pos_;
      expect("(");
      return Formula::negation(group_body());
    }
    if (c == '(') {
      ++pos_;
      return group_body();
    }
    if (at_temporal_keyword('F') || at_temporal_keyword('G')) {
      Op op = text_[pos_] == 'F' ? Op::Eventually : Op::Always;
      ++pos_;
      Interval i = interval();
      expect("(");
      return Formula::make(op, i, group_body());
    }
    if (ident_start(c)) {
      std::size_t at = pos_;
      std::string name = ident();
      if (name == "true") return Formula::truth();
      return atom(at, std::move(name));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  const AtomSignature* sig_;
  std::size_t pos_ = 0;
};

const char* comparison_text(Comparison c) {
  switch (c) {
    case Comparison::LessEq: return " <= ";
    case Comparison::GreaterEq: return " >= ";
    case Comparison::Equal: return " = ";
  }
  return "?";
}

std::string format_bound(const Bound& b) {
  if (auto i = std::get_if<std::int64_t>(&b)) return std::to_string(*i);
  return "?" + std::get<Slot>(b).name;
}

std::string format_interval(const Interval& i) {
  return "[" + format_bound(i.lo) + "," + format_bound(i.hi) + "]";
}

void format_into(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::True:
      out += "true";
      return;
    case Op::Atom: {
      const Atom& a = f.atom();
      if (a.is_numeric()) {
        out += a.name;
        out += comparison_text(*a.comparison);
        out += format_term(a.threshold);
      } else {
        out += a.key();
      }
      return;
    }
    case Op::Not:
      out += "!(";
      format_into(f.lhs(), out);
      out += ")";
      return;
    case Op::Eventually:
    case Op::Always:
      out += f.op() == Op::Eventually ? "F" : "G";
      out += format_interval(f.interval());
      out += "(";
      format_into(f.lhs(), out);
      out += ")";
      return;
    case Op::Until:
      out += "(";
      format_into(f.lhs(), out);
      out += " U";
      out += format_interval(f.interval());
      out += " ";
      format_into(f.rhs(), out);
      out += ")";
      return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
      out += "(";
      format_into(f.lhs(), out);
      out += f.op() == Op::And ? " & " : f.op() == Op::Or ? " | " : " -> ";
      format_into(f.rhs(), out);
      out += ")";
      return;
  }
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text, nullptr).parse(); }

Formula parse_formula(std::string_view text, const AtomSignature& signature) {
  return Parser(text, &signature).parse();
}

std::string format_formula(const Formula& f) {
  std::string out;
  format_into(f, out);
  return out;
}

}  // namespace stlwb::stl
