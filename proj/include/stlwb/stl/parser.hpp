#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stlwb/stl/formula.hpp"

namespace stlwb::stl {

/// Syntax or validation failure, with the byte offset where it was detected.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Known atom names and the kinds of their arguments. Numeric signals are
/// listed separately; they take no arguments.
struct AtomSignature {
  std::map<std::string, std::vector<SlotKind>> atoms;
  std::vector<std::string> signals;

  bool has_atom(const std::string& name) const { return atoms.count(name) != 0; }
  bool has_signal(const std::string& name) const;
};

/// Parses the concrete syntax
///
///   formula := "true" | atom | "!" "(" formula ")"
///            | "(" formula op formula ")"
///            | ("F" | "G") "[" bound "," bound "]" "(" formula ")"
///            | "(" formula "U" "[" bound "," bound "]" formula ")"
///   op      := "&" | "|" | "->"
///   atom    := ident [ "(" term {"," term} ")" ] | ident cmp (number | slot)
///   cmp     := "<=" | ">=" | "="
///   bound   := int | slot ;   term := int | real | ident | slot ;   slot := "?" ident
///
/// A redundant pair of parentheses around a formula is accepted.
Formula parse_formula(std::string_view text);

/// As above, and additionally rejects atoms not in `signature` or with the
/// wrong number of arguments.
Formula parse_formula(std::string_view text, const AtomSignature& signature);

/// Canonical, fully parenthesized rendering; inverse of parse_formula.
std::string format_formula(const Formula& f);

}  // namespace stlwb::stl
