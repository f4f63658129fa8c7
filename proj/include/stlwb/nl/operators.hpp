#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stlwb/stl/formula.hpp"

namespace stlwb::nl {

/// Static word-vector table: one token per line followed by its components.
class WordVectors {
 public:
  WordVectors() = default;
  explicit WordVectors(std::map<std::string, std::vector<double>> table);
  static WordVectors load(const std::string& path);

  std::size_t dimension() const { return dim_; }
  bool contains(const std::string& word) const { return table_.count(word) > 0; }
  /// Mean vector of the known words of `text`; empty when none is known.
  std::vector<double> embed(const std::string& text) const;

 private:
  std::map<std::string, std::vector<double>> table_;
  std::size_t dim_ = 0;
};

/// Connective words per operator. Every operator of the enumeration grammar
/// must be present.
class OperatorLexicon {
 public:
  explicit OperatorLexicon(std::map<stl::Op, std::vector<std::string>> words);
  /// Lines of the form "<symbol> word word ...", symbols & | ! -> G F U.
  static OperatorLexicon load(const std::string& path);

  const std::map<stl::Op, std::vector<std::string>>& words() const { return words_; }

 private:
  std::map<stl::Op, std::vector<std::string>> words_;
};

stl::Op op_from_symbol(const std::string& s);
std::string op_symbol(stl::Op op);

/// Operator whose mean word vector is closest to the vector of `word`, or
/// nothing when the word has no vector.
std::optional<stl::Op> predict_operator(const std::string& word, const OperatorLexicon& ops, const WordVectors& vecs);

/// Operators for the conjunctions and adverbs in order, then F. Duplicates
/// are dropped keeping the first occurrence.
std::vector<stl::Op> predict_operators(const std::vector<std::string>& conjunctions,
                                       const std::vector<std::string>& adverbs, const OperatorLexicon& ops,
                                       const WordVectors& vecs);

}  // namespace stlwb::nl
