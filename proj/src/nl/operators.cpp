#include "stlwb/nl/operators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "stlwb/nl/tagger.hpp"

namespace stlwb::nl {

using stl::Op;

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0 || bb == 0) return 0;
  return ab / std::sqrt(aa * bb);
}

const std::vector<Op> kGrammarOps{Op::And, Op::Or, Op::Not, Op::Implies, Op::Always, Op::Eventually, Op::Until};

}  // namespace

WordVectors::WordVectors(std::map<std::string, std::vector<double>> table) : table_(std::move(table)) {
  for (const auto& [w, v] : table_) {
    if (dim_ == 0) dim_ = v.size();
    if (v.size() != dim_ || dim_ == 0) throw NlError("word vector for '" + w + "' has the wrong width");
  }
}

WordVectors WordVectors::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NlError("cannot open word vectors " + path);
  std::map<std::string, std::vector<double>> table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string w;
    ls >> w;
    std::vector<double> v;
    double x;
    while (ls >> x) v.push_back(x);
    if (!ls.eof()) throw NlError("bad number in word vector line for '" + w + "'");
    table[w] = std::move(v);
  }
  return WordVectors(std::move(table));
}

std::vector<double> WordVectors::embed(const std::string& text) const {
  std::vector<double> sum;
  int n = 0;
  for (const auto& w : tokenize(text)) {
    auto it = table_.find(w);
    if (it == table_.end()) continue;
    if (sum.empty()) sum.assign(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) sum[i] += it->second[i];
    ++n;
  }
  for (auto& x : sum) x /= n;
  return sum;
}

Op op_from_symbol(const std::string& s) {
  if (s == "&") return Op::And;
  if (s == "|") return Op::Or;
  if (s == "!") return Op::Not;
  if (s == "->") return Op::Implies;
  if (s == "G") return Op::Always;
  if (s == "F") return Op::Eventually;
  if (s == "U") return Op::Until;
  throw NlError("unknown operator symbol '" + s + "'");
}

std::string op_symbol(Op op) {
  switch (op) {
    case Op::And: return "&";
    case Op::Or: return "|";
    case Op::Not: return "!";
    case Op::Implies: return "->";
    case Op::Always: return "G";
    case Op::Eventually: return "F";
    case Op::Until: return "U";
    default: return "?";
  }
}

OperatorLexicon::OperatorLexicon(std::map<Op, std::vector<std::string>> words) : words_(std::move(words)) {
  for (Op op : kGrammarOps)
    if (words_[op].empty()) throw NlError("operator lexicon has no words for " + op_symbol(op));
}

OperatorLexicon OperatorLexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NlError("cannot open operator lexicon " + path);
  std::map<Op, std::vector<std::string>> words;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string sym, w;
    ls >> sym;
    Op op = op_from_symbol(sym);
    while (ls >> w) words[op].push_back(w);
  }
  return OperatorLexicon(std::move(words));
}

std::optional<Op> predict_operator(const std::string& word, const OperatorLexicon& ops, const WordVectors& vecs) {
  auto v = vecs.embed(word);
  if (v.empty()) return std::nullopt;
  std::optional<Op> best;
  double best_score = -2;
  for (const auto& [op, words] : ops.words()) {
    std::vector<double> mean(vecs.dimension(), 0.0);
    int n = 0;
    for (const auto& w : words) {
      auto e = vecs.embed(w);
      if (e.empty()) continue;
      for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += e[i];
      ++n;
    }
    if (n == 0) continue;
    double s = cosine(v, mean);
    if (s > best_score + 1e-12) {
      best_score = s;
      best = op;
    }
  }
  return best;
}

std::vector<Op> predict_operators(const std::vector<std::string>& conjunctions, const std::vector<std::string>& adverbs,
                                  const OperatorLexicon& ops, const WordVectors& vecs) {
  std::vector<Op> out;
  auto add = [&](Op op) {
    if (std::find(out.begin(), out.end(), op) == out.end()) out.push_back(op);
  };
  for (const auto* list : {&conjunctions, &adverbs})
    for (const auto& w : *list)
      if (auto op = predict_operator(w, ops, vecs)) add(*op);
  add(Op::Eventually);
  return out;
}

}  // namespace stlwb::nl
