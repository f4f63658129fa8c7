#include "stlwb/nl/lexicon.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "stlwb/nl/tagger.hpp"
#include "stlwb/world/atoms.hpp"

namespace stlwb::nl {

namespace {

// Words that flip the polarity of a phrase. They get a shared feature so that
// "don't walk into the water" lands near other negative phrases.
bool negation_cue(const std::string& w) {
  static const std::set<std::string> cues{"not", "don't", "dont", "never", "avoid", "avoiding", "away", "no"};
  return cues.count(w) > 0;
}

constexpr double kWordWeight = 2.0;

std::vector<std::string> features(const std::string& normalized) {
  std::vector<std::string> out;
  std::istringstream words(normalized);
  std::string w;
  while (words >> w) {
    out.push_back("w:" + w);
    if (negation_cue(w)) out.push_back("neg");
    std::string padded = " " + w + " ";
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) out.push_back("c:" + padded.substr(i, 3));
  }
  return out;
}

double dot(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  double s = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) ++i;
    else if (j->first < i->first) ++j;
    else s += (i++)->second * (j++)->second;
  }
  return s;
}

}  // namespace

PhraseLexicon::PhraseLexicon(std::vector<LexiconEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw NlError("lexicon is empty");
  std::set<std::string> seen;
  std::map<std::string, int> df;
  for (auto& e : entries_) {
    e.phrase = normalize_phrase(e.phrase);
    if (e.phrase.empty()) throw NlError("lexicon entry with an empty phrase");
    if (!world::find_atom(e.atom)) throw NlError("lexicon names unknown atom '" + e.atom + "'");
    if (!seen.insert(e.phrase).second) throw NlError("phrase listed twice in lexicon: '" + e.phrase + "'");
    std::set<std::string> uniq;
    for (auto& f : features(e.phrase)) uniq.insert(std::move(f));
    for (const auto& f : uniq) ++df[f];
  }
  const double n = static_cast<double>(entries_.size());
  for (const auto& [f, d] : df) idf_[f] = std::log((1 + n) / (1 + d)) + 1;
  default_idf_ = std::log(1 + n) + 1;
  for (const auto& e : entries_) vectors_.push_back(vectorize(e.phrase));
}

PhraseLexicon::SparseVec PhraseLexicon::vectorize(const std::string& normalized) const {
  SparseVec v;
  for (const auto& f : features(normalized)) v[f] += f[0] == 'c' ? 1.0 : kWordWeight;
  double norm = 0;
  for (auto& [f, x] : v) {
    auto it = idf_.find(f);
    x *= it == idf_.end() ? default_idf_ : it->second;
    norm += x * x;
  }
  norm = std::sqrt(norm);
  if (norm > 0)
    for (auto& [f, x] : v) x /= norm;
  return v;
}

AtomPrediction PhraseLexicon::predict(const std::string& phrase) const {
  SparseVec q = vectorize(normalize_phrase(phrase));
  AtomPrediction best;
  bool have = false;
  const LexiconEntry* best_entry = nullptr;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    double s = std::min(1.0, std::max(0.0, dot(q, vectors_[i])));
    const auto& e = entries_[i];
    bool better = !have || s > best.confidence + 1e-12;
    if (!better && std::abs(s - best.confidence) <= 1e-12)
      better = std::tie(e.atom, e.negated, e.phrase) <
               std::tie(best_entry->atom, best_entry->negated, best_entry->phrase);
    if (better) {
      best = AtomPrediction{e.atom, s, e.negated, e.phrase};
      best_entry = &e;
      have = true;
    }
  }
  return best;
}

const LexiconEntry* PhraseLexicon::canonical_phrase(const std::string& atom, bool negated) const {
  for (const auto& e : entries_)
    if (e.atom == atom && e.negated == negated) return &e;
  return nullptr;
}

std::vector<LexiconEntry> PhraseLexicon::read_entries(std::istream& in) {
  std::vector<LexiconEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, '\t')) cols.push_back(c);
    if (cols.size() < 2 || cols.size() > 3)
      throw NlError("lexicon line " + std::to_string(lineno) + ": expected phrase<TAB>atom[<TAB>negated]");
    LexiconEntry e{cols[0], cols[1], false};
    if (cols.size() == 3) {
      if (cols[2] != "0" && cols[2] != "1")
        throw NlError("lexicon line " + std::to_string(lineno) + ": negation flag must be 0 or 1");
      e.negated = cols[2] == "1";
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<LexiconEntry> PhraseLexicon::load_entries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NlError("cannot open lexicon " + path);
  return read_entries(in);
}

PhraseLexicon PhraseLexicon::load(const std::string& path) { return PhraseLexicon(load_entries(path)); }

double evaluate_lexicon(const std::vector<LexiconEntry>& held_out, const PhraseLexicon& lexicon) {
  if (held_out.empty()) throw NlError("held-out set is empty");
  std::size_t hits = 0;
  for (const auto& e : held_out) {
    auto p = lexicon.predict(e.phrase);
    hits += p.atom == e.atom && p.negated == e.negated;
  }
  return static_cast<double>(hits) / static_cast<double>(held_out.size());
}

}  // namespace stlwb::nl
