#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

namespace stlwb::nl {

struct LexiconEntry {
  std::string phrase;  // normalized
  std::string atom;    // atom family name from the world registry
  bool negated = false;
  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

struct AtomPrediction {
  std::string atom;
  double confidence = 0;
  bool negated = false;
  std::string matched;  // lexicon phrase with the best score
};

/// Phrase -> atom lexicon with a TF-IDF index over word unigrams and
/// character trigrams. Immutable once built.
class PhraseLexicon {
 public:
  /// Throws NlError on an empty list, an atom the world does not know, or the
  /// same phrase listed twice.
  explicit PhraseLexicon(std::vector<LexiconEntry> entries);

  /// Tab-separated lines: phrase, atom, and an optional 0/1 negation flag.
  /// '#' starts a comment line.
  static std::vector<LexiconEntry> read_entries(std::istream& in);
  static std::vector<LexiconEntry> load_entries(const std::string& path);
  static PhraseLexicon load(const std::string& path);

  const std::vector<LexiconEntry>& entries() const { return entries_; }

  /// Best entry by cosine similarity. Equal scores go to the smaller atom name.
  AtomPrediction predict(const std::string& phrase) const;

  /// First entry for `atom` with the given polarity, if any.
  const LexiconEntry* canonical_phrase(const std::string& atom, bool negated) const;

 private:
  using SparseVec = std::map<std::string, double>;
  SparseVec vectorize(const std::string& normalized) const;

  std::vector<LexiconEntry> entries_;
  std::map<std::string, double> idf_;
  double default_idf_ = 1;
  std::vector<SparseVec> vectors_;
};

/// Fraction of held-out phrases whose atom and polarity are both predicted
/// correctly. Throws NlError when `held_out` is empty.
double evaluate_lexicon(const std::vector<LexiconEntry>& held_out, const PhraseLexicon& lexicon);

}  // namespace stlwb::nl
