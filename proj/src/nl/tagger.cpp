#include "stlwb/nl/tagger.hpp"

#include <cctype>
#include <optional>
#include <set>

namespace stlwb::nl {

namespace {

const std::set<std::string, std::less<>>& verbs() {
  static const std::set<std::string, std::less<>> v{
      "go",      "move",     "navigate", "reach",   "travel",  "head",   "visit",      "hit",       "bump",
      "walk",    "crash",    "run",      "avoid",   "stay",    "step",   "enter",      "keep",      "touch",
      "turn",    "switch",   "light",    "power",   "make",    "darken", "shut",       "start",     "ignite",
      "kindle",  "extinguish", "put",    "douse",   "stop",    "open",   "unlock",     "get",       "close",
      "lock",    "pick",     "grab",     "take",    "collect", "carry",  "fetch",      "drop",      "place",
      "leave",   "charge",   "plug",     "recharge", "unplug", "disconnect", "sit",    "have",      "rest",
      "stand",   "rise",     "remain",   "bring",   "obtain",  "lift",   "illuminate", "brighten",  "blow",
      "quench",  "seat",     "snuff",    "kill",    "set",     "drive",  "proceed",    "return",    "wade",
      "swim",    "fill",     "refuel",   "hold",    "unbolt",  "shutdown", "activate", "deactivate", "ensure",
      "steer",   "retrieve", "secure",   "acquire", "settle",  "relax",  "climb",      "cross",     "clear"};
  return v;
}

const std::set<std::string, std::less<>>& adverbs() {
  static const std::set<std::string, std::less<>> v{"always", "never", "eventually", "finally", "forever",
                                                    "constantly", "continuously", "ever", "ultimately"};
  return v;
}

const std::set<std::string, std::less<>>& conjunctions() {
  static const std::set<std::string, std::less<>> v{"and", "or", "then", "before", "until", "till",
                                                    "after", "while", "afterwards", "either"};
  return v;
}

const std::set<std::string, std::less<>>& prepositions() {
  static const std::set<std::string, std::less<>> v{"on", "off", "up", "down", "into", "in", "at", "to",
                                                    "from", "with", "of", "onto", "near", "through", "for",
                                                    "by", "out", "over", "away", "within", "toward", "towards"};
  return v;
}

const std::set<std::string, std::less<>>& adjectives() {
  static const std::set<std::string, std::less<>> v{"purple", "green", "red", "blue", "yellow", "violet",
                                                    "dark", "bright", "wet", "burning", "little", "small"};
  return v;
}

const std::set<std::string, std::less<>>& determiners() {
  static const std::set<std::string, std::less<>> v{"the", "a", "an", "this", "that", "your", "its", "my", "any"};
  return v;
}

const std::set<std::string, std::less<>>& others() {
  static const std::set<std::string, std::less<>> v{
      "do",  "does", "not",  "don't", "dont", "doesn't", "please", "you",   "yourself", "it",   "should",
      "must", "can", "could", "will", "would", "be",     "is",     "are",   "sure",     "robot", "i",
      "want", "need", "let's", "try", "also", "just",   "now",    "first", "next",     "there", "all",
      "times", "no", "so",   "as",   "well"};
  return v;
}

bool is_number(std::string_view w) {
  if (w.empty()) return false;
  for (char c : w)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// A listed verb or a regular inflection of one ("picking", "hitting", "turns").
bool verb_form(const std::string& w) {
  const auto& v = verbs();
  if (v.count(w)) return true;
  auto ends = [&](std::string_view suffix) {
    return w.size() > suffix.size() + 1 && w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  auto stem_known = [&](std::string stem) {
    if (v.count(stem) || v.count(stem + "e")) return true;
    return stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2] && v.count(stem.substr(0, stem.size() - 1));
  };
  if (ends("ing")) return stem_known(w.substr(0, w.size() - 3));
  if (ends("ed")) return stem_known(w.substr(0, w.size() - 2));
  if (ends("es") && stem_known(w.substr(0, w.size() - 2))) return true;
  if (ends("s")) return v.count(w.substr(0, w.size() - 1)) > 0;
  return false;
}

}  // namespace

const char* tag_name(Tag t) {
  switch (t) {
    case Tag::Verb: return "VERB";
    case Tag::Noun: return "NOUN";
    case Tag::Adj: return "ADJ";
    case Tag::Adv: return "ADV";
    case Tag::Conj: return "CONJ";
    case Tag::Prep: return "PREP";
    case Tag::Num: return "NUM";
    case Tag::Other: return "OTHER";
  }
  return "?";
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    // strip quote-like apostrophes at the edges
    while (!cur.empty() && cur.front() == '\'') cur.erase(cur.begin());
    while (!cur.empty() && cur.back() == '\'') cur.pop_back();
    if (!cur.empty()) out.push_back(cur);
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    // UTF-8 right single quotation mark
    if (c == 0xE2 && i + 2 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x80 &&
        static_cast<unsigned char>(text[i + 2]) == 0x99) {
      cur += '\'';
      i += 2;
    } else if (std::isalnum(c) || c == '\'') {
      cur += static_cast<char>(std::tolower(c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::string normalize_phrase(std::string_view text) {
  std::string out;
  for (const auto& w : tokenize(text)) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::vector<TaggedToken> tag_tokens(std::string_view utterance) {
  auto words = tokenize(utterance);
  if (words.empty()) throw NlError("empty utterance");
  std::vector<TaggedToken> out;
  for (const auto& w : words) {
    Tag prev = out.empty() ? Tag::Other : out.back().tag;
    bool after_det =
        !out.empty() && (determiners().count(out.back().token) || prev == Tag::Adj || prev == Tag::Num);
    Tag t;
    if (is_number(w)) t = Tag::Num;
    else if (adverbs().count(w)) t = Tag::Adv;
    else if (conjunctions().count(w)) t = Tag::Conj;
    else if (determiners().count(w) || others().count(w)) t = Tag::Other;
    else if (prepositions().count(w)) t = Tag::Prep;
    else if (adjectives().count(w)) t = Tag::Adj;
    else if (verb_form(w) && !after_det) t = Tag::Verb;
    else t = Tag::Noun;
    out.push_back(TaggedToken{w, t});
  }
  return out;
}

std::string SplitResult::phrase(std::size_t i) const {
  const Span& s = verb_phrases.at(i);
  std::string out;
  for (std::size_t k = s.begin; k < s.end; ++k) {
    if (tokens[k].tag == Tag::Adv) continue;
    if (!out.empty()) out += ' ';
    out += tokens[k].token;
  }
  return out;
}

std::vector<std::string> SplitResult::phrases() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < verb_phrases.size(); ++i) out.push_back(phrase(i));
  return out;
}

SplitResult split(const std::vector<TaggedToken>& tokens) {
  SplitResult r;
  r.tokens = tokens;
  struct Open {
    std::size_t begin;
    std::size_t end;
    bool has_verb;
  };
  std::vector<Open> spans;
  std::optional<Open> cur;
  std::string pending_conj;
  std::vector<std::string> conj_before;  // conjunction preceding each span
  auto close = [&] {
    if (!cur) return;
    spans.push_back(*cur);
    conj_before.push_back(pending_conj);
    pending_conj.clear();
    cur.reset();
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    if (tok.tag == Tag::Adv) {
      r.adverbs.push_back(tok.token);
      continue;
    }
    if (tok.tag == Tag::Conj) {
      close();
      if (!pending_conj.empty() && i > 0 && tokens[i - 1].tag == Tag::Conj) pending_conj += ' ' + tok.token;
      else pending_conj = tok.token;
      continue;
    }
    if (tok.tag == Tag::Verb && cur && cur->has_verb && tokens[cur->end - 1].tag != Tag::Verb) close();
    if (!cur) cur = Open{i, i, false};
    cur->end = i + 1;
    cur->has_verb = cur->has_verb || tok.tag == Tag::Verb;
  }
  close();
  // Fold verbless spans into a neighbour; their conjunction goes with them.
  std::vector<Open> merged;
  std::vector<std::string> merged_conj;
  for (std::size_t k = 0; k < spans.size(); ++k) {
    if (spans[k].has_verb || merged.empty()) {
      if (!merged.empty() && !merged.back().has_verb) {
        // verbless leading span: extend it into this one
        merged.back().end = spans[k].end;
        merged.back().has_verb = spans[k].has_verb;
        continue;
      }
      merged.push_back(spans[k]);
      merged_conj.push_back(conj_before[k]);
    } else {
      merged.back().end = spans[k].end;
    }
  }
  if (merged.empty() || !merged.back().has_verb)
    throw NlError("no verb found; please paraphrase the task");
  for (std::size_t k = 0; k < merged.size(); ++k) {
    r.verb_phrases.push_back(Span{merged[k].begin, merged[k].end});
    if (k > 0 && !merged_conj[k].empty()) r.conjunctions.push_back(merged_conj[k]);
  }
  // conjunctions ahead of the first phrase or after the last one still count
  if (!merged_conj.empty() && !merged_conj[0].empty()) r.conjunctions.insert(r.conjunctions.begin(), merged_conj[0]);
  if (!pending_conj.empty()) r.conjunctions.push_back(pending_conj);
  return r;
}

}  // namespace stlwb::nl
