#include <doctest.h>

#include <algorithm>
#include <random>

#include "stlwb/nl/lexicon.hpp"
#include "stlwb/nl/operators.hpp"
#include "stlwb/nl/params.hpp"
#include "stlwb/nl/tagger.hpp"

using namespace stlwb::nl;
using stlwb::stl::Op;

namespace {

const std::string kData = STLWB_DATA_DIR;

const PhraseLexicon& lexicon() {
  static const PhraseLexicon lex = PhraseLexicon::load(kData + "/nl/lexicon.tsv");
  return lex;
}

const OperatorLexicon& op_lexicon() {
  static const OperatorLexicon ops = OperatorLexicon::load(kData + "/nl/operator_words.txt");
  return ops;
}

const WordVectors& vectors() {
  static const WordVectors v = WordVectors::load(kData + "/nl/word_vectors.txt");
  return v;
}

std::vector<Tag> tags_of(const std::string& s) {
  std::vector<Tag> out;
  for (const auto& t : tag_tokens(s)) out.push_back(t.tag);
  return out;
}

}  // namespace

TEST_CASE("tagging") {
  CHECK(tags_of("turn on the lamp") == std::vector<Tag>{Tag::Verb, Tag::Prep, Tag::Other, Tag::Noun});
  CHECK(tags_of("always avoid water") == std::vector<Tag>{Tag::Adv, Tag::Verb, Tag::Noun});
  CHECK(tags_of("switch on the light").back() == Tag::Noun);
  CHECK(tags_of("picking up")[0] == Tag::Verb);
  CHECK(tags_of("hitting")[0] == Tag::Verb);
  CHECK(tags_of("within 15 steps").back() == Tag::Noun);
  CHECK_THROWS_AS(tag_tokens(""), NlError);
  CHECK_THROWS_AS(tag_tokens(" ,. "), NlError);
  CHECK(tokenize("Go to location (7, 4).") == std::vector<std::string>{"go", "to", "location", "7", "4"});
  CHECK(tokenize("Don\xE2\x80\x99t") == std::vector<std::string>{"don't"});
}

TEST_CASE("splitting into verb phrases") {
  auto r = split(tag_tokens("turn on the lamp and pick up the cube"));
  CHECK(r.phrases() == std::vector<std::string>{"turn on the lamp", "pick up the cube"});
  CHECK(r.conjunctions == std::vector<std::string>{"and"});
  CHECK(r.adverbs.empty());

  r = split(tag_tokens("Always don't hit into walls."));
  CHECK(r.phrases() == std::vector<std::string>{"don't hit into walls"});
  CHECK(r.conjunctions.empty());
  CHECK(r.adverbs == std::vector<std::string>{"always"});

  r = split(tag_tokens("Open the door and then charge yourself."));
  CHECK(r.phrases() == std::vector<std::string>{"open the door", "charge yourself"});
  CHECK(r.conjunctions == std::vector<std::string>{"and then"});

  r = split(tag_tokens("avoid hitting walls"));
  CHECK(r.phrases().size() == 1);
  r = split(tag_tokens("turn on the lamp pick up the cube"));
  CHECK(r.phrases().size() == 2);

  CHECK_THROWS_AS(split(tag_tokens("the lamp")), NlError);
  CHECK_THROWS_AS(split(tag_tokens("flarb the wug")), NlError);
}

TEST_CASE("spans are ordered, disjoint, contain a verb, and cover the input") {
  for (const char* s : {"turn on the lamp before picking up the purple cube", "always do not walk into water",
                        "sit on the chair or pick up the purple cube", "go to location (7, 4) and pick up the green cube",
                        "please pick up the cube and the key then go charge"}) {
    CAPTURE(s);
    auto r = split(tag_tokens(s));
    std::size_t pos = 0;
    std::size_t covered = 0;
    for (const auto& sp : r.verb_phrases) {
      CHECK(sp.begin >= pos);
      CHECK(sp.end > sp.begin);
      CHECK(std::any_of(r.tokens.begin() + static_cast<long>(sp.begin), r.tokens.begin() + static_cast<long>(sp.end),
                        [](const TaggedToken& t) { return t.tag == Tag::Verb; }));
      covered += sp.end - sp.begin;
      pos = sp.end;
    }
    std::size_t removed = 0;
    for (std::size_t i = 0; i < r.tokens.size(); ++i) {
      bool inside = std::any_of(r.verb_phrases.begin(), r.verb_phrases.end(),
                                [&](const Span& sp) { return i >= sp.begin && i < sp.end; });
      if (!inside) {
        CHECK((r.tokens[i].tag == Tag::Conj || r.tokens[i].tag == Tag::Adv));
        ++removed;
      }
    }
    CHECK(covered + removed == r.tokens.size());
  }
}

TEST_CASE("atom prediction") {
  auto p = lexicon().predict("extinguish the fire");
  CHECK(p.atom == "fireOff");
  CHECK(p.confidence > 0.9);
  p = lexicon().predict("turn on the lamp");
  CHECK(p.atom == "lampOn");
  CHECK(p.confidence == doctest::Approx(1.0).epsilon(1e-9));
  p = lexicon().predict("don't hit into walls");
  CHECK(p.atom == "robotAtWall");
  CHECK(p.negated);
  CHECK(lexicon().predict("flarb the wug").confidence <= 0.3);
  CHECK(lexicon().entries().size() >= 81);
}

TEST_CASE("every lexicon phrase predicts its own label with confidence one") {
  for (const auto& e : lexicon().entries()) {
    CAPTURE(e.phrase);
    auto p = lexicon().predict(e.phrase);
    CHECK(p.atom == e.atom);
    CHECK(p.negated == e.negated);
    CHECK(std::abs(p.confidence - 1.0) <= 1e-9);
  }
}

TEST_CASE("the lexicon covers all fifteen atoms") {
  std::set<std::string> atoms;
  for (const auto& e : lexicon().entries()) atoms.insert(e.atom);
  CHECK(atoms.size() == 15);
}

TEST_CASE("prediction does not depend on lexicon order") {
  auto entries = lexicon().entries();
  std::mt19937 rng(5);
  std::shuffle(entries.begin(), entries.end(), rng);
  PhraseLexicon shuffled(entries);
  for (const char* q : {"go charge", "grab the green block", "stay far from walls", "flarb", "light it", "sit"}) {
    auto a = lexicon().predict(q);
    auto b = shuffled.predict(q);
    CHECK(a.atom == b.atom);
    CHECK(a.negated == b.negated);
    CHECK(a.confidence == doctest::Approx(b.confidence).epsilon(1e-12));
  }
}

TEST_CASE("lexicon file errors") {
  CHECK_THROWS_AS(PhraseLexicon({}), NlError);
  CHECK_THROWS_AS(PhraseLexicon({{"fly away", "robotFlying", false}}), NlError);
  CHECK_THROWS_AS(PhraseLexicon({{"Open the door", "doorOpen", false}, {"open the door", "doorOpen", false}}),
                  NlError);
  std::istringstream bad("open the door\tdoorOpen\tyes\n");
  CHECK_THROWS_AS(PhraseLexicon::read_entries(bad), NlError);
  std::istringstream ok("# c\n\nopen the door\tdoorOpen\nclose it\tdoorClosed\t0\n");
  CHECK(PhraseLexicon::read_entries(ok).size() == 2);
}

TEST_CASE("held-out evaluation") {
  auto held = PhraseLexicon::load_entries(kData + "/nl/lexicon_heldout.tsv");
  for (const auto& h : held)
    for (const auto& e : lexicon().entries()) REQUIRE(h.phrase != e.phrase);
  for (const auto& h : held) {
    auto p = lexicon().predict(h.phrase);
    if (p.atom != h.atom || p.negated != h.negated)
      MESSAGE("miss: '" << h.phrase << "' -> " << p.atom << std::string(p.negated ? " (negated)" : "") << " via '" << p.matched
                        << "'");
  }
  double acc = evaluate_lexicon(held, lexicon());
  MESSAGE("held-out accuracy " << acc);
  CHECK(acc >= 0.85);
  CHECK(evaluate_lexicon(lexicon().entries(), lexicon()) == 1.0);
  std::vector<LexiconEntry> junk{{"qqq zzz", "lampOn", false}, {"blorp", "fireOn", false}, {"xyzzy", "doorOpen", false}};
  CHECK_NOTHROW(evaluate_lexicon(junk, lexicon()));
  CHECK_THROWS_AS(evaluate_lexicon({}, lexicon()), NlError);
}

TEST_CASE("operator prediction") {
  CHECK(predict_operators({"and"}, {}, op_lexicon(), vectors()) == std::vector<Op>{Op::And, Op::Eventually});
  CHECK(predict_operators({}, {"always"}, op_lexicon(), vectors()) == std::vector<Op>{Op::Always, Op::Eventually});
  CHECK(predict_operators({}, {}, op_lexicon(), vectors()) == std::vector<Op>{Op::Eventually});
  CHECK(predict_operators({"before"}, {}, op_lexicon(), vectors()) == std::vector<Op>{Op::Until, Op::Eventually});
  CHECK(predict_operators({"or"}, {}, op_lexicon(), vectors()) == std::vector<Op>{Op::Or, Op::Eventually});
  CHECK(predict_operators({"and then"}, {}, op_lexicon(), vectors()) == std::vector<Op>{Op::And, Op::Eventually});
  CHECK(predict_operators({}, {"never"}, op_lexicon(), vectors()) == std::vector<Op>{Op::Always, Op::Eventually});
  CHECK(predict_operators({}, {"eventually"}, op_lexicon(), vectors()) == std::vector<Op>{Op::Eventually});
  CHECK(predict_operators({"and", "and"}, {"zorp"}, op_lexicon(), vectors()) ==
        std::vector<Op>{Op::And, Op::Eventually});
}

TEST_CASE("every operator word maps back to its operator") {
  for (const auto& [op, words] : op_lexicon().words())
    for (const auto& w : words) {
      CAPTURE(w);
      auto got = predict_operator(w, op_lexicon(), vectors());
      REQUIRE(got);
      CHECK(op_symbol(*got) == op_symbol(op));
    }
}

TEST_CASE("parameter extraction") {
  auto v = extract_parameters("Go to location (7, 4) and pick up the green cube.", "robotAt");
  CHECK(v.size() == 2);
  CHECK(v.at("robotAt.x") == stlwb::stl::Value{std::int64_t{7}});
  CHECK(v.at("robotAt.y") == stlwb::stl::Value{std::int64_t{4}});
  v = extract_parameters("pick up the purple cube", "itemOnRobot");
  CHECK(v.at("itemOnRobot.item") == stlwb::stl::Value{std::string("purpleCube")});
  CHECK(extract_parameters("open the door", 1).empty());
  CHECK(extract_parameters("pick up the cube", "itemOnRobot").empty());
  CHECK(extract_parameters("grab the door key", "itemOnRobot").at("itemOnRobot.item") ==
        stlwb::stl::Value{std::string("doorKey")});
  v = extract_parameters("put the green block at (2, 3)", "itemAt");
  CHECK(v.size() == 3);
  v = extract_parameters("open the door within 10 seconds and charge in 15 seconds", 2);
  CHECK(v.at("t2") == stlwb::stl::Value{std::int64_t{15}});
  CHECK(extract_parameters("open the door within 10 seconds", 2).empty());
  CHECK(extract_parameters("turn on the lamp", "lampOn").empty());
  CHECK(extract_parameters("turn on the lamp", "noSuchAtom").empty());
}

TEST_CASE("extracted values occur in the text") {
  const char* texts[] = {"Go to (3, 5) then pick up the violet cube within 12 seconds",
                         "fetch the key in 4 steps", "move to cell (0, 0)", "collect the green box"};
  for (const char* t : texts) {
    std::string norm = normalize_phrase(t);
    for (const char* atom : {"robotAt", "itemOnRobot", "itemAt"})
      for (const auto& [slot, val] : extract_parameters(t, atom)) {
        if (auto i = std::get_if<std::int64_t>(&val)) CHECK(norm.find(std::to_string(*i)) != std::string::npos);
        if (auto s = std::get_if<std::string>(&val)) CHECK(find_item(t).has_value());
      }
    for (std::size_t k = 1; k <= 2; ++k)
      for (const auto& [slot, val] : extract_parameters(t, k))
        CHECK(norm.find(std::to_string(std::get<std::int64_t>(val))) != std::string::npos);
  }
}
