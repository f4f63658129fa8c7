#include "stlwb/dialogue/question.hpp"

#include <regex>

#include "stlwb/nl/params.hpp"
#include "stlwb/nl/tagger.hpp"
#include "stlwb/pstl/template.hpp"
#include "stlwb/world/grid.hpp"

namespace stlwb::dialogue {

namespace {

std::string ordinal(std::size_t k) {
  static const char* words[] = {"first", "second", "third", "fourth", "fifth"};
  return k >= 1 && k <= 5 ? words[k - 1] : std::to_string(k) + "th";
}

}  // namespace

const char* kind_name(QuestionKind k) {
  switch (k) {
    case QuestionKind::Paraphrase: return "paraphrase";
    case QuestionKind::TaskOrder: return "taskOrder";
    case QuestionKind::AtomParam: return "atomParam";
    case QuestionKind::OpParam: return "opParam";
  }
  return "?";
}

const char* kind_name(AnswerKind k) {
  switch (k) {
    case AnswerKind::Yes: return "yes";
    case AnswerKind::No: return "no";
    case AnswerKind::Value: return "value";
    case AnswerKind::Interval: return "interval";
    case AnswerKind::Phrase: return "phrase";
    case AnswerKind::NotApplicable: return "notApplicable";
  }
  return "?";
}

Question Question::paraphrase(const std::string& phrase, bool whole_task, std::vector<std::string> known_atoms) {
  Question q;
  q.kind = QuestionKind::Paraphrase;
  q.id = (whole_task ? "rephrase-task:" : "rephrase:") + phrase;
  q.phrase = phrase;
  q.known_atoms = std::move(known_atoms);
  q.prompt = whole_task ? "I could not find an action in \"" + phrase + "\". Could you describe the task differently?"
                        : "I am not sure what \"" + phrase + "\" means here. Could you say it another way?";
  return q;
}

Question Question::task_order(const std::string& first_atom, const std::string& first_phrase,
                              const std::string& second_atom, const std::string& second_phrase) {
  Question q;
  q.kind = QuestionKind::TaskOrder;
  q.id = "order:" + first_atom + ":" + second_atom;
  q.first_atom = first_atom;
  q.second_atom = second_atom;
  q.prompt = "Does \"" + first_phrase + "\" have to happen before \"" + second_phrase + "\"? (yes/no)";
  return q;
}

Question Question::atom_param(const std::string& atom, const std::string& param, std::size_t arg_index,
                              stl::SlotKind kind) {
  Question q;
  q.kind = QuestionKind::AtomParam;
  q.atom = atom;
  q.slot = pstl::atom_slot_name(atom, param);
  q.id = "param:" + q.slot;
  q.slot_kind = kind;
  q.arg_index = arg_index;
  q.prompt = param == "item" ? "Which item do you mean?"
                             : "What is the " + param + " coordinate of the location you have in mind?";
  return q;
}

Question Question::op_param(std::size_t k) {
  Question q;
  q.kind = QuestionKind::OpParam;
  q.op_index = k;
  q.id = "interval:" + std::to_string(k);
  q.prompt = k == 1 ? "How many seconds does the robot have to get the task done?"
                    : "How many seconds are allowed for the " + ordinal(k) + " timed part of the task?";
  return q;
}

Answer Answer::yes(std::string id, bool y) {
  Answer a;
  a.question_id = std::move(id);
  a.kind = y ? AnswerKind::Yes : AnswerKind::No;
  return a;
}

Answer Answer::of_value(std::string id, stl::Value v) {
  Answer a;
  a.question_id = std::move(id);
  a.kind = AnswerKind::Value;
  a.value = std::move(v);
  return a;
}

Answer Answer::interval(std::string id, std::int64_t lo, std::int64_t hi) {
  Answer a;
  a.question_id = std::move(id);
  a.kind = AnswerKind::Interval;
  a.lo = lo;
  a.hi = hi;
  return a;
}

Answer Answer::paraphrase(std::string id, std::string phrase) {
  Answer a;
  a.question_id = std::move(id);
  a.kind = AnswerKind::Phrase;
  a.phrase = std::move(phrase);
  return a;
}

Answer Answer::not_applicable(std::string id) {
  Answer a;
  a.question_id = std::move(id);
  a.kind = AnswerKind::NotApplicable;
  return a;
}

std::string Answer::describe() const {
  switch (kind) {
    case AnswerKind::Yes: return "yes";
    case AnswerKind::No: return "no";
    case AnswerKind::Value: return stl::format_value(value);
    case AnswerKind::Interval: return "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
    case AnswerKind::Phrase: return "\"" + phrase + "\"";
    case AnswerKind::NotApplicable: return "n/a";
  }
  return "?";
}

void check_answer(const Question& q, const Answer& a) {
  auto bad = [&](const std::string& why) {
    throw DialogueError("answer " + a.describe() + " does not fit question " + q.id + ": " + why);
  };
  if (a.question_id != q.id) bad("question id mismatch");
  if (a.kind == AnswerKind::NotApplicable) return;
  switch (q.kind) {
    case QuestionKind::Paraphrase:
      if (a.kind != AnswerKind::Phrase) bad("expected a phrase");
      if (nl::normalize_phrase(a.phrase).empty()) bad("the phrase is empty");
      return;
    case QuestionKind::TaskOrder:
      if (a.kind != AnswerKind::Yes && a.kind != AnswerKind::No) bad("expected yes or no");
      return;
    case QuestionKind::AtomParam:
      if (a.kind != AnswerKind::Value) bad("expected a value");
      if (q.slot_kind == stl::SlotKind::ItemName) {
        auto s = std::get_if<std::string>(&a.value);
        if (!s) bad("expected an item name");
        if (!world::item_from_name(*s)) bad("unknown item '" + *s + "'");
      } else {
        auto i = std::get_if<std::int64_t>(&a.value);
        if (!i || *i < 0) bad("expected a non-negative integer");
      }
      return;
    case QuestionKind::OpParam:
      if (a.kind != AnswerKind::Interval) bad("expected an interval");
      if (a.lo != 0) bad("only windows starting at 0 are supported");
      if (a.hi < a.lo) bad("empty interval");
      return;
  }
}

Answer parse_answer(const Question& q, const std::string& reply) {
  const std::string norm = nl::normalize_phrase(reply);
  if (norm == "n a" || norm == "na" || norm == "not applicable" || norm == "skip")
    return Answer::not_applicable(q.id);
  switch (q.kind) {
    case QuestionKind::Paraphrase:
      return Answer::paraphrase(q.id, reply);
    case QuestionKind::TaskOrder:
      if (norm == "yes" || norm == "y" || norm == "yeah" || norm == "sure") return Answer::yes(q.id, true);
      if (norm == "no" || norm == "n" || norm == "nope") return Answer::yes(q.id, false);
      throw DialogueError("please answer yes or no");
    case QuestionKind::AtomParam: {
      if (q.slot_kind == stl::SlotKind::ItemName) {
        auto it = nl::find_item(reply);
        if (!it) it = world::item_from_name(reply);
        if (!it) throw DialogueError("unknown item '" + reply + "'");
        return Answer::of_value(q.id, std::string(world::item_name(*it)));
      }
      static const std::regex num(R"(^\s*(\d+)\s*$)");
      std::smatch m;
      if (!std::regex_match(reply, m, num)) throw DialogueError("please answer with a whole number");
      return Answer::of_value(q.id, std::int64_t{std::stoll(m[1].str())});
    }
    case QuestionKind::OpParam: {
      static const std::regex window(R"(^\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*$)");
      static const std::regex secs(R"(^\s*(\d+)\s*(?:s|sec|secs|second|seconds|steps?)?\s*$)");
      std::smatch m;
      if (std::regex_match(reply, m, window))
        return Answer::interval(q.id, std::stoll(m[1].str()), std::stoll(m[2].str()));
      if (std::regex_match(reply, m, secs)) return Answer::interval(q.id, 0, std::stoll(m[1].str()));
      throw DialogueError("please answer with a number of seconds");
    }
  }
  throw DialogueError("unsupported question");
}

nlohmann::json to_json(const Question& q) {
  nlohmann::json j{{"id", q.id}, {"kind", kind_name(q.kind)}, {"prompt", q.prompt}};
  switch (q.kind) {
    case QuestionKind::Paraphrase: j["phrase"] = q.phrase; break;
    case QuestionKind::TaskOrder: j["atoms"] = {q.first_atom, q.second_atom}; break;
    case QuestionKind::AtomParam:
      j["atom"] = q.atom;
      j["slot"] = q.slot;
      break;
    case QuestionKind::OpParam: j["operator"] = q.op_index; break;
  }
  return j;
}

namespace {

nlohmann::json value_json(const stl::Value& v) {
  return std::visit([](const auto& x) { return nlohmann::json(x); }, v);
}

}  // namespace

nlohmann::json to_json(const Answer& a) {
  nlohmann::json j{{"questionId", a.question_id}};
  switch (a.kind) {
    case AnswerKind::Yes: j["yes"] = true; break;
    case AnswerKind::No: j["yes"] = false; break;
    case AnswerKind::Value: j["value"] = value_json(a.value); break;
    case AnswerKind::Interval: j["interval"] = {a.lo, a.hi}; break;
    case AnswerKind::Phrase: j["phrase"] = a.phrase; break;
    case AnswerKind::NotApplicable: j["notApplicable"] = true; break;
  }
  return j;
}

Answer answer_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("questionId") || !j["questionId"].is_string())
    throw DialogueError("answer needs a string questionId");
  std::string id = j["questionId"];
  try {
    if (j.contains("yes")) return Answer::yes(id, j["yes"].get<bool>());
    if (j.contains("phrase")) return Answer::paraphrase(id, j["phrase"].get<std::string>());
    if (j.contains("interval")) {
      const auto& iv = j["interval"];
      if (!iv.is_array() || iv.size() != 2) throw DialogueError("interval must be [lo, hi]");
      return Answer::interval(id, iv[0].get<std::int64_t>(), iv[1].get<std::int64_t>());
    }
    if (j.contains("seconds")) return Answer::interval(id, 0, j["seconds"].get<std::int64_t>());
    if (j.contains("value")) {
      const auto& v = j["value"];
      if (v.is_number_integer()) return Answer::of_value(id, v.get<std::int64_t>());
      if (v.is_number()) return Answer::of_value(id, v.get<double>());
      if (v.is_string()) return Answer::of_value(id, v.get<std::string>());
      throw DialogueError("value must be a number or a string");
    }
    if (j.value("notApplicable", false)) return Answer::not_applicable(id);
  } catch (const nlohmann::json::exception& e) {
    throw DialogueError(std::string("malformed answer: ") + e.what());
  }
  throw DialogueError("answer carries no payload");
}

}  // namespace stlwb::dialogue
