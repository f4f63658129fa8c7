#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "stlwb/stl/formula.hpp"

namespace stlwb::dialogue {

enum class QuestionKind { Paraphrase, TaskOrder, AtomParam, OpParam };

const char* kind_name(QuestionKind k);

/// A clarification question. Ids are derived from the content, so the same
/// question asked again after a replay has the same id.
struct Question {
  std::string id;
  QuestionKind kind = QuestionKind::Paraphrase;
  std::string prompt;

  // Paraphrase: the phrase (or whole task text) that was not understood, and
  // the atoms already recognized elsewhere in the task.
  std::string phrase;
  std::vector<std::string> known_atoms;
  // TaskOrder
  std::string first_atom;
  std::string second_atom;
  // AtomParam
  std::string atom;
  std::string slot;
  stl::SlotKind slot_kind = stl::SlotKind::Coordinate;
  std::size_t arg_index = 0;
  // OpParam: 1-based position of the temporal operator in preorder
  std::size_t op_index = 0;

  static Question paraphrase(const std::string& phrase, bool whole_task, std::vector<std::string> known_atoms);
  static Question task_order(const std::string& first_atom, const std::string& first_phrase,
                             const std::string& second_atom, const std::string& second_phrase);
  static Question atom_param(const std::string& atom, const std::string& param, std::size_t arg_index,
                             stl::SlotKind kind);
  static Question op_param(std::size_t k);
};

enum class AnswerKind { Yes, No, Value, Interval, Phrase, NotApplicable };

const char* kind_name(AnswerKind k);

struct Answer {
  std::string question_id;
  AnswerKind kind = AnswerKind::NotApplicable;
  stl::Value value;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::string phrase;

  static Answer yes(std::string id, bool y);
  static Answer of_value(std::string id, stl::Value v);
  static Answer interval(std::string id, std::int64_t lo, std::int64_t hi);
  static Answer paraphrase(std::string id, std::string phrase);
  static Answer not_applicable(std::string id);

  std::string describe() const;
};

class DialogueError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws DialogueError when the answer's payload cannot answer `q`.
void check_answer(const Question& q, const Answer& a);

/// Reads a free-text reply ("yes", "15", "15 seconds", "[0, 15]", "purple
/// cube", "n/a", or a replacement phrase) as an answer to `q`.
Answer parse_answer(const Question& q, const std::string& reply);

nlohmann::json to_json(const Question& q);
nlohmann::json to_json(const Answer& a);
/// {"questionId", "yes"|"value"|"interval"|"phrase"|"notApplicable"}.
Answer answer_from_json(const nlohmann::json& j);

}  // namespace stlwb::dialogue
