#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stlwb/dialogue/session.hpp"

namespace stlwb::dialogue {

/// Answers questions and labels demonstrations. A human at a console and the
/// rule-based oracle both implement this.
class Answerer {
 public:
  virtual ~Answerer() = default;
  virtual Answer answer(const Question& q) = 0;
  virtual bool label(const world::Demonstration& d) = 0;
};

class OracleError : public DialogueError {
 public:
  using DialogueError::DialogueError;
};

/// Rule-based user that knows the intended formula.
class OracleUser : public Answerer {
 public:
  /// Throws OracleError unless `ground_truth` is ground.
  OracleUser(stl::Formula ground_truth, const nl::PhraseLexicon& lexicon, const world::GridSpec& grid,
             std::int64_t probe_horizon = 3);

  /// Throws OracleError for a question about an atom the ground truth lacks.
  Answer answer(const Question& q) override;
  /// Whether the demonstration satisfies the ground truth.
  bool label(const world::Demonstration& d) override;

  const stl::Formula& ground_truth() const { return truth_; }

 private:
  stl::Formula truth_;
  const nl::PhraseLexicon* lexicon_;
  const world::GridSpec* grid_;
  std::int64_t horizon_;
  world::StateEncoder encoder_;
};

Answer oracle_answer(const Question& q, OracleUser& oracle);

struct PipelineOutcome {
  std::optional<stl::Formula> formula;
  Session session;
};

/// Runs a full dialogue: gives the task and demonstrations to a new session
/// and lets `answerer` handle every question and label until the session is
/// done or stalls. Questions the answerer cannot handle (OracleError) are
/// answered "not applicable". With `ground_truth`, success is exact match.
PipelineOutcome run_pipeline(const std::string& task, const std::vector<world::LabeledDemo>& demos, Answerer& answerer,
                             Resources r, const PipelineConfig& c = {},
                             const std::optional<stl::Formula>& ground_truth = std::nullopt);

}  // namespace stlwb::dialogue
