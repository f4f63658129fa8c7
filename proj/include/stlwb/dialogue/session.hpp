#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "stlwb/dialogue/question.hpp"
#include "stlwb/nl/lexicon.hpp"
#include "stlwb/nl/operators.hpp"
#include "stlwb/nl/tagger.hpp"
#include "stlwb/pstl/synthesis.hpp"
#include "stlwb/world/demo.hpp"

namespace stlwb::dialogue {

/// Shared read-only inputs. All pointers must outlive every session using them.
struct Resources {
  const world::GridSpec* grid = nullptr;
  const nl::PhraseLexicon* lexicon = nullptr;
  const nl::OperatorLexicon* operators = nullptr;
  const nl::WordVectors* vectors = nullptr;
};

/// Lexicon, operator words and word vectors loaded from `<dir>/nl/`.
struct NlBundle {
  nl::PhraseLexicon lexicon;
  nl::OperatorLexicon operators;
  nl::WordVectors vectors;

  static NlBundle load(const std::string& data_dir);
  Resources resources(const world::GridSpec& g) const { return {&g, &lexicon, &operators, &vectors}; }
};

struct PipelineConfig {
  /// Phrases whose best lexicon score is at or below this are paraphrased.
  double epsilon = 0.3;
  /// Trace horizon of the ordering check behind TaskOrder answers.
  std::int64_t probe_horizon = 3;
  /// Ask for labels of delayed copies of each positive demonstration.
  bool delay_variants = true;
  std::vector<std::size_t> delay_waits{1, 3, 6, 9, 12, 20};

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

nlohmann::json to_json(const PipelineConfig& c);
PipelineConfig config_from_json(const nlohmann::json& j);

enum class Status { NeedsTask, AwaitingAnswer, NeedsDemos, AwaitingLabels, Done };

const char* status_name(Status s);

struct PhraseReading {
  std::string phrase;
  std::string replacement;  // set when the user paraphrased it
  nl::AtomPrediction prediction;
  bool dropped = false;
};

struct Exchange {
  Question question;
  Answer answer;
};

/// A delayed copy of a positive demonstration waiting for (or carrying) a
/// user label. Labels are not counted as interactions.
struct LabelRequest {
  std::string id;
  std::size_t demo_index = 0;
  world::Delay delay;
  world::Demonstration demo;
  std::optional<bool> positive;
};

struct Metrics {
  std::size_t enumerated_formulas = 0;
  std::size_t user_interactions = 0;
  double runtime_seconds = 0;
  std::optional<bool> success;
};

/// Thrown for an answer or label that nothing is waiting for.
class NotPendingError : public DialogueError {
 public:
  using DialogueError::DialogueError;
};

/// One task-specification dialogue. Every mutation is recorded in a command
/// log and the whole pipeline is recomputed from that log, so a session
/// rebuilt from its log is identical to the original.
class Session {
 public:
  explicit Session(Resources r, PipelineConfig c = {});

  /// Throws NotPendingError when a task was already given.
  void set_task(const std::string& text);
  /// Throws world::WorldError for an inconsistent demonstration.
  void add_demo(const world::LabeledDemo& d);
  /// Throws NotPendingError unless the question is pending, DialogueError
  /// when the payload does not fit.
  void answer(const Answer& a);
  void label(const std::string& request_id, bool positive);
  /// Several labels as one command.
  void label(const std::map<std::string, bool>& labels);
  void mark_success(bool ok) { success_ = ok; }

  Status status() const { return d_.status; }
  /// Questions still expected, in the order they will be needed. The first
  /// one blocks the pipeline; later ones may be answered ahead of time.
  const std::vector<Question>& pending_questions() const { return d_.plan; }
  const std::vector<LabelRequest>& label_requests() const { return d_.labels; }
  std::vector<LabelRequest> pending_labels() const;
  const std::vector<Exchange>& transcript() const { return transcript_; }

  const std::optional<std::string>& task() const { return task_; }
  const std::vector<world::LabeledDemo>& demos() const { return demos_; }
  const PipelineConfig& config() const { return config_; }

  const std::optional<nl::SplitResult>& split() const { return d_.split; }
  const std::vector<PhraseReading>& readings() const { return d_.readings; }
  const std::vector<pstl::AtomLiteral>& literals() const { return d_.literals; }
  const std::vector<stl::Op>& operators() const { return d_.ops; }
  const pstl::SynthesisBounds& bounds() const { return d_.bounds; }
  const std::vector<pstl::PstlTemplate>& enumerated() const { return d_.enumerated; }
  const std::vector<pstl::PstlTemplate>& candidates() const { return d_.survivors; }
  const std::vector<pstl::PrunedTemplate>& pruned() const { return d_.pruned; }
  const pstl::Valuation& valuation() const { return d_.valuation; }
  const std::optional<stl::Formula>& result() const { return d_.result; }
  /// Why the session ended without a formula, or what it is waiting for.
  const std::string& note() const { return d_.note; }
  Metrics metrics() const;

  /// {"version", "config", "log"}; version counts applied commands.
  nlohmann::json document() const;
  static Session replay(Resources r, const nlohmann::json& document);
  std::size_t version() const { return log_.size(); }

 private:
  struct Derived {
    Status status = Status::NeedsTask;
    std::vector<Question> plan;
    std::vector<LabelRequest> labels;
    std::optional<nl::SplitResult> split;
    std::vector<PhraseReading> readings;
    std::vector<pstl::AtomLiteral> literals;
    std::vector<stl::Op> ops;
    pstl::SynthesisBounds bounds;
    std::vector<pstl::PstlTemplate> enumerated;
    std::vector<pstl::PstlTemplate> survivors;
    std::vector<pstl::PrunedTemplate> pruned;
    pstl::Valuation valuation;
    std::set<std::string> unavailable;
    std::optional<stl::Formula> result;
    std::string note;
    double runtime = 0;
  };

  void apply(const nlohmann::json& command);
  void recompute();
  void run();
  void finish(std::optional<stl::Formula> f, std::string note);
  const Answer* answered(const Question& q) const;

  Resources res_;
  PipelineConfig config_;
  std::optional<std::string> task_;
  std::vector<world::LabeledDemo> demos_;
  std::map<std::string, Answer> answers_;
  std::map<std::string, bool> given_labels_;
  std::vector<Exchange> transcript_;
  std::vector<nlohmann::json> log_;
  std::optional<bool> success_;
  Derived d_;
};

/// Questions the session still expects.
std::vector<Question> plan_questions(const Session& s);

/// True when `f` holds at time 0 on every positive trace and on no negative one.
bool consistent(const stl::Formula& f, const std::vector<stl::Trace>& positives,
                const std::vector<stl::Trace>& negatives);

/// First candidate, in order, whose instantiation under `v` is consistent with
/// the traces. Candidates that `v` does not fully bind are skipped.
std::optional<stl::Formula> select_best_stl(const std::vector<pstl::PstlTemplate>& candidates,
                                            const pstl::Valuation& v, const std::vector<stl::Trace>& positives,
                                            const std::vector<stl::Trace>& negatives);

/// Operands of & and | put in a fixed order, recursively.
stl::Formula normalize(const stl::Formula& f);
/// Structural equality up to the order of & and | operands.
bool match(const stl::Formula& a, const stl::Formula& b);

}  // namespace stlwb::dialogue
