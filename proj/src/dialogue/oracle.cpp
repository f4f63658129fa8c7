#include "stlwb/dialogue/oracle.hpp"

#include <algorithm>

#include "stlwb/stl/monitor.hpp"

namespace stlwb::dialogue {

using stl::Formula;
using stl::Op;

namespace {

struct Occurrence {
  stl::Atom atom;
  bool negated;
};

void collect(const Formula& f, bool negated, std::vector<Occurrence>& out) {
  switch (f.op()) {
    case Op::True: return;
    case Op::Atom: out.push_back({f.atom(), negated}); return;
    case Op::Not: collect(f.lhs(), !negated, out); return;
    default:
      collect(f.lhs(), negated, out);
      if (f.arity() == 2) collect(f.rhs(), negated, out);
  }
}

}  // namespace

namespace {
Formula ground_only(Formula f) {
  if (!f.is_ground()) throw OracleError("the oracle needs a ground formula");
  return f;
}
}  // namespace

OracleUser::OracleUser(Formula ground_truth, const nl::PhraseLexicon& lexicon, const world::GridSpec& grid,
                       std::int64_t probe_horizon)
    : truth_(ground_only(std::move(ground_truth))), lexicon_(&lexicon), grid_(&grid), horizon_(probe_horizon), encoder_(world::encoder_for(grid, truth_)) {
}

Answer OracleUser::answer(const Question& q) {
  std::vector<Occurrence> occ;
  collect(truth_, false, occ);
  auto find = [&](const std::string& name) -> const Occurrence* {
    for (const auto& o : occ)
      if (o.atom.name == name) return &o;
    return nullptr;
  };
  switch (q.kind) {
    case QuestionKind::Paraphrase: {
      // A task with no action at all is beyond repair by one phrase.
      if (q.id.rfind("rephrase-task:", 0) == 0) return Answer::not_applicable(q.id);
      for (const auto& o : occ) {
        if (std::find(q.known_atoms.begin(), q.known_atoms.end(), o.atom.name) != q.known_atoms.end()) continue;
        if (const auto* e = lexicon_->canonical_phrase(o.atom.name, o.negated)) return Answer::paraphrase(q.id, e->phrase);
        if (const auto* e = lexicon_->canonical_phrase(o.atom.name, false)) return Answer::paraphrase(q.id, e->phrase);
      }
      return Answer::not_applicable(q.id);
    }
    case QuestionKind::TaskOrder: {
      if (!find(q.first_atom) || !find(q.second_atom))
        throw OracleError("the intended formula does not mention both " + q.first_atom + " and " + q.second_atom);
      auto cex = pstl::order_counterexample(truth_, {q.first_atom, q.second_atom}, horizon_);
      return Answer::yes(q.id, !cex.has_value());
    }
    case QuestionKind::AtomParam: {
      const Occurrence* o = find(q.atom);
      if (!o) throw OracleError("the intended formula does not mention " + q.atom);
      if (q.arg_index >= o->atom.args.size()) throw OracleError("atom " + q.atom + " has no such argument");
      return Answer::of_value(q.id, o->atom.args[q.arg_index].value());
    }
    case QuestionKind::OpParam: {
      auto nodes = stl::temporal_nodes(truth_);
      if (q.op_index == 0 || q.op_index > nodes.size()) return Answer::not_applicable(q.id);
      const auto& i = nodes[q.op_index - 1].interval();
      return Answer::interval(q.id, i.lower(), i.upper());
    }
  }
  throw OracleError("unsupported question");
}

bool OracleUser::label(const world::Demonstration& d) {
  return stl::satisfies(truth_, world::demo_to_trace(d, *grid_, encoder_), 0);
}

Answer oracle_answer(const Question& q, OracleUser& oracle) { return oracle.answer(q); }

PipelineOutcome run_pipeline(const std::string& task, const std::vector<world::LabeledDemo>& demos, Answerer& answerer,
                             Resources r, const PipelineConfig& c, const std::optional<Formula>& ground_truth) {
  Session s(r, c);
  for (const auto& d : demos) s.add_demo(d);
  s.set_task(task);
  // Each round answers one question or labels every pending demonstration.
  for (std::size_t round = 0; round < 1000; ++round) {
    if (s.status() == Status::AwaitingLabels) {
      std::map<std::string, bool> labels;
      for (const auto& l : s.pending_labels()) labels[l.id] = answerer.label(l.demo);
      s.label(labels);
      continue;
    }
    if (s.status() != Status::AwaitingAnswer) break;
    const Question q = s.pending_questions().front();
    Answer a;
    try {
      a = answerer.answer(q);
    } catch (const OracleError&) {
      a = Answer::not_applicable(q.id);
    }
    try {
      s.answer(a);
    } catch (const NotPendingError&) {
      throw;
    } catch (const DialogueError&) {
      s.answer(Answer::not_applicable(q.id));
    }
  }
  if (ground_truth) s.mark_success(s.result() && match(*s.result(), *ground_truth));
  return PipelineOutcome{s.result(), std::move(s)};
}

}  // namespace stlwb::dialogue
