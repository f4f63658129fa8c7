#include "stlwb/dialogue/session.hpp"

#include <algorithm>
#include <chrono>

#include "stlwb/nl/params.hpp"
#include "stlwb/stl/monitor.hpp"
#include "stlwb/stl/parser.hpp"

namespace stlwb::dialogue {

using pstl::PstlTemplate;
using stl::Formula;
using stl::Op;

NlBundle NlBundle::load(const std::string& data_dir) {
  return NlBundle{nl::PhraseLexicon::load(data_dir + "/nl/lexicon.tsv"),
                  nl::OperatorLexicon::load(data_dir + "/nl/operator_words.txt"),
                  nl::WordVectors::load(data_dir + "/nl/word_vectors.txt")};
}

nlohmann::json to_json(const PipelineConfig& c) {
  return {{"epsilon", c.epsilon},
          {"probeHorizon", c.probe_horizon},
          {"delayVariants", c.delay_variants},
          {"delayWaits", c.delay_waits}};
}

PipelineConfig config_from_json(const nlohmann::json& j) {
  PipelineConfig c;
  try {
    c.epsilon = j.value("epsilon", c.epsilon);
    c.probe_horizon = j.value("probeHorizon", c.probe_horizon);
    c.delay_variants = j.value("delayVariants", c.delay_variants);
    if (j.contains("delayWaits")) c.delay_waits = j["delayWaits"].get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw DialogueError(std::string("bad pipeline config: ") + e.what());
  }
  if (c.epsilon < 0 || c.epsilon > 1) throw DialogueError("epsilon must lie in [0, 1]");
  if (c.probe_horizon < 1) throw DialogueError("probe horizon must be at least 1");
  for (auto w : c.delay_waits)
    if (w == 0) throw DialogueError("delay wait counts must be positive");
  return c;
}

const char* status_name(Status s) {
  switch (s) {
    case Status::NeedsTask: return "needsTask";
    case Status::AwaitingAnswer: return "awaitingAnswer";
    case Status::NeedsDemos: return "needsDemos";
    case Status::AwaitingLabels: return "awaitingLabels";
    case Status::Done: return "done";
  }
  return "?";
}

bool consistent(const Formula& f, const std::vector<stl::Trace>& positives, const std::vector<stl::Trace>& negatives) {
  for (const auto& t : positives)
    if (!stl::satisfies(f, t, 0)) return false;
  for (const auto& t : negatives)
    if (stl::satisfies(f, t, 0)) return false;
  return true;
}

std::optional<Formula> select_best_stl(const std::vector<PstlTemplate>& candidates, const pstl::Valuation& v,
                                       const std::vector<stl::Trace>& positives,
                                       const std::vector<stl::Trace>& negatives) {
  for (const auto& c : candidates) {
    if (!pstl::is_total(c, v)) continue;
    Formula f = pstl::instantiate(c, v);
    if (consistent(f, positives, negatives)) return f;
  }
  return std::nullopt;
}

Formula normalize(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::Atom:
      return f;
    default:
      break;
  }
  Formula l = normalize(f.lhs());
  if (f.arity() == 1) return Formula::make(f.op(), f.interval(), l);
  Formula r = normalize(f.rhs());
  if ((f.op() == Op::And || f.op() == Op::Or) && stl::format_formula(r) < stl::format_formula(l)) std::swap(l, r);
  return Formula::make(f.op(), f.interval(), l, r);
}

bool match(const Formula& a, const Formula& b) { return normalize(a) == normalize(b); }

std::vector<Question> plan_questions(const Session& s) { return s.pending_questions(); }

Session::Session(Resources r, PipelineConfig c) : res_(r), config_(std::move(c)) {
  if (!res_.grid || !res_.lexicon || !res_.operators || !res_.vectors)
    throw DialogueError("session resources are incomplete");
  recompute();
}

void Session::set_task(const std::string& text) {
  if (task_) throw NotPendingError("the task has already been given");
  if (nl::normalize_phrase(text).empty()) throw DialogueError("the task text is empty");
  apply({{"op", "task"}, {"text", text}});
}

void Session::add_demo(const world::LabeledDemo& d) {
  if (d.demo.empty()) throw world::WorldError("demonstration is empty");
  d.demo.validate(*res_.grid);
  apply({{"op", "demo"}, {"demo", world::to_json(d)}});
}

void Session::answer(const Answer& a) {
  auto it = std::find_if(d_.plan.begin(), d_.plan.end(), [&](const Question& q) { return q.id == a.question_id; });
  if (it == d_.plan.end()) throw NotPendingError("question '" + a.question_id + "' is not pending");
  check_answer(*it, a);
  apply({{"op", "answer"}, {"answer", to_json(a)}});
}

void Session::label(const std::string& request_id, bool positive) {
  auto it = std::find_if(d_.labels.begin(), d_.labels.end(),
                         [&](const LabelRequest& l) { return l.id == request_id && !l.positive; });
  if (it == d_.labels.end()) throw NotPendingError("label request '" + request_id + "' is not pending");
  apply({{"op", "label"}, {"id", request_id}, {"positive", positive}});
}

void Session::label(const std::map<std::string, bool>& labels) {
  if (labels.empty()) return;
  for (const auto& [id, positive] : labels) {
    auto it = std::find_if(d_.labels.begin(), d_.labels.end(),
                           [&](const LabelRequest& l) { return l.id == id && !l.positive; });
    if (it == d_.labels.end()) throw NotPendingError("label request '" + id + "' is not pending");
  }
  apply({{"op", "labels"}, {"labels", labels}});
}

std::vector<LabelRequest> Session::pending_labels() const {
  std::vector<LabelRequest> out;
  for (const auto& l : d_.labels)
    if (!l.positive) out.push_back(l);
  return out;
}

Metrics Session::metrics() const {
  return Metrics{d_.enumerated.size(), transcript_.size(), d_.runtime, success_};
}

nlohmann::json Session::document() const {
  return {{"version", log_.size()}, {"config", to_json(config_)}, {"log", log_}};
}

Session Session::replay(Resources r, const nlohmann::json& document) {
  if (!document.is_object() || !document.contains("log") || !document["log"].is_array())
    throw DialogueError("session document needs a log array");
  Session s(r, config_from_json(document.value("config", nlohmann::json::object())));
  for (const auto& c : document["log"]) s.apply(c);
  return s;
}

void Session::apply(const nlohmann::json& c) {
  const std::string op = c.value("op", "");
  if (op == "task") {
    task_ = c.at("text").get<std::string>();
  } else if (op == "demo") {
    demos_.push_back(world::fixture_from_json(c.at("demo"), *res_.grid));
  } else if (op == "answer") {
    Answer a = answer_from_json(c.at("answer"));
    auto it = std::find_if(d_.plan.begin(), d_.plan.end(), [&](const Question& q) { return q.id == a.question_id; });
    if (it == d_.plan.end()) throw DialogueError("log answers question '" + a.question_id + "' which is not pending");
    transcript_.push_back(Exchange{*it, a});
    answers_[a.question_id] = a;
  } else if (op == "label") {
    given_labels_[c.at("id").get<std::string>()] = c.at("positive").get<bool>();
  } else if (op == "labels") {
    for (const auto& [id, positive] : c.at("labels").get<std::map<std::string, bool>>()) given_labels_[id] = positive;
  } else {
    throw DialogueError("unknown session command '" + op + "'");
  }
  log_.push_back(c);
  recompute();
}

const Answer* Session::answered(const Question& q) const {
  auto it = answers_.find(q.id);
  return it == answers_.end() ? nullptr : &it->second;
}

void Session::finish(std::optional<Formula> f, std::string note) {
  d_.status = Status::Done;
  d_.plan.clear();
  d_.result = std::move(f);
  d_.note = std::move(note);
}

void Session::recompute() {
  auto t0 = std::chrono::steady_clock::now();
  d_ = Derived{};
  run();
  d_.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

namespace {

std::size_t slot_index(const std::string& slot) {
  // interval slots are "t1", "t2", ...
  if (slot.size() < 2 || slot[0] != 't') return 0;
  try {
    return static_cast<std::size_t>(std::stoul(slot.substr(1)));
  } catch (const std::exception&) {
    return 0;
  }
}

// Items every positive demonstration picks up; used when the text names none.
std::optional<world::Item> picked_item(const std::vector<world::LabeledDemo>& demos, const world::GridSpec& g) {
  std::optional<std::set<world::Item>> common;
  for (const auto& d : demos) {
    if (!d.positive) continue;
    std::set<world::Item> picked;
    auto states = d.demo.successors(g);
    for (world::Item it : world::kItems) {
      if (d.demo.initial().item(it).on_robot) continue;
      for (const auto& s : states)
        if (s.item(it).on_robot) picked.insert(it);
    }
    if (!common) {
      common = picked;
    } else {
      std::set<world::Item> keep;
      std::set_intersection(common->begin(), common->end(), picked.begin(), picked.end(),
                            std::inserter(keep, keep.begin()));
      common = keep;
    }
  }
  if (common && common->size() == 1) return *common->begin();
  return std::nullopt;
}

enum class ScanKind { Found, NeedMore, Exhausted };

struct ScanResult {
  ScanKind kind = ScanKind::Exhausted;
  std::optional<Formula> formula;
  std::string blocking_slot;
};

// Walks the candidates in order. Stops at the first consistent one, or at the
// first one that still needs a slot value.
ScanResult scan(const std::vector<PstlTemplate>& cands, const pstl::Valuation& v, const std::set<std::string>& unavailable,
                const std::vector<stl::Trace>& pos, const std::vector<stl::Trace>& neg) {
  for (const auto& c : cands) {
    bool skip = false;
    std::string missing;
    for (const auto& s : c.slots) {
      if (unavailable.count(s.name)) skip = true;
      else if (!v.count(s.name) && missing.empty()) missing = s.name;
    }
    if (skip) continue;
    if (!missing.empty()) return ScanResult{ScanKind::NeedMore, std::nullopt, missing};
    Formula f;
    try {
      f = pstl::instantiate(c, v);
    } catch (const pstl::TemplateError&) {
      continue;
    }
    if (consistent(f, pos, neg)) return ScanResult{ScanKind::Found, f, ""};
  }
  return ScanResult{};
}

}  // namespace

void Session::run() {
  const world::GridSpec& g = *res_.grid;
  if (!task_) {
    d_.status = Status::NeedsTask;
    d_.note = "waiting for a task description";
    return;
  }

  // Split, asking for a rephrasing of the whole task when no verb is found.
  std::string text = *task_;
  std::set<std::string> tried;
  for (;;) {
    try {
      d_.split = nl::split(nl::tag_tokens(text));
      break;
    } catch (const nl::NlError&) {
      if (!tried.insert(text).second) return finish(std::nullopt, "the task could not be split into actions");
      Question q = Question::paraphrase(text, true, {});
      const Answer* a = answered(q);
      if (!a) {
        d_.plan = {q};
        d_.status = Status::AwaitingAnswer;
        d_.note = "the task has no recognizable action";
        return;
      }
      if (a->kind == AnswerKind::NotApplicable) return finish(std::nullopt, "the task could not be split into actions");
      text = a->phrase;
    }
  }

  // Atom prediction, with rephrasing of uncertain phrases.
  std::vector<std::string> known;
  for (const auto& p : d_.split->phrases()) {
    PhraseReading r{p, "", res_.lexicon->predict(p), false};
    if (r.prediction.confidence > config_.epsilon) known.push_back(r.prediction.atom);
    d_.readings.push_back(std::move(r));
  }
  std::vector<Question> rephrase;
  for (auto& r : d_.readings) {
    if (r.prediction.confidence > config_.epsilon) continue;
    Question q = Question::paraphrase(r.phrase, false, known);
    const Answer* a = answered(q);
    if (!a) {
      rephrase.push_back(q);
    } else if (a->kind == AnswerKind::NotApplicable) {
      r.dropped = true;
    } else {
      r.replacement = a->phrase;
      r.prediction = res_.lexicon->predict(a->phrase);
      known.push_back(r.prediction.atom);
    }
  }
  if (!rephrase.empty()) {
    d_.plan = rephrase;
    d_.status = Status::AwaitingAnswer;
    d_.note = "some phrases were not understood";
    return;
  }

  // Literals, operators, bounds and enumeration.
  const auto& sr = *d_.split;
  const bool never = std::count(sr.adverbs.begin(), sr.adverbs.end(), "never") > 0;
  const auto kinds = world::atom_arg_kinds();
  std::vector<const PhraseReading*> sources;
  for (const auto& r : d_.readings) {
    if (r.dropped) continue;
    const world::AtomInfo* info = world::find_atom(r.prediction.atom);
    std::vector<stl::Term> args;
    for (const auto& p : info->params) args.push_back(stl::Term::slot(pstl::atom_slot_name(info->name, p.name)));
    pstl::AtomLiteral lit{stl::Atom::proposition(info->name, std::move(args)), r.prediction.negated != never,
                          kinds.at(info->name)};
    bool dup = std::any_of(d_.literals.begin(), d_.literals.end(),
                           [&](const pstl::AtomLiteral& l) { return l.atom.name == lit.atom.name; });
    if (dup) continue;
    d_.literals.push_back(std::move(lit));
    sources.push_back(&r);
  }
  if (d_.literals.empty()) return finish(std::nullopt, "no task phrase could be mapped to an atom");
  if (d_.literals.size() > 8) return finish(std::nullopt, "too many distinct atoms in the task");
  d_.ops = nl::predict_operators(sr.conjunctions, sr.adverbs, *res_.operators, *res_.vectors);
  d_.bounds = pstl::compute_length_bounds(d_.literals.size(), sr.conjunctions.size(), sr.adverbs.size());
  d_.enumerated = pstl::enumerate_pstl(d_.literals, d_.ops, d_.bounds);
  d_.survivors = d_.enumerated;
  if (d_.enumerated.empty()) return finish(std::nullopt, "no formula fits the length bounds");

  // Parameters found in the text or implied by the demonstrations.
  for (std::size_t i = 0; i < d_.literals.size(); ++i) {
    const std::string& atom = d_.literals[i].atom.name;
    const std::string& phrase = sources[i]->replacement.empty() ? sources[i]->phrase : sources[i]->replacement;
    for (const auto& [slot, v] : nl::extract_parameters(phrase, atom)) d_.valuation.emplace(slot, v);
    for (const auto& [slot, v] : nl::extract_parameters(text, atom)) d_.valuation.emplace(slot, v);
    const std::string item_slot = pstl::atom_slot_name(atom, "item");
    if (world::find_atom(atom)->params.size() > 0 && world::find_atom(atom)->params[0].name == "item" &&
        !d_.valuation.count(item_slot))
      if (auto it = picked_item(demos_, g)) d_.valuation[item_slot] = std::string(world::item_name(*it));
  }
  std::size_t max_temporal = 0;
  for (const auto& c : d_.enumerated)
    max_temporal = std::max(max_temporal, stl::temporal_nodes(c.skeleton).size());
  for (std::size_t k = 1; k <= max_temporal; ++k)
    for (const auto& [slot, v] : nl::extract_parameters(text, k)) d_.valuation.emplace(slot, v);

  // Question plan.
  std::vector<Question> order_qs, param_qs;
  const bool ordered_op = std::any_of(d_.ops.begin(), d_.ops.end(),
                                      [](Op op) { return op == Op::And || op == Op::Until || op == Op::Implies; });
  if (d_.literals.size() >= 2 && ordered_op)
    for (std::size_t i = 0; i < d_.literals.size(); ++i)
      for (std::size_t j = i + 1; j < d_.literals.size(); ++j)
        order_qs.push_back(Question::task_order(d_.literals[i].atom.name, sources[i]->phrase, d_.literals[j].atom.name,
                                                sources[j]->phrase));
  for (const auto& lit : d_.literals) {
    const auto* info = world::find_atom(lit.atom.name);
    for (std::size_t p = 0; p < info->params.size(); ++p) {
      Question q = Question::atom_param(info->name, info->params[p].name, p, info->params[p].kind);
      if (!d_.valuation.count(q.slot)) param_qs.push_back(q);
    }
  }
  auto interval_plan = [&](std::size_t from) {
    std::size_t kmax = 0;
    for (const auto& c : d_.survivors) kmax = std::max(kmax, stl::temporal_nodes(c.skeleton).size());
    std::vector<Question> qs;
    for (std::size_t k = from; k <= kmax; ++k) {
      Question q = Question::op_param(k);
      const std::string slot = pstl::interval_slot_name(k);
      if (!d_.valuation.count(slot) && !d_.unavailable.count(slot) && !answered(q)) qs.push_back(q);
    }
    return qs;
  };
  auto wait_for = [&](std::vector<Question> qs, Status st, std::string note) {
    d_.plan.clear();
    for (auto& q : qs)
      if (!answered(q)) d_.plan.push_back(std::move(q));
    d_.status = st;
    d_.note = std::move(note);
  };

  for (std::size_t i = 0; i < order_qs.size(); ++i) {
    const Answer* a = answered(order_qs[i]);
    if (!a) {
      std::vector<Question> rest(order_qs.begin() + static_cast<long>(i), order_qs.end());
      rest.insert(rest.end(), param_qs.begin(), param_qs.end());
      auto iv = interval_plan(1);
      rest.insert(rest.end(), iv.begin(), iv.end());
      return wait_for(rest, Status::AwaitingAnswer, "waiting for the task order");
    }
    if (a->kind == AnswerKind::Yes) {
      auto pr = pstl::prune_causal(d_.survivors, {order_qs[i].first_atom, order_qs[i].second_atom},
                                   config_.probe_horizon);
      for (auto& p : pr.pruned) d_.pruned.push_back(std::move(p));
      auto ro = pstl::prune_reading_order(pr.survivors, {order_qs[i].first_atom, order_qs[i].second_atom});
      d_.survivors = std::move(ro.survivors);
      for (auto& p : ro.pruned) d_.pruned.push_back(std::move(p));
    }
  }
  for (std::size_t i = 0; i < param_qs.size(); ++i) {
    const Answer* a = answered(param_qs[i]);
    if (!a) {
      std::vector<Question> rest(param_qs.begin() + static_cast<long>(i), param_qs.end());
      auto iv = interval_plan(1);
      rest.insert(rest.end(), iv.begin(), iv.end());
      return wait_for(rest, Status::AwaitingAnswer, "waiting for atom parameters");
    }
    if (a->kind == AnswerKind::NotApplicable) d_.unavailable.insert(param_qs[i].slot);
    else d_.valuation[param_qs[i].slot] = a->value;
  }

  // Demonstrations and labels.
  bool any_positive = false, any_negative = false;
  for (const auto& d : demos_) (d.positive ? any_positive : any_negative) = true;
  if (!any_positive) return wait_for(interval_plan(1), Status::NeedsDemos, "waiting for a positive demonstration");
  if (config_.delay_variants) {
    for (std::size_t i = 0; i < demos_.size(); ++i) {
      if (!demos_[i].positive) continue;
      std::vector<world::Delay> delays;
      for (std::size_t p = 0; p <= demos_[i].demo.size(); ++p)
        for (auto w : config_.delay_waits) delays.push_back({p, w});
      auto variants = world::inject_delays(demos_[i].demo, delays, g);
      for (std::size_t k = 0; k < variants.size(); ++k) {
        LabelRequest l;
        l.id = "delay:" + std::to_string(i) + ":" + std::to_string(delays[k].position) + ":" +
               std::to_string(delays[k].waits);
        l.demo_index = i;
        l.delay = delays[k];
        l.demo = std::move(variants[k]);
        if (auto it = given_labels_.find(l.id); it != given_labels_.end()) l.positive = it->second;
        d_.labels.push_back(std::move(l));
      }
    }
  }
  if (std::any_of(d_.labels.begin(), d_.labels.end(), [](const LabelRequest& l) { return !l.positive; }))
    return wait_for(interval_plan(1), Status::AwaitingLabels, "waiting for labels of delayed demonstrations");

  const world::StateEncoder enc(g);
  std::vector<stl::Trace> pos, neg;
  for (const auto& d : demos_) {
    (d.positive ? pos : neg).push_back(world::demo_to_trace(d.demo, g, enc));
    if (d.positive && !any_negative)
      for (const auto& p : world::prefixes_as_negatives(d.demo)) neg.push_back(world::demo_to_trace(p, g, enc));
  }
  for (const auto& l : d_.labels) (*l.positive ? pos : neg).push_back(world::demo_to_trace(l.demo, g, enc));

  // Interval questions, asked only while the search still needs them.
  for (;;) {
    ScanResult sc = scan(d_.survivors, d_.valuation, d_.unavailable, pos, neg);
    if (sc.kind == ScanKind::Found) return finish(sc.formula, "");
    if (sc.kind == ScanKind::Exhausted)
      return finish(std::nullopt, "no candidate agrees with all demonstrations");
    std::size_t k = slot_index(sc.blocking_slot);
    if (k == 0) return finish(std::nullopt, "candidate slot '" + sc.blocking_slot + "' has no question");
    Question q = Question::op_param(k);
    const Answer* a = answered(q);
    if (!a) {
      std::vector<Question> rest{q};
      for (auto& other : interval_plan(1))
        if (other.id != q.id) rest.push_back(other);
      return wait_for(rest, Status::AwaitingAnswer, "waiting for time bounds");
    }
    if (a->kind == AnswerKind::NotApplicable) d_.unavailable.insert(sc.blocking_slot);
    else d_.valuation[sc.blocking_slot] = a->hi;
  }
}

}  // namespace stlwb::dialogue
