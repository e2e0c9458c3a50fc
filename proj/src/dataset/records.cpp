#include "arena/dataset/records.hpp"

#include "arena/dataset/ldj.hpp"

namespace arena::dataset {

namespace {

const Json& at(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaMismatch(std::string("record is missing field \"") + key + "\"");
  }
  return j.at(key);
}

template <typename T>
T get(const Json& j, const char* key) {
  try {
    return at(j, key).get<T>();
  } catch (const Json::type_error& e) {
    throw SchemaMismatch(std::string("field \"") + key + "\": " + e.what());
  }
}

template <typename T>
std::optional<T> get_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get<T>(j, key);
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename F>
auto wrap(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaMismatch&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaMismatch(e.what());
  }
}

}  // namespace

Json encode(const forge::DemographicProfile& p) {
  Json procedures = Json::array();
  for (auto proc : p.procedures) procedures.push_back(forge::label(proc));
  return {{"age_band", forge::label(p.age_band)},
          {"gender", forge::label(p.gender)},
          {"ethnicity", forge::label(p.ethnicity)},
          {"disease", forge::label(p.disease)},
          {"chief_complaint", forge::label(p.chief_complaint)},
          {"procedures", procedures}};
}

forge::DemographicProfile decode_profile(const Json& j) {
  return wrap([&] {
    forge::DemographicProfile p;
    p.age_band = forge::from_label<forge::AgeBand>(get<std::string>(j, "age_band"));
    p.gender = forge::from_label<forge::Gender>(get<std::string>(j, "gender"));
    p.ethnicity = forge::from_label<forge::Ethnicity>(get<std::string>(j, "ethnicity"));
    p.disease = forge::from_label<forge::DiseaseCategory>(get<std::string>(j, "disease"));
    p.chief_complaint =
        forge::from_label<forge::ChiefComplaint>(get<std::string>(j, "chief_complaint"));
    for (const auto& s : get<std::vector<std::string>>(j, "procedures")) {
      p.procedures.push_back(forge::from_label<forge::Procedure>(s));
    }
    return p;
  });
}

Json encode(const forge::DischargeNote& n) {
  const auto& f = n.content_flags;
  return {{"note_id", n.note_id},
          {"sex", n.sex},
          {"chief_complaint", n.chief_complaint},
          {"past_medical_history", n.past_medical_history},
          {"family_history", n.family_history},
          {"social_history", n.social_history},
          {"sections", n.sections},
          {"content_flags",
           {{"return_to_ed", f.return_to_ed},
            {"medication", f.medication},
            {"diagnosis", f.diagnosis},
            {"post_discharge_treatment", f.post_discharge_treatment},
            {"tests_during_stay", f.tests_during_stay},
            {"follow_up", f.follow_up}}}};
}

forge::DischargeNote decode_note(const Json& j) {
  forge::DischargeNote n;
  n.note_id = get<std::string>(j, "note_id");
  n.sex = get<std::string>(j, "sex");
  n.chief_complaint = get<std::string>(j, "chief_complaint");
  n.past_medical_history = get<std::string>(j, "past_medical_history");
  n.family_history = get<std::string>(j, "family_history");
  n.social_history = get<std::string>(j, "social_history");
  const auto sections = get<std::vector<std::string>>(j, "sections");
  if (sections.size() != n.sections.size()) {
    throw SchemaMismatch("note " + n.note_id + " must have 5 sections");
  }
  std::copy(sections.begin(), sections.end(), n.sections.begin());
  const Json& f = at(j, "content_flags");
  n.content_flags.return_to_ed = get<bool>(f, "return_to_ed");
  n.content_flags.medication = get<bool>(f, "medication");
  n.content_flags.diagnosis = get<bool>(f, "diagnosis");
  n.content_flags.post_discharge_treatment = get<bool>(f, "post_discharge_treatment");
  n.content_flags.tests_during_stay = get<bool>(f, "tests_during_stay");
  n.content_flags.follow_up = get<bool>(f, "follow_up");
  return n;
}

Json encode(const forge::ComprehensionExam& e) {
  Json items = Json::array();
  for (const auto& item : e.items) {
    Json options = Json::array();
    for (const auto& o : item.options) {
      options.push_back({{"text", o.text}, {"kind", forge::to_string(o.kind)}});
    }
    items.push_back(
        {{"question", item.question}, {"options", options}, {"correct_index", item.correct_index}});
  }
  return {{"note_id", e.note_id}, {"items", items}};
}

forge::ComprehensionExam decode_exam(const Json& j) {
  return wrap([&] {
    forge::ComprehensionExam e;
    e.note_id = get<std::string>(j, "note_id");
    for (const auto& ji : at(j, "items")) {
      forge::ComprehensionItem item;
      item.question = get<std::string>(ji, "question");
      const Json& options = at(ji, "options");
      if (!options.is_array() || options.size() != 3) {
        throw SchemaMismatch("exam " + e.note_id + ": an item needs 3 options");
      }
      for (std::size_t k = 0; k < 3; ++k) {
        item.options[k].text = get<std::string>(options[k], "text");
        item.options[k].kind = forge::option_kind_from_string(get<std::string>(options[k], "kind"));
      }
      item.correct_index = get<int>(ji, "correct_index");
      e.items.push_back(std::move(item));
    }
    forge::validate_exam(e);
    return e;
  });
}

Json encode(const forge::ReferenceConversation& c) {
  Json turns = Json::array();
  for (const auto& t : c.turns) {
    Json jt{{"speaker", to_string(t.speaker)}, {"text", t.text}};
    if (t.evidence) jt["evidence"] = *t.evidence;
    turns.push_back(std::move(jt));
  }
  return {{"note_id", c.note_id}, {"turns", turns}};
}

forge::ReferenceConversation decode_conversation(const Json& j) {
  return wrap([&] {
    forge::ReferenceConversation c;
    c.note_id = get<std::string>(j, "note_id");
    for (const auto& jt : at(j, "turns")) {
      forge::ReferenceTurn t;
      t.speaker = speaker_from_string(get<std::string>(jt, "speaker"));
      t.text = get<std::string>(jt, "text");
      t.evidence = get_optional<std::string>(jt, "evidence");
      c.turns.push_back(std::move(t));
    }
    forge::validate_conversation(c);
    return c;
  });
}

Json encode(const dialogue::ConversationTranscript& t) {
  Json turns = Json::array();
  for (const auto& turn : t.turns) {
    turns.push_back({{"speaker", to_string(turn.speaker)},
                     {"text", turn.text},
                     {"token_count", turn.token_count}});
  }
  return {{"scenario_id", t.scenario_id},
          {"terminated_by", dialogue::to_string(t.terminated_by)},
          {"turns", turns}};
}

dialogue::ConversationTranscript decode_transcript(const Json& j) {
  return wrap([&] {
    dialogue::ConversationTranscript t;
    t.scenario_id = get<std::string>(j, "scenario_id");
    t.terminated_by = dialogue::termination_from_string(get<std::string>(j, "terminated_by"));
    for (const auto& jt : at(j, "turns")) {
      auto turn = dialogue::make_turn(speaker_from_string(get<std::string>(jt, "speaker")),
                                      get<std::string>(jt, "text"));
      if (turn.token_count != get<std::size_t>(jt, "token_count")) {
        throw SchemaMismatch("transcript " + t.scenario_id + ": stale token_count");
      }
      t.turns.push_back(std::move(turn));
    }
    return t;
  });
}

Json encode(const dialogue::ExamResult& r) {
  Json items = Json::array();
  for (const auto& item : r.items) {
    items.push_back({{"chosen_index", optional_json(item.chosen_index)},
                     {"correct", item.correct},
                     {"reply", item.reply}});
  }
  return {{"scenario_id", r.scenario_id},
          {"items", items},
          {"num_correct", r.num_correct()},
          {"total", r.total()}};
}

dialogue::ExamResult decode_exam_result(const Json& j) {
  dialogue::ExamResult r;
  r.scenario_id = get<std::string>(j, "scenario_id");
  for (const auto& ji : at(j, "items")) {
    dialogue::ItemOutcome o;
    o.chosen_index = get_optional<int>(ji, "chosen_index");
    o.correct = get<bool>(ji, "correct");
    o.reply = get<std::string>(ji, "reply");
    if (o.correct && !o.chosen_index) {
      throw SchemaMismatch("exam result " + r.scenario_id + ": abstain marked correct");
    }
    r.items.push_back(std::move(o));
  }
  return r;
}

Json encode(const dialogue::Episode& e) {
  return {{"status", "ok"},
          {"scenario_id", e.scenario_id},
          {"transcript", encode(e.transcript)},
          {"exam_result", encode(e.exam_result)},
          {"reward", e.reward}};
}

Json encode(const dialogue::EpisodeError& e) {
  return {{"status", "error"},
          {"scenario_id", e.scenario_id},
          {"error", {{"kind", e.kind}, {"message", e.message}}},
          {"partial_transcript", e.partial ? encode(*e.partial) : Json(nullptr)}};
}

Json encode(const dialogue::EpisodeOutcome& o) {
  return std::visit([](const auto& v) { return encode(v); }, o);
}

dialogue::EpisodeOutcome decode_episode(const Json& j) {
  const auto status = get<std::string>(j, "status");
  if (status == "error") {
    dialogue::EpisodeError e;
    e.scenario_id = get<std::string>(j, "scenario_id");
    const Json& err = at(j, "error");
    e.kind = get<std::string>(err, "kind");
    e.message = get<std::string>(err, "message");
    if (j.contains("partial_transcript") && !j["partial_transcript"].is_null()) {
      e.partial = decode_transcript(j["partial_transcript"]);
    }
    return e;
  }
  if (status != "ok") throw SchemaMismatch("unknown episode status: " + status);
  dialogue::Episode e;
  e.scenario_id = get<std::string>(j, "scenario_id");
  e.transcript = decode_transcript(at(j, "transcript"));
  e.exam_result = decode_exam_result(at(j, "exam_result"));
  e.reward = get<double>(j, "reward");
  if (e.reward != dialogue::compute_reward(e.exam_result)) {
    throw SchemaMismatch("episode " + e.scenario_id + ": reward does not match exam result");
  }
  return e;
}

Json encode(const judge::SentenceLabeling& l) {
  Json labels = Json::array();
  for (auto c : l.labels) labels.push_back(judge::code(c));
  return {{"utterance_index", l.utterance_index},
          {"sentence_index", l.sentence_index},
          {"sentence", l.sentence},
          {"labels", labels},
          {"raw", l.raw},
          {"parsed", l.parsed}};
}

judge::SentenceLabeling decode_labeling(const Json& j) {
  return wrap([&] {
    judge::SentenceLabeling l;
    l.utterance_index = get<std::size_t>(j, "utterance_index");
    l.sentence_index = get<std::size_t>(j, "sentence_index");
    l.sentence = get<std::string>(j, "sentence");
    for (const auto& s : get<std::vector<std::string>>(j, "labels")) {
      l.labels.push_back(judge::content_category_from_string(s));
    }
    l.raw = get<std::string>(j, "raw");
    l.parsed = get<bool>(j, "parsed");
    return l;
  });
}

Json encode(const judge::JudgeReport& r) {
  Json content = Json::array();
  for (const auto& c : r.content) {
    content.push_back({{"category", judge::name(c.category)},
                       {"code", judge::code(c.category)},
                       {"score", optional_json(c.score)},
                       {"error", optional_json(c.error)}});
  }
  Json strategy = Json::array();
  for (const auto& s : r.strategy) {
    strategy.push_back({{"category", judge::name(s.category)},
                        {"likert", optional_json(s.likert)},
                        {"score", optional_json(s.score)},
                        {"evidence", s.evidence},
                        {"error", optional_json(s.error)}});
  }
  Json labelings = Json::array();
  for (const auto& l : r.labelings) labelings.push_back(encode(l));
  return {{"scenario_id", r.scenario_id},
          {"educator_utterances", r.educator_utterances},
          {"educator_tokens", r.educator_tokens},
          {"content", content},
          {"strategy", strategy},
          {"labelings", labelings},
          {"strategy_raw", r.strategy_raw}};
}

judge::JudgeReport decode_report(const Json& j) {
  return wrap([&] {
    judge::JudgeReport r;
    r.scenario_id = get<std::string>(j, "scenario_id");
    r.educator_utterances = get<std::size_t>(j, "educator_utterances");
    r.educator_tokens = get<std::size_t>(j, "educator_tokens");
    const Json& content = at(j, "content");
    const Json& strategy = at(j, "strategy");
    if (content.size() != 6 || strategy.size() != 6) {
      throw SchemaMismatch("report " + r.scenario_id + " must have 6 + 6 cells");
    }
    for (std::size_t i = 0; i < 6; ++i) {
      r.content[i].category = judge::content_category_from_string(get<std::string>(content[i], "category"));
      r.content[i].score = get_optional<double>(content[i], "score");
      r.content[i].error = get_optional<std::string>(content[i], "error");
      r.strategy[i].category =
          judge::strategy_category_from_string(get<std::string>(strategy[i], "category"));
      r.strategy[i].likert = get_optional<int>(strategy[i], "likert");
      r.strategy[i].score = get_optional<double>(strategy[i], "score");
      r.strategy[i].evidence = get<std::string>(strategy[i], "evidence");
      r.strategy[i].error = get_optional<std::string>(strategy[i], "error");
    }
    for (const auto& l : at(j, "labelings")) r.labelings.push_back(decode_labeling(l));
    r.strategy_raw = get<std::string>(j, "strategy_raw");
    return r;
  });
}

Json encode(const metrics::PlotPoint& p) {
  return {{"step", p.step},
          {"metric", p.metric},
          {"mean", p.mean},
          {"margin", optional_json(p.margin)},
          {"n", p.n}};
}

metrics::PlotPoint decode_plot_point(const Json& j) {
  metrics::PlotPoint p;
  p.step = get<std::size_t>(j, "step");
  p.metric = get<std::string>(j, "metric");
  p.mean = get<double>(j, "mean");
  p.margin = get_optional<double>(j, "margin");
  p.n = get<std::size_t>(j, "n");
  return p;
}

}  // namespace arena::dataset
