#include "arena/forge/generate.hpp"

#include <exception>
#include <sstream>

#include <spdlog/spdlog.h>

#include "arena/common/prompts.hpp"
#include "arena/forge/errors.hpp"

namespace arena::forge {

namespace {

using gateway::ChatMessage;
using gateway::Role;

std::string join_procedures(const std::vector<Procedure>& procedures) {
  std::string out;
  for (const auto p : procedures) {
    if (!out.empty()) out += ", ";
    out += label(p);
  }
  return out;
}

// Asks for a reply and parses it until parse succeeds or the budget runs
// out. The last rejection decides the exception type.
template <typename Parse>
auto generate_with_retry(const char* what, const std::string& id,
                         const std::string& prompt,
                         gateway::ChatBackend& backend,
                         const gateway::EndpointConfig& config,
                         const GenerationOptions& options, RejectionLog* log,
                         Parse parse) -> decltype(parse(std::string{})) {
  const std::vector<ChatMessage> messages = {{Role::kUser, prompt}};
  const int attempts = 1 + std::max(0, options.retry_budget);
  std::exception_ptr last;
  std::string last_reason;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    const std::string reply = backend.complete(config, messages);
    try {
      return parse(reply);
    } catch (const GenerationRejected& e) {
      last = std::current_exception();
      last_reason = e.what();
      spdlog::warn("{} {} rejected (attempt {}/{}): {}", what, id, attempt,
                   attempts, e.what());
      if (log) log->reasons.push_back(std::string(what) + " " + id + ": " + e.what());
    }
  }
  const std::string msg = std::string(what) + " " + id + " rejected after " +
                          std::to_string(attempts) + " attempts: " + last_reason;
  try {
    std::rethrow_exception(last);
  } catch (const SchemaError&) {
    throw SchemaError(msg);
  } catch (const GenerationRejected&) {
    throw GenerationRejected(msg);
  }
}

}  // namespace

std::string note_prompt(const DemographicProfile& profile,
                        const std::string& note_id) {
  return prompts::fill(prompts::load("note_generation.v1"),
                       {{"disease_category", std::string(label(profile.disease))},
                        {"age", std::string(label(profile.age_band))},
                        {"sex", std::string(label(profile.gender))},
                        {"ethnicity", std::string(label(profile.ethnicity))},
                        {"chief_complaint",
                         std::string(label(profile.chief_complaint))},
                        {"procedures", join_procedures(profile.procedures)},
                        {"note_id", note_id}});
}

std::string exam_prompt(const DischargeNote& note) {
  return prompts::fill(prompts::load("exam_generation.v1"),
                       {{"discharge_note", render_note(note)}});
}

std::string format_questionnaire(const ComprehensionExam& exam) {
  std::ostringstream out;
  for (std::size_t i = 0; i < exam.items.size(); ++i) {
    const auto& item = exam.items[i];
    out << "Q" << (i + 1) << ". " << item.question << "\n   Answer: "
        << item.options[static_cast<std::size_t>(item.correct_index)].text
        << '\n';
  }
  return out.str();
}

std::string conversation_prompt(const DischargeNote& note,
                                const ComprehensionExam& exam) {
  return prompts::fill(prompts::load("conversation_generation.v1"),
                       {{"discharge_note", render_note(note)},
                        {"questionnaire", format_questionnaire(exam)}});
}

DischargeNote generate_note(const DemographicProfile& profile,
                            const std::string& note_id,
                            gateway::ChatBackend& backend,
                            const gateway::EndpointConfig& config,
                            const GenerationOptions& options,
                            RejectionLog* log) {
  return generate_with_retry(
      "note", note_id, note_prompt(profile, note_id), backend, config, options,
      log, [&](const std::string& reply) {
        DischargeNote note = parse_note(reply);
        note.note_id = note_id;
        require_complete(note);
        return note;
      });
}

ComprehensionExam generate_exam(const DischargeNote& note,
                                gateway::ChatBackend& backend,
                                const gateway::EndpointConfig& config,
                                const GenerationOptions& options,
                                RejectionLog* log) {
  ComprehensionExam exam = generate_with_retry(
      "exam", note.note_id, exam_prompt(note), backend, config, options, log,
      [&](const std::string& reply) {
        return parse_exam_reply(reply, note.note_id);
      });
  shuffle_options(exam);
  for (const auto& topic : uncovered_topics(exam)) {
    spdlog::warn("exam {}: no question appears to cover {}", note.note_id, topic);
  }
  return exam;
}

ReferenceConversation generate_reference_conversation(
    const DischargeNote& note, const ComprehensionExam& exam,
    gateway::ChatBackend& backend, const gateway::EndpointConfig& config,
    const GenerationOptions& options, RejectionLog* log) {
  ReferenceConversation conv = generate_with_retry(
      "conversation", note.note_id, conversation_prompt(note, exam), backend,
      config, options, log, [&](const std::string& reply) {
        return parse_conversation_reply(reply, note.note_id);
      });
  for (const auto idx : unmentioned_items(conv, exam)) {
    spdlog::warn("conversation {}: exam item {} is never discussed by the educator",
                 note.note_id, idx + 1);
  }
  return conv;
}

}  // namespace arena::forge
