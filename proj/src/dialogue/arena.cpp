#include "arena/dialogue/arena.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include <spdlog/spdlog.h>

#include "arena/common/prompts.hpp"
#include "arena/common/text.hpp"
#include "arena/gateway/errors.hpp"

namespace arena::dialogue {

using gateway::ChatMessage;
using gateway::Role;

std::string_view to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::kEndpointUnreachable:
      return "EndpointUnreachable";
    case FailureKind::kTimeout:
      return "Timeout";
    case FailureKind::kMalformedResponse:
      return "MalformedResponse";
    case FailureKind::kEmptyUtterance:
      return "EmptyUtterance";
  }
  return "EndpointUnreachable";
}

std::string educator_system_prompt(const forge::DischargeNote& note,
                                   std::string_view closing_marker) {
  return prompts::fill(prompts::load("educator_system.v1"),
                       {{"closing_marker", std::string(closing_marker)},
                        {"discharge_note", forge::render_note(note)}});
}

std::string patient_system_prompt(std::string_view closing_marker) {
  return prompts::fill(prompts::load("patient_persona.v1"),
                       {{"closing_marker", std::string(closing_marker)}});
}

std::string exam_item_prompt(const forge::ComprehensionItem& item) {
  return prompts::fill(prompts::load("exam_item.v1"),
                       {{"question", item.question},
                        {"option_a", item.options[0].text},
                        {"option_b", item.options[1].text},
                        {"option_c", item.options[2].text}});
}

std::vector<ChatMessage> educator_view(const std::string& system_prompt,
                                       std::span<const Turn> turns) {
  std::vector<ChatMessage> msgs;
  msgs.push_back({Role::kSystem, system_prompt});
  msgs.push_back({Role::kUser, std::string(text::trim(prompts::load("educator_kickoff.v1")))});
  for (const auto& t : turns) {
    msgs.push_back({t.speaker == Speaker::kEducator ? Role::kAssistant : Role::kUser,
                    t.text});
  }
  return msgs;
}

std::vector<ChatMessage> patient_view(const std::string& persona,
                                      std::span<const Turn> turns) {
  std::vector<ChatMessage> msgs;
  msgs.push_back({Role::kSystem, persona});
  for (const auto& t : turns) {
    msgs.push_back({t.speaker == Speaker::kEducator ? Role::kUser : Role::kAssistant,
                    t.text});
  }
  return msgs;
}

namespace {

// Runs `f`, translating gateway failures into DialogueError.
template <typename F>
auto guarded(F&& f, const ConversationTranscript& partial) -> decltype(f()) {
  auto fail = [&](FailureKind kind, const std::exception& e) -> DialogueError {
    ConversationTranscript p = partial;
    p.terminated_by = Termination::kError;
    return DialogueError(kind, e.what(), std::move(p));
  };
  try {
    return f();
  } catch (const gateway::Timeout& e) {
    throw fail(FailureKind::kTimeout, e);
  } catch (const gateway::EndpointUnreachable& e) {
    throw fail(FailureKind::kEndpointUnreachable, e);
  } catch (const gateway::GatewayError& e) {
    throw fail(FailureKind::kMalformedResponse, e);
  }
}

// Removes every occurrence of the marker; a reply that is only the marker
// keeps it so the stored utterance is never empty.
std::string strip_marker(std::string_view reply, std::string_view marker) {
  std::string out(text::trim(reply));
  if (marker.empty()) return out;
  std::string stripped;
  std::size_t pos = 0;
  while (true) {
    const auto hit = out.find(marker, pos);
    stripped.append(out, pos, hit == std::string::npos ? std::string::npos : hit - pos);
    if (hit == std::string::npos) break;
    pos = hit + marker.size();
  }
  std::string trimmed(text::trim(stripped));
  return trimmed.empty() ? out : trimmed;
}

std::string ask(gateway::ChatBackend& backend, const gateway::EndpointConfig& config,
                const std::vector<ChatMessage>& messages, Speaker who,
                const ConversationTranscript& partial) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::string reply =
        guarded([&] { return backend.complete(config, messages); }, partial);
    if (!text::is_blank(reply)) return reply;
    spdlog::debug("{}: empty {} utterance (attempt {})", partial.scenario_id,
                  to_string(who), attempt + 1);
  }
  ConversationTranscript p = partial;
  p.terminated_by = Termination::kError;
  throw DialogueError(FailureKind::kEmptyUtterance,
                      std::string(to_string(who)) +
                          " returned an empty utterance twice in a row",
                      std::move(p));
}

bool is_option_letter(char c) {
  return c == 'A' || c == 'B' || c == 'C' || c == 'a' || c == 'b' || c == 'c';
}

bool preceded_by_cue(std::string_view reply, std::size_t pos) {
  const std::string before = text::to_lower(reply.substr(0, pos));
  std::string_view b = text::trim(before);
  while (!b.empty() && (b.back() == ':' || b.back() == '(' || b.back() == '"')) {
    b.remove_suffix(1);
    b = text::trim(b);
  }
  for (const std::string_view cue : {"option", "choice", "letter", "answer", "answer is"}) {
    if (b.size() >= cue.size() && b.substr(b.size() - cue.size()) == cue) return true;
  }
  return false;
}

std::size_t longest_common_substring(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  std::size_t best = 0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best;
}

}  // namespace

std::optional<int> extract_choice(std::string_view reply,
                                  const forge::ComprehensionItem& item) {
  const auto alnum = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '\'';
  };
  for (std::size_t i = 0; i < reply.size(); ++i) {
    const char c = reply[i];
    if (!is_option_letter(c)) continue;
    if (i > 0 && alnum(reply[i - 1])) continue;
    if (i + 1 < reply.size() && alnum(reply[i + 1])) continue;
    if (c == 'a' || c == 'A') {
      const bool word_follows =
          i + 2 < reply.size() &&
          std::isspace(static_cast<unsigned char>(reply[i + 1])) &&
          std::isalpha(static_cast<unsigned char>(reply[i + 2]));
      if (word_follows && !preceded_by_cue(reply, i)) continue;
    }
    return std::toupper(static_cast<unsigned char>(c)) - 'A';
  }

  const std::string r = text::to_lower(reply);
  std::array<std::size_t, 3> lcs{};
  std::optional<int> best;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::string opt = text::to_lower(text::trim(item.options[k].text));
    lcs[k] = longest_common_substring(r, opt);
    const bool covers = lcs[k] >= 4 && 2 * lcs[k] >= opt.size();
    if (!covers) continue;
    if (!best || lcs[k] > lcs[static_cast<std::size_t>(*best)]) {
      best = static_cast<int>(k);
    }
  }
  if (!best) return std::nullopt;
  for (std::size_t k = 0; k < 3; ++k) {
    if (static_cast<int>(k) != *best && lcs[k] == lcs[static_cast<std::size_t>(*best)]) {
      return std::nullopt;
    }
  }
  return best;
}

ConversationTranscript run_dialogue(const std::string& scenario_id,
                                    const forge::DischargeNote& note,
                                    gateway::ChatBackend& educator,
                                    const gateway::EndpointConfig& educator_config,
                                    gateway::ChatBackend& patient,
                                    const gateway::EndpointConfig& patient_config,
                                    const DialogueOptions& options) {
  if (options.turn_cap < 1) throw std::invalid_argument("turn_cap must be >= 1");
  const std::string educator_prompt =
      educator_system_prompt(note, options.closing_marker);
  const std::string persona = patient_system_prompt(options.closing_marker);
  const auto closes = [&](const std::string& reply) {
    return !options.closing_marker.empty() &&
           reply.find(options.closing_marker) != std::string::npos;
  };

  ConversationTranscript t;
  t.scenario_id = scenario_id;
  t.terminated_by = Termination::kTurnCap;
  for (int pair = 0; pair < options.turn_cap; ++pair) {
    const std::string e = ask(educator, educator_config,
                              educator_view(educator_prompt, t.turns),
                              Speaker::kEducator, t);
    t.turns.push_back(make_turn(Speaker::kEducator, strip_marker(e, options.closing_marker)));
    if (closes(e)) {
      t.terminated_by = Termination::kNaturalClose;
      break;
    }
    const std::string p = ask(patient, patient_config, patient_view(persona, t.turns),
                              Speaker::kPatient, t);
    t.turns.push_back(make_turn(Speaker::kPatient, strip_marker(p, options.closing_marker)));
    if (closes(p)) {
      t.terminated_by = Termination::kNaturalClose;
      break;
    }
  }
  return t;
}

ExamResult administer_exam(const forge::ComprehensionExam& exam,
                           const ConversationTranscript& transcript,
                           gateway::ChatBackend& patient,
                           const gateway::EndpointConfig& patient_config,
                           const DialogueOptions& options) {
  const std::string persona = patient_system_prompt(options.closing_marker);
  const auto history = patient_view(persona, transcript.turns);
  ExamResult result;
  result.scenario_id = transcript.scenario_id;
  for (std::size_t i = 0; i < exam.items.size(); ++i) {
    const auto& item = exam.items[i];
    auto messages = history;
    messages.push_back({Role::kUser, exam_item_prompt(item)});
    const std::string reply =
        guarded([&] { return patient.complete(patient_config, messages); }, transcript);
    ItemOutcome outcome;
    outcome.reply = reply;
    outcome.chosen_index = extract_choice(reply, item);
    outcome.correct =
        outcome.chosen_index && *outcome.chosen_index == item.correct_index;
    if (!outcome.chosen_index) {
      spdlog::info("{}: item {} answer unparseable, scored as abstain: \"{}\"",
                   transcript.scenario_id, i + 1, reply);
    }
    result.items.push_back(std::move(outcome));
  }
  return result;
}

Episode run_episode(const Scenario& scenario, gateway::ChatBackend& educator,
                    const gateway::EndpointConfig& educator_config,
                    gateway::ChatBackend& patient,
                    const gateway::EndpointConfig& patient_config,
                    const DialogueOptions& options) {
  Episode ep;
  ep.scenario_id = scenario.scenario_id;
  ep.transcript = run_dialogue(scenario.scenario_id, scenario.note, educator,
                               educator_config, patient, patient_config, options);
  ep.exam_result =
      administer_exam(scenario.exam, ep.transcript, patient, patient_config, options);
  ep.reward = compute_reward(ep.exam_result);
  return ep;
}

std::vector<std::string> find_note_leaks(const forge::DischargeNote& note,
                                         std::span<const ChatMessage> messages,
                                         std::size_t min_chars) {
  std::vector<std::string> needles;
  for (std::size_t i = 0; i < note.sections.size(); ++i) {
    needles.push_back(forge::section_heading(i));
    for (const auto& line : text::split_lines(note.sections[i])) {
      const auto l = text::trim(line);
      if (l.size() >= min_chars) needles.emplace_back(l);
    }
  }
  std::vector<std::string> leaks;
  for (const auto& needle : needles) {
    for (const auto& m : messages) {
      if (m.content.find(needle) != std::string::npos) {
        leaks.push_back(needle);
        break;
      }
    }
  }
  return leaks;
}

}  // namespace arena::dialogue
