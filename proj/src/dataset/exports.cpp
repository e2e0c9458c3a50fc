#include "arena/dataset/exports.hpp"

#include <spdlog/spdlog.h>

#include "arena/dataset/ldj.hpp"
#include "arena/dataset/records.hpp"

namespace arena::dataset {

namespace {

Json encode_messages(const std::vector<gateway::ChatMessage>& messages) {
  Json out = Json::array();
  for (const auto& m : messages) {
    out.push_back({{"role", gateway::to_string(m.role)}, {"content", m.content}});
  }
  return out;
}

std::vector<gateway::ChatMessage> decode_messages(const Json& j) {
  if (!j.is_array()) throw SchemaMismatch("messages must be an array");
  std::vector<gateway::ChatMessage> out;
  for (const auto& m : j) {
    if (!m.is_object() || !m.contains("role") || !m.contains("content")) {
      throw SchemaMismatch("message needs role and content");
    }
    try {
      out.push_back({gateway::role_from_string(m["role"].get<std::string>()),
                     m["content"].get<std::string>()});
    } catch (const std::exception& e) {
      throw SchemaMismatch(e.what());
    }
  }
  return out;
}

template <typename T, typename F>
std::vector<T> decode_all(const std::vector<Json>& records, F&& decode) {
  std::vector<T> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(decode(r));
  return out;
}

}  // namespace

NoteIndex index_notes(std::span<const forge::DischargeNote> notes) {
  NoteIndex index;
  for (const auto& n : notes) {
    if (!index.emplace(n.note_id, n).second) {
      throw std::invalid_argument("duplicate note id " + n.note_id);
    }
  }
  return index;
}

Json encode(const SftRecord& r) {
  return {{"note_id", r.note_id}, {"system", r.system}, {"messages", encode_messages(r.messages)}};
}

SftRecord decode_sft(const Json& j) {
  if (!j.is_object() || !j.contains("note_id") || !j.contains("system") ||
      !j.contains("messages")) {
    throw SchemaMismatch("sft record needs note_id, system and messages");
  }
  SftRecord r;
  try {
    r.note_id = j["note_id"].get<std::string>();
    r.system = j["system"].get<std::string>();
  } catch (const Json::type_error& e) {
    throw SchemaMismatch(e.what());
  }
  r.messages = decode_messages(j["messages"]);
  if (r.messages.empty() || r.messages.front().role != gateway::Role::kAssistant) {
    throw SchemaMismatch("sft record " + r.note_id + " must open with the educator");
  }
  return r;
}

std::vector<SftRecord> make_sft_records(std::span<const forge::ReferenceConversation> conversations,
                                        const NoteIndex& notes, std::string_view closing_marker) {
  std::vector<SftRecord> out;
  out.reserve(conversations.size());
  for (const auto& conv : conversations) {
    const auto it = notes.find(conv.note_id);
    if (it == notes.end()) {
      throw MissingNote("conversation refers to unknown note " + conv.note_id);
    }
    forge::validate_conversation(conv);
    SftRecord r;
    r.note_id = conv.note_id;
    r.system = dialogue::educator_system_prompt(it->second, closing_marker);
    for (const auto& t : conv.turns) {
      r.messages.push_back({t.speaker == Speaker::kEducator ? gateway::Role::kAssistant
                                                            : gateway::Role::kUser,
                            t.text});
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string export_sft(std::span<const forge::ReferenceConversation> conversations,
                       const NoteIndex& notes, const std::filesystem::path& path,
                       std::string_view closing_marker) {
  std::vector<Json> records;
  for (const auto& r : make_sft_records(conversations, notes, closing_marker)) {
    records.push_back(encode(r));
  }
  return write_ldj(path, "sft", records);
}

std::vector<SftRecord> read_sft(const std::filesystem::path& path) {
  return decode_all<SftRecord>(read_ldj(path, "sft"), decode_sft);
}

Json encode(const RlEpisodeRecord& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"context", encode_messages(s.context)}, {"action", s.action}});
  }
  Json detail = Json::array();
  for (const auto& item : r.exam_detail) {
    detail.push_back({{"chosen_index", item.chosen_index ? Json(*item.chosen_index) : Json(nullptr)},
                      {"correct", item.correct}});
  }
  return {{"scenario_id", r.scenario_id},
          {"system", r.system ? Json(*r.system) : Json(nullptr)},
          {"steps", steps},
          {"reward", r.reward},
          {"exam_detail", detail},
          {"terminated_by", dialogue::to_string(r.terminated_by)}};
}

RlEpisodeRecord decode_rl_episode(const Json& j) {
  try {
    RlEpisodeRecord r;
    r.scenario_id = j.at("scenario_id").get<std::string>();
    if (!j.at("system").is_null()) r.system = j.at("system").get<std::string>();
    for (const auto& s : j.at("steps")) {
      RlStep step;
      step.context = decode_messages(s.at("context"));
      step.action = s.at("action").get<std::string>();
      r.steps.push_back(std::move(step));
    }
    r.reward = j.at("reward").get<double>();
    for (const auto& item : j.at("exam_detail")) {
      RlItem d;
      if (!item.at("chosen_index").is_null()) d.chosen_index = item.at("chosen_index").get<int>();
      d.correct = item.at("correct").get<bool>();
      r.exam_detail.push_back(d);
    }
    r.terminated_by = dialogue::termination_from_string(j.at("terminated_by").get<std::string>());
    return r;
  } catch (const SchemaMismatch&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaMismatch(std::string("rl episode record: ") + e.what());
  }
}

RlEpisodeRecord make_rl_record(const dialogue::Episode& episode,
                               const forge::DischargeNote* note,
                               std::string_view closing_marker) {
  RlEpisodeRecord r;
  r.scenario_id = episode.scenario_id;
  r.reward = episode.reward;
  r.terminated_by = episode.transcript.terminated_by;
  if (note) r.system = dialogue::educator_system_prompt(*note, closing_marker);
  const auto& turns = episode.transcript.turns;
  for (std::size_t i = 0; i < turns.size(); ++i) {
    if (turns[i].speaker != Speaker::kEducator) continue;
    auto view = dialogue::educator_view("", std::span<const dialogue::Turn>(turns.data(), i));
    view.erase(view.begin());
    r.steps.push_back({std::move(view), turns[i].text});
  }
  for (const auto& item : episode.exam_result.items) {
    r.exam_detail.push_back({item.chosen_index, item.correct});
  }
  return r;
}

std::string export_rl_episodes(std::span<const dialogue::EpisodeOutcome> episodes,
                               const NoteIndex& notes, const std::filesystem::path& path,
                               std::string_view closing_marker) {
  std::vector<Json> records;
  for (const auto& outcome : episodes) {
    const auto* ep = std::get_if<dialogue::Episode>(&outcome);
    if (!ep) {
      spdlog::info("{}: skipping failed episode",
                   std::get<dialogue::EpisodeError>(outcome).scenario_id);
      continue;
    }
    const auto it = notes.find(ep->scenario_id);
    records.push_back(
        encode(make_rl_record(*ep, it == notes.end() ? nullptr : &it->second, closing_marker)));
  }
  return write_ldj(path, "rl_episodes", records);
}

std::vector<RlEpisodeRecord> read_rl_episodes(const std::filesystem::path& path) {
  return decode_all<RlEpisodeRecord>(read_ldj(path, "rl_episodes"), decode_rl_episode);
}

}  // namespace arena::dataset
