#include <fstream>
#include <set>

#include <spdlog/spdlog.h>

#include "arena/common/digest.hpp"
#include "arena/common/text.hpp"
#include "arena/dataset/exports.hpp"
#include "arena/dataset/ldj.hpp"
#include "arena/dataset/records.hpp"
#include "arena/dataset/splits.hpp"
#include "context.hpp"

namespace arena::cli {

namespace {

fs::path required_path(const Json& s, const char* key, const char* flag) {
  if (!s.contains(key)) throw UsageError(std::string(flag) + " is required");
  return s[key].get<std::string>();
}

}  // namespace

int cmd_partition(const CommandInput& in) {
  const Json& s = in.settings;
  const fs::path out = required_path(s, "out", "--out");
  std::vector<std::string> ids;
  std::optional<fs::path> scenario_dir;
  std::optional<fs::path> id_file;
  if (s.contains("ids")) {
    id_file = s["ids"].get<std::string>();
    std::ifstream f(*id_file);
    if (!f) throw UsageError("cannot read " + id_file->string());
    for (std::string line; std::getline(f, line);) {
      if (const auto t = text::trim(line); !t.empty()) ids.emplace_back(t);
    }
  } else if (s.contains("scenarios")) {
    scenario_dir = s["scenarios"].get<std::string>();
    for (const auto& n : read_notes(*scenario_dir)) ids.push_back(n.note_id);
  } else {
    throw UsageError("partition needs --scenarios or --ids");
  }
  const auto seed = s["seed"].get<std::uint64_t>();
  const auto splits = dataset::partition(ids, seed);

  prepare_out_dir(out, in.force);
  RunManifest manifest("partition", in.args, s);
  std::vector<Json> records;
  Json membership = Json::object();
  for (const auto& split : splits) {
    membership[std::string(dataset::to_string(split.split))] = split.ids;
    for (const auto& id : split.ids) {
      records.push_back({{"id", id}, {"split", dataset::to_string(split.split)}});
    }
  }
  const fs::path splits_path = out / dataset::ldj_filename("splits");
  dataset::write_ldj(splits_path, "splits", records);
  manifest.add_output(splits_path);

  Json files = Json::object();
  if (scenario_dir) {
    for (const char* kind : {"notes", "exams", "conversations"}) {
      const fs::path p = *scenario_dir / dataset::ldj_filename(kind);
      if (!fs::exists(p)) continue;
      files[p.filename().string()] = sha256_hex(dataset::read_file(p));
      manifest.add_input(p);
    }
  } else {
    manifest.add_input(*id_file);
  }
  files[splits_path.filename().string()] = sha256_hex(dataset::read_file(splits_path));
  const Json dataset_manifest{{"schema", "arena.dataset_manifest"},
                              {"version", dataset::kSchemaVersion},
                              {"seed", seed},
                              {"files", files},
                              {"splits", membership}};
  dataset::write_file_atomic(out / "manifest.json", canonical_dump(dataset_manifest) + "\n");
  manifest.add_output(out / "manifest.json");
  manifest.counts() = {{"ids", ids.size()},
                       {"train", splits[0].ids.size()},
                       {"validation", splits[1].ids.size()},
                       {"test", splits[2].ids.size()}};
  manifest.write(out, kExitOk);
  return kExitOk;
}

int cmd_export_sft(const CommandInput& in) {
  const Json& s = in.settings;
  const fs::path dir = required_path(s, "scenarios", "--scenarios");
  const fs::path out = required_path(s, "out", "--out");
  const auto notes = dataset::index_notes(read_notes(dir));
  auto conversations = read_conversations(dir);
  if (s.contains("split")) {
    const fs::path splits_dir = s.contains("splits") ? fs::path(s["splits"].get<std::string>()) : dir;
    const auto ids = read_split(splits_dir, s["split"].get<std::string>());
    const std::set<std::string> keep(ids.begin(), ids.end());
    std::erase_if(conversations, [&](const auto& c) { return !keep.contains(c.note_id); });
  }
  // Fails before touching the output directory.
  const auto records = dataset::make_sft_records(conversations, notes,
                                                 s["closing_marker"].get<std::string>());
  prepare_out_dir(out, in.force);
  RunManifest manifest("export-sft", in.args, s);
  for (const char* kind : {"notes", "conversations"}) manifest.add_input(dir / dataset::ldj_filename(kind));
  std::vector<Json> lines;
  for (const auto& r : records) lines.push_back(dataset::encode(r));
  const fs::path path = out / dataset::ldj_filename("sft");
  dataset::write_ldj(path, "sft", lines);
  manifest.add_output(path);
  manifest.counts() = {{"records", records.size()}};
  manifest.write(out, kExitOk);
  return kExitOk;
}

int cmd_export_episodes(const CommandInput& in) {
  const Json& s = in.settings;
  const fs::path episodes_path = required_path(s, "episodes", "--episodes");
  const fs::path out = required_path(s, "out", "--out");
  if (!fs::exists(episodes_path)) throw UsageError("missing " + episodes_path.string());
  std::vector<dialogue::EpisodeOutcome> outcomes;
  for (const auto& j : dataset::read_ldj(episodes_path, "episodes")) {
    outcomes.push_back(dataset::decode_episode(j));
  }
  dataset::NoteIndex notes;
  if (s.contains("scenarios")) notes = dataset::index_notes(read_notes(s["scenarios"].get<std::string>()));

  prepare_out_dir(out, in.force);
  RunManifest manifest("export-episodes", in.args, s);
  manifest.add_input(episodes_path);
  const fs::path path = out / dataset::ldj_filename("rl_episodes");
  dataset::export_rl_episodes(outcomes, notes, path, s["closing_marker"].get<std::string>());
  manifest.add_output(path);
  std::size_t ok = 0;
  for (const auto& o : outcomes) ok += std::holds_alternative<dialogue::Episode>(o) ? 1 : 0;
  manifest.counts() = {{"episodes", outcomes.size()}, {"exported", ok},
                       {"skipped", outcomes.size() - ok}};
  manifest.write(out, kExitOk);
  return kExitOk;
}

}  // namespace arena::cli
