#include <algorithm>
#include <map>
#include <set>

#include <spdlog/spdlog.h>

#include "arena/dataset/ldj.hpp"
#include "arena/dataset/records.hpp"
#include "context.hpp"

namespace arena::cli {

int cmd_simulate(const CommandInput& in) {
  const Json& s = in.settings;
  if (!s.contains("scenarios")) throw UsageError("--scenarios is required");
  if (!s.contains("out")) throw UsageError("--out is required");
  const fs::path dir = s["scenarios"].get<std::string>();
  const fs::path out = s["out"].get<std::string>();

  dialogue::BatchConfig batch;
  batch.educator = make_endpoint(s, "educator");
  batch.patient = make_endpoint(s, "patient");
  batch.dialogue.turn_cap = s["turn_cap"].get<int>();
  batch.dialogue.closing_marker = s["closing_marker"].get<std::string>();
  batch.parallelism = s["parallelism"].get<int>();
  if (batch.dialogue.turn_cap < 1) throw UsageError("--turn-cap must be >= 1");
  if (batch.parallelism < 1) throw UsageError("--parallelism must be >= 1");

  const auto notes = read_notes(dir);
  std::map<std::string, forge::ComprehensionExam> exams;
  for (auto& e : read_exams(dir)) exams.emplace(e.note_id, std::move(e));

  std::optional<std::set<std::string>> wanted;
  if (s.contains("split")) {
    const auto ids = read_split(dir, s["split"].get<std::string>());
    wanted.emplace(ids.begin(), ids.end());
  }
  std::vector<dialogue::Scenario> scenarios;
  for (const auto& note : notes) {
    if (wanted && !wanted->contains(note.note_id)) continue;
    const auto exam = exams.find(note.note_id);
    if (exam == exams.end()) throw UsageError("no exam for note " + note.note_id);
    scenarios.push_back({note.note_id, note, exam->second});
  }
  if (s.contains("limit")) {
    scenarios.resize(std::min(scenarios.size(), s["limit"].get<std::size_t>()));
  }
  if (scenarios.empty()) throw UsageError("no scenarios selected");

  prepare_out_dir(out, in.force);
  RunManifest manifest("simulate", in.args, s);
  for (const char* kind : {"notes", "exams"}) manifest.add_input(dir / dataset::ldj_filename(kind));
  for (const char* role : {"educator", "patient"}) {
    if (!s["endpoints"][role]["mock"].is_null()) {
      manifest.add_input(s["endpoints"][role]["mock"].get<std::string>());
    }
  }

  const auto outcomes = dialogue::run_batch(scenarios, batch);
  std::vector<Json> records;
  std::size_t ok = 0, endpoint_errors = 0;
  for (const auto& o : outcomes) {
    records.push_back(dataset::encode(o));
    if (std::holds_alternative<dialogue::Episode>(o)) {
      ++ok;
    } else {
      const auto& kind = std::get<dialogue::EpisodeError>(o).kind;
      if (kind == "EndpointUnreachable" || kind == "Timeout") ++endpoint_errors;
    }
  }
  const fs::path path = out / dataset::ldj_filename("episodes");
  dataset::write_ldj(path, "episodes", records);
  manifest.add_output(path);

  const std::size_t failed = outcomes.size() - ok;
  int exit_code = kExitOk;
  if (failed > 0) exit_code = ok == 0 && endpoint_errors == failed ? kExitEndpoint : kExitPartial;
  manifest.counts() = {{"scenarios", outcomes.size()}, {"episodes", ok}, {"errors", failed}};
  manifest.write(out, exit_code);
  spdlog::info("simulated {} scenarios: {} episodes, {} errors", outcomes.size(), ok, failed);
  return exit_code;
}

}  // namespace arena::cli
