#include <cstdio>

#include <spdlog/spdlog.h>

#include "arena/dataset/ldj.hpp"
#include "arena/dataset/records.hpp"
#include "arena/forge/errors.hpp"
#include "arena/forge/generate.hpp"
#include "arena/gateway/errors.hpp"
#include "context.hpp"

namespace arena::cli {

namespace {

std::string scenario_id(std::size_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "scn-%05zu", ordinal);
  return buf;
}

}  // namespace

int cmd_generate(const CommandInput& in) {
  const Json& s = in.settings;
  if (!s.contains("n") || !s["n"].is_number_integer() || s["n"].get<long long>() < 1) {
    throw UsageError("--n must be a positive integer");
  }
  if (!s.contains("out")) throw UsageError("--out is required");
  const auto n = s["n"].get<std::size_t>();
  const fs::path out = s["out"].get<std::string>();
  const auto seed = s["seed"].get<std::uint64_t>();
  const std::size_t max_attempts =
      s.contains("max_attempts") ? s["max_attempts"].get<std::size_t>() : 2 * n + 10;

  const auto endpoint = make_endpoint(s, "generator");
  prepare_out_dir(out, in.force);
  RunManifest manifest("generate", in.args, s);
  if (!s["endpoints"]["generator"]["mock"].is_null()) {
    manifest.add_input(s["endpoints"]["generator"]["mock"].get<std::string>());
  }

  forge::GenerationOptions options;
  options.retry_budget = s["retry_budget"].get<int>();
  forge::ProfileSampler sampler(seed);
  auto backend = endpoint.make_backend();

  std::vector<Json> notes, exams, conversations, rejections;
  int exit_code = kExitOk;
  std::string endpoint_failure;
  std::size_t attempts = 0;
  while (notes.size() < n && attempts < max_attempts) {
    ++attempts;
    const auto profile = sampler.next();
    const std::string id = scenario_id(notes.size() + 1);
    forge::RejectionLog log;
    std::string stage = "note";
    try {
      const auto note = forge::generate_note(profile, id, *backend, endpoint.config, options, &log);
      stage = "exam";
      const auto exam = forge::generate_exam(note, *backend, endpoint.config, options, &log);
      stage = "conversation";
      const auto conv = forge::generate_reference_conversation(note, exam, *backend,
                                                               endpoint.config, options, &log);
      Json nj = dataset::encode(note);
      nj["profile"] = dataset::encode(profile);
      notes.push_back(std::move(nj));
      exams.push_back(dataset::encode(exam));
      conversations.push_back(dataset::encode(conv));
      spdlog::info("{} accepted", id);
    } catch (const forge::GenerationRejected& e) {
      spdlog::warn("{}: {} rejected: {}", id, stage, e.what());
      rejections.push_back({{"attempt", attempts},
                            {"scenario_id", id},
                            {"stage", stage},
                            {"error", e.what()},
                            {"reasons", log.reasons},
                            {"profile", dataset::encode(profile)}});
    } catch (const gateway::GatewayError& e) {
      spdlog::error("{}: generator endpoint failed: {}", id, e.what());
      endpoint_failure = e.what();
      exit_code = kExitEndpoint;
      break;
    }
  }
  if (exit_code == kExitOk && notes.size() < n) {
    spdlog::error("only {} of {} scenarios accepted after {} attempts", notes.size(), n, attempts);
    exit_code = kExitPartial;
  }

  const std::pair<const char*, const std::vector<Json>*> files[] = {
      {"notes", &notes}, {"exams", &exams}, {"conversations", &conversations},
      {"rejections", &rejections}};
  for (const auto& [kind, records] : files) {
    const fs::path path = out / dataset::ldj_filename(kind);
    dataset::write_ldj(path, kind, *records);
    manifest.add_output(path);
  }
  manifest.counts() = {{"requested", n},
                       {"accepted", notes.size()},
                       {"rejected", rejections.size()},
                       {"attempts", attempts}};
  if (!endpoint_failure.empty()) manifest.counts()["endpoint_error"] = endpoint_failure;
  manifest.write(out, exit_code);
  return exit_code;
}

}  // namespace arena::cli
