#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "arena/cli/cli.hpp"
#include "arena/common/prompts.hpp"
#include "arena/dataset/exports.hpp"
#include "arena/dataset/ldj.hpp"
#include "arena/dataset/splits.hpp"
#include "arena/gateway/errors.hpp"
#include "arena/metrics/metrics.hpp"
#include "context.hpp"

namespace arena::cli {

namespace {

enum class Kind { kString, kInt, kUInt, kReal };

/// Flags only override settings they were given for, so config file
/// values survive unless the command line says otherwise.
class Overrides {
 public:
  CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& pointer, Kind kind,
                   const std::string& help) {
    return app->add_option_function<std::string>(
        flag,
        [this, pointer, kind, flag](const std::string& v) {
          values_[Json::json_pointer(pointer)] = convert(flag, v, kind);
        },
        help);
  }
  const Json& values() const { return values_; }

 private:
  static Json convert(const std::string& flag, const std::string& v, Kind kind) {
    try {
      std::size_t used = 0;
      switch (kind) {
        case Kind::kString:
          return v;
        case Kind::kInt: {
          const auto x = std::stoll(v, &used);
          if (used != v.size()) break;
          return x;
        }
        case Kind::kUInt: {
          if (!v.empty() && v[0] == '-') break;
          const auto x = std::stoull(v, &used);
          if (used != v.size()) break;
          return x;
        }
        case Kind::kReal: {
          const auto x = std::stod(v, &used);
          if (used != v.size()) break;
          return x;
        }
      }
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError(flag, "bad value '" + v + "'");
  }

  Json values_ = Json::object();
};

void add_endpoint_flags(Overrides& o, CLI::App* app, const std::string& role) {
  const std::string base = "/endpoints/" + role + "/";
  o.add(app, "--" + role + "-url", base + "url", Kind::kString,
        role + " endpoint base URL (OpenAI-compatible)");
  o.add(app, "--" + role + "-model", base + "model", Kind::kString, role + " model name");
  o.add(app, "--" + role + "-preset", base + "preset", Kind::kString,
        "hosted (temperature 0.6) or local (temperature 0.2)");
  o.add(app, "--" + role + "-temperature", base + "temperature", Kind::kReal,
        "sampling temperature, overrides the preset");
  o.add(app, "--" + role + "-max-tokens", base + "max_tokens", Kind::kInt,
        "maximum new tokens per reply");
  o.add(app, "--" + role + "-mock", base + "mock", Kind::kString,
        "mock script (JSON) instead of a live endpoint");
  o.add(app, "--" + role + "-api-key-env", base + "api_key_env", Kind::kString,
        "environment variable holding the API key");
  o.add(app, "--" + role + "-seed", base + "seed", Kind::kInt, "sampling seed sent to the endpoint");
  o.add(app, "--" + role + "-timeout", base + "timeout_seconds", Kind::kReal,
        "request timeout in seconds");
  o.add(app, "--" + role + "-retries", base + "max_retries", Kind::kInt,
        "retries after a failed request");
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Simulation, scoring and dataset tooling for patient-education dialogue agents",
               "arena"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "arena 0.1.0");

  std::string config_path;
  std::string log_level = "info";
  bool force = false;
  Overrides o;
  app.add_option("--config", config_path, "versioned JSON config; flags override its values");
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error")
      ->capture_default_str();
  app.add_flag("--force", force, "overwrite a non-empty output directory");
  o.add(&app, "--seed", "/seed", Kind::kUInt, "seed for every random choice (default 0)");
  o.add(&app, "--prompts-dir", "/prompts_dir", Kind::kString,
        "directory with <name>.txt prompt overrides");
  o.add(&app, "--replay-cache", "/replay_cache", Kind::kString,
        "record/replay directory for endpoint replies");

  auto* generate = app.add_subcommand("generate", "generate note/exam/conversation scenarios");
  o.add(generate, "--n", "/n", Kind::kUInt, "number of accepted scenarios")->required();
  o.add(generate, "--out", "/out", Kind::kString, "output directory")->required();
  o.add(generate, "--max-attempts", "/max_attempts", Kind::kUInt,
        "profile draws before giving up (default 2n+10)");
  o.add(generate, "--retry-budget", "/retry_budget", Kind::kInt,
        "regenerations per stage after an invalid reply (default 3)");
  add_endpoint_flags(o, generate, "generator");

  auto* simulate = app.add_subcommand("simulate", "run educator/patient episodes");
  o.add(simulate, "--scenarios", "/scenarios", Kind::kString, "directory written by generate")
      ->required();
  o.add(simulate, "--out", "/out", Kind::kString, "output directory")->required();
  o.add(simulate, "--turn-cap", "/turn_cap", Kind::kInt, "exchange pairs per dialogue (default 20)");
  o.add(simulate, "--parallelism", "/parallelism", Kind::kInt, "concurrent episodes (default 1)");
  o.add(simulate, "--closing-marker", "/closing_marker", Kind::kString,
        "token that ends a dialogue early");
  o.add(simulate, "--split", "/split", Kind::kString,
        "only ids of this split (needs splits.v1.ldj in the scenario directory)");
  o.add(simulate, "--limit", "/limit", Kind::kUInt, "at most this many scenarios");
  add_endpoint_flags(o, simulate, "educator");
  add_endpoint_flags(o, simulate, "patient");

  auto* score = app.add_subcommand("score", "score episodes and write plot data");
  o.add(score, "--episodes", "/episodes", Kind::kString, "episodes.v1.ldj")->required();
  o.add(score, "--out", "/out", Kind::kString, "output directory")->required();
  o.add(score, "--scenarios", "/scenarios", Kind::kString,
        "scenario directory (reference conversations for bleu/rouge_l)");
  o.add(score, "--metrics", "/metrics", Kind::kString,
        "comma list of reward,fkgl,bleu,rouge_l,content,strategy");
  o.add(score, "--window", "/window", Kind::kUInt, "episodes per plot point (default 100)");
  o.add(score, "--level", "/level", Kind::kReal, "confidence level (default 0.95)");
  add_endpoint_flags(o, score, "judge");

  auto* export_sft = app.add_subcommand("export-sft", "write the fine-tuning corpus");
  o.add(export_sft, "--scenarios", "/scenarios", Kind::kString, "scenario directory")->required();
  o.add(export_sft, "--out", "/out", Kind::kString, "output directory")->required();
  o.add(export_sft, "--split", "/split", Kind::kString, "only ids of this split");
  o.add(export_sft, "--splits", "/splits", Kind::kString,
        "directory holding splits.v1.ldj (default: the scenario directory)");
  o.add(export_sft, "--closing-marker", "/closing_marker", Kind::kString,
        "closing token named in the system prompt");

  auto* export_episodes = app.add_subcommand("export-episodes", "write trainer episode records");
  o.add(export_episodes, "--episodes", "/episodes", Kind::kString, "episodes.v1.ldj")->required();
  o.add(export_episodes, "--out", "/out", Kind::kString, "output directory")->required();
  o.add(export_episodes, "--scenarios", "/scenarios", Kind::kString,
        "scenario directory (adds the educator system prompt)");
  o.add(export_episodes, "--closing-marker", "/closing_marker", Kind::kString,
        "closing token named in the system prompt");

  auto* partition = app.add_subcommand("partition", "split scenario ids into train/validation/test");
  o.add(partition, "--scenarios", "/scenarios", Kind::kString, "scenario directory");
  o.add(partition, "--ids", "/ids", Kind::kString, "file with one id per line");
  o.add(partition, "--out", "/out", Kind::kString, "output directory")->required();

  auto* serve = app.add_subcommand("serve", "host live blinded chat sessions");
  o.add(serve, "--scenarios", "/scenarios", Kind::kString, "scenario directory")->required();
  o.add(serve, "--out", "/out", Kind::kString, "directory for the run manifest")->required();
  o.add(serve, "--host", "/host", Kind::kString, "bind address (default 127.0.0.1)");
  o.add(serve, "--port", "/port", Kind::kInt, "port, 0 for any (default 8080)");
  o.add(serve, "--port-file", "/port_file", Kind::kString, "write the bound port here");
  o.add(serve, "--session-seconds", "/session_seconds", Kind::kReal,
        "chat budget per session (default 900)");
  add_endpoint_flags(o, serve, "chatbot");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  auto logger = spdlog::get("arena");
  if (!logger) logger = spdlog::stderr_color_mt("arena");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    Json settings = default_settings();
    if (!config_path.empty()) settings.merge_patch(load_config(config_path));
    settings.merge_patch(o.values());
    if (!settings["prompts_dir"].is_null()) {
      prompts::set_override_dir(settings["prompts_dir"].get<std::string>());
    }
    CommandInput in{args, settings, force};
    CLI::App* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    int code = kExitValidation;
    if (name == "generate") code = cmd_generate(in);
    if (name == "simulate") code = cmd_simulate(in);
    if (name == "score") code = cmd_score(in);
    if (name == "export-sft") code = cmd_export_sft(in);
    if (name == "export-episodes") code = cmd_export_episodes(in);
    if (name == "partition") code = cmd_partition(in);
    if (name == "serve") code = cmd_serve(in);
    return code;
  } catch (const gateway::GatewayError& e) {
    spdlog::error("endpoint error: {}", e.what());
    return kExitEndpoint;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  }
}

}  // namespace arena::cli
