#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "arena/cli/cli.hpp"
#include "arena/common/json.hpp"
#include "arena/dialogue/arena.hpp"
#include "arena/forge/conversation.hpp"
#include "arena/forge/exam.hpp"
#include "arena/forge/note.hpp"
#include "arena/gateway/backend.hpp"

namespace arena::cli {

namespace fs = std::filesystem;

/// Bad flags, bad input files, refused output directory: exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Built-in settings; a config file and then flags are merged over these.
Json default_settings();
/// Reads and checks a versioned config file.
Json load_config(const fs::path& path);

/// Endpoint for `role` ("generator", "educator", "patient", "judge",
/// "chatbot") from settings: a mock script when endpoints.<role>.mock is
/// set, the HTTP client otherwise; wrapped by the replay cache when one is
/// configured. Throws UsageError when neither a mock nor a URL is given.
gateway::Endpoint make_endpoint(const Json& settings, const std::string& role);
bool endpoint_configured(const Json& settings, const std::string& role);

class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> args, const Json& settings);

  void add_input(const fs::path& path);
  void add_output(const fs::path& path);
  Json& counts() { return counts_; }
  /// Writes <dir>/run_manifest.json.
  void write(const fs::path& dir, int exit_code) const;

 private:
  std::string command_;
  std::vector<std::string> args_;
  std::string config_digest_;
  Json seed_;
  std::string started_at_;
  Json inputs_ = Json::array();
  Json outputs_ = Json::array();
  Json counts_ = Json::object();
};

/// Creates `dir`; refuses a non-empty existing directory unless `force`.
void prepare_out_dir(const fs::path& dir, bool force);

/// Scenario directory contents.
std::vector<forge::DischargeNote> read_notes(const fs::path& dir);
std::vector<forge::ComprehensionExam> read_exams(const fs::path& dir);
std::vector<forge::ReferenceConversation> read_conversations(const fs::path& dir);
/// Ids assigned to `split` in <dir>/splits.v1.ldj.
std::vector<std::string> read_split(const fs::path& dir, const std::string& split);

struct CommandInput {
  std::vector<std::string> args;
  Json settings;
  bool force = false;
};

int cmd_generate(const CommandInput& in);
int cmd_simulate(const CommandInput& in);
int cmd_score(const CommandInput& in);
int cmd_export_sft(const CommandInput& in);
int cmd_export_episodes(const CommandInput& in);
int cmd_partition(const CommandInput& in);
int cmd_serve(const CommandInput& in);

}  // namespace arena::cli
