#include <cstdlib>
#include <set>

#include "doctest.h"

#include "arena/cli/cli.hpp"
#include "arena/dataset/exports.hpp"
#include "arena/dataset/ldj.hpp"
#include "arena/dataset/records.hpp"
#include "test_support.hpp"

using namespace arena;
namespace fs = std::filesystem;

namespace {

int arena_run(std::vector<std::string> args) {
  args.insert(args.begin(), "arena");
  args.insert(args.begin() + 1, {"--log-level", "error"});
  return cli::run(args);
}

std::string mock(const std::string& name) { return testing::fixture_path("mock/" + name).string(); }

void write(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

int generate(const fs::path& out, int n, std::vector<std::string> extra = {}) {
  std::vector<std::string> args{"generate", "--n", std::to_string(n), "--out", out.string(),
                                "--generator-mock", mock("generator.json")};
  args.insert(args.end(), extra.begin(), extra.end());
  return arena_run(args);
}

int simulate(const fs::path& scen, const fs::path& out, std::vector<std::string> extra = {}) {
  std::vector<std::string> args{"simulate", "--scenarios", scen.string(), "--out", out.string(),
                                "--educator-mock", mock("educator_never_close.json"),
                                "--patient-mock", mock("patient_answers_a.json")};
  args.insert(args.end(), extra.begin(), extra.end());
  return arena_run(args);
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(arena_run({}) == cli::kExitValidation);
  CHECK(arena_run({"generate", "--out", "x"}) == cli::kExitValidation);
  CHECK(arena_run({"bogus"}) == cli::kExitValidation);
  testing::TempDir dir("cli");
  CHECK(arena_run({"generate", "--n", "1", "--out", (dir / "g").string()}) == cli::kExitValidation);
}

TEST_CASE("generate writes the scenario files and a manifest") {
  testing::TempDir dir("cli");
  REQUIRE(generate(dir / "gen", 3) == cli::kExitOk);
  for (const char* f : {"notes.v1.ldj", "exams.v1.ldj", "conversations.v1.ldj", "rejections.v1.ldj",
                        "run_manifest.json"}) {
    CHECK(fs::exists(dir / "gen" / f));
  }
  const auto notes = dataset::read_ldj(dir / "gen/notes.v1.ldj", "notes");
  REQUIRE(notes.size() == 3);
  CHECK(notes[0]["note_id"] == "scn-00001");
  CHECK(notes[0].contains("profile"));
  const Json manifest = Json::parse(testing::read_text(dir / "gen/run_manifest.json"));
  CHECK(manifest["command"] == "generate");
  CHECK(manifest["exit_code"] == 0);
  CHECK(manifest["outputs"].size() >= 4);
  CHECK(manifest["config_digest"].get<std::string>().size() == 64);

  // A second run refuses the non-empty directory unless forced.
  CHECK(generate(dir / "gen", 3) == cli::kExitValidation);
  CHECK(generate(dir / "gen", 3, {"--force"}) == cli::kExitOk);
}

TEST_CASE("config files must be versioned") {
  testing::TempDir dir("cli");
  write(dir / "bad.json", R"({"seed": 1})");
  CHECK(arena_run({"--config", (dir / "bad.json").string(), "generate", "--n", "1", "--out",
                   (dir / "g").string(), "--generator-mock", mock("generator.json")}) ==
        cli::kExitValidation);
  write(dir / "good.json", R"({"version": 1, "seed": 4})");
  CHECK(arena_run({"--config", (dir / "good.json").string(), "generate", "--n", "1", "--out",
                   (dir / "g").string(), "--generator-mock", mock("generator.json")}) == cli::kExitOk);
  const Json manifest = Json::parse(testing::read_text(dir / "g/run_manifest.json"));
  CHECK(manifest["seed"] == 4);
}

TEST_CASE("unreachable endpoints exit with code 3") {
  testing::TempDir dir("cli");
  write(dir / "down.json", R"({"entries": [{"reply": "", "fail": "unreachable"}], "cycle": true})");
  CHECK(arena_run({"generate", "--n", "1", "--out", (dir / "g").string(), "--generator-mock",
                   (dir / "down.json").string()}) == cli::kExitEndpoint);
  REQUIRE(generate(dir / "gen", 2) == cli::kExitOk);
  CHECK(arena_run({"simulate", "--scenarios", (dir / "gen").string(), "--out", (dir / "s").string(),
                   "--educator-mock", mock("educator_never_close.json"), "--patient-mock",
                   (dir / "down.json").string()}) == cli::kExitEndpoint);
}

TEST_CASE("rejected scenarios give a partial exit") {
  testing::TempDir dir("cli");
  write(dir / "junk.json", R"({"entries": [{"reply": "not a note"}], "cycle": true})");
  CHECK(arena_run({"generate", "--n", "2", "--out", (dir / "g").string(), "--generator-mock",
                   (dir / "junk.json").string(), "--max-attempts", "2"}) == cli::kExitPartial);
  CHECK(dataset::read_ldj(dir / "g/rejections.v1.ldj", "rejections").size() >= 2);
}

TEST_CASE("simulate, score and export chain") {
  testing::TempDir dir("cli");
  REQUIRE(generate(dir / "gen", 3) == cli::kExitOk);
  REQUIRE(simulate(dir / "gen", dir / "sim", {"--turn-cap", "4", "--parallelism", "2"}) == cli::kExitOk);
  const auto eps = dataset::read_ldj(dir / "sim/episodes.v1.ldj", "episodes");
  REQUIRE(eps.size() == 3);
  for (const auto& e : eps) {
    const auto outcome = dataset::decode_episode(e);
    REQUIRE(std::holds_alternative<dialogue::Episode>(outcome));
    CHECK(std::get<dialogue::Episode>(outcome).transcript.exchange_pairs() == 4);
  }

  REQUIRE(arena_run({"score", "--episodes", (dir / "sim/episodes.v1.ldj").string(), "--scenarios",
                     (dir / "gen").string(), "--out", (dir / "score").string(), "--judge-mock",
                     mock("judge.json"), "--window", "2"}) == cli::kExitOk);
  const auto plot = dataset::read_ldj(dir / "score/plot_data.v1.ldj", "plot_data");
  std::set<std::string> metrics;
  for (const auto& p : plot) metrics.insert(p["metric"].get<std::string>());
  CHECK(metrics.count("reward"));
  CHECK(metrics.count("fkgl"));
  CHECK(metrics.count("bleu"));
  CHECK(metrics.count("rouge_l"));
  CHECK(metrics.count("content.Medication"));
  CHECK(metrics.count("strategy.ProvidingInformation"));
  CHECK(dataset::read_ldj(dir / "score/reports.v1.ldj", "reports").size() == 3);

  REQUIRE(arena_run({"score", "--episodes", (dir / "sim/episodes.v1.ldj").string(), "--out",
                     (dir / "score2").string(), "--metrics", "reward,fkgl"}) == cli::kExitOk);

  REQUIRE(arena_run({"export-sft", "--scenarios", (dir / "gen").string(), "--out",
                     (dir / "sft").string()}) == cli::kExitOk);
  CHECK(dataset::read_sft(dir / "sft/sft.v1.ldj").size() == 3);
  REQUIRE(arena_run({"export-episodes", "--episodes", (dir / "sim/episodes.v1.ldj").string(),
                     "--scenarios", (dir / "gen").string(), "--out", (dir / "rl").string()}) ==
          cli::kExitOk);
  const auto rl = dataset::read_rl_episodes(dir / "rl/rl_episodes.v1.ldj");
  REQUIRE(rl.size() == 3);
  CHECK(rl[0].system.has_value());
}

TEST_CASE("score rejects empty input") {
  testing::TempDir dir("cli");
  dataset::write_ldj(dir / "episodes.v1.ldj", "episodes", {});
  CHECK(arena_run({"score", "--episodes", (dir / "episodes.v1.ldj").string(), "--out",
                   (dir / "s").string(), "--metrics", "reward"}) == cli::kExitValidation);
}

TEST_CASE("partition writes splits and a dataset manifest") {
  testing::TempDir dir("cli");
  std::string ids;
  for (int i = 0; i < 200; ++i) ids += "id-" + std::to_string(i) + "\n";
  write(dir / "ids.txt", ids);
  REQUIRE(arena_run({"--seed", "3", "partition", "--ids", (dir / "ids.txt").string(), "--out",
                     (dir / "p").string()}) == cli::kExitOk);
  const auto rows = dataset::read_ldj(dir / "p/splits.v1.ldj", "splits");
  CHECK(rows.size() == 200);
  const Json m = Json::parse(testing::read_text(dir / "p/manifest.json"));
  CHECK(m["schema"] == "arena.dataset_manifest");
  CHECK(m["splits"]["train"].size() == 160);
  CHECK(m["splits"]["validation"].size() == 38);
  CHECK(m["splits"]["test"].size() == 2);
  write(dir / "few.txt", "a\nb\n");
  CHECK(arena_run({"partition", "--ids", (dir / "few.txt").string(), "--out", (dir / "q").string()}) ==
        cli::kExitValidation);
}
