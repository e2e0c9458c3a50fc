#include <map>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "arena/dataset/ldj.hpp"
#include "arena/dataset/records.hpp"
#include "arena/judge/report.hpp"
#include "arena/metrics/metrics.hpp"
#include "context.hpp"

namespace arena::cli {

namespace {

const std::set<std::string> kKnownMetrics{"reward", "fkgl", "bleu", "rouge_l", "content",
                                          "strategy"};

std::set<std::string> select_metrics(const Json& s) {
  std::set<std::string> out;
  if (s.contains("metrics")) {
    std::stringstream ss(s["metrics"].get<std::string>());
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (name.empty()) continue;
      if (name == "rouge") name = "rouge_l";
      if (!kKnownMetrics.contains(name)) throw UsageError("unknown metric: " + name);
      out.insert(name);
    }
    if (out.empty()) throw UsageError("--metrics selects nothing");
    return out;
  }
  out = {"reward", "fkgl"};
  if (s.contains("scenarios")) out.insert({"bleu", "rouge_l"});
  if (endpoint_configured(s, "judge")) out.insert({"content", "strategy"});
  return out;
}

std::string error_text(const std::exception& e) { return e.what(); }

}  // namespace

int cmd_score(const CommandInput& in) {
  const Json& s = in.settings;
  if (!s.contains("episodes")) throw UsageError("--episodes is required");
  if (!s.contains("out")) throw UsageError("--out is required");
  const fs::path episodes_path = s["episodes"].get<std::string>();
  const fs::path out = s["out"].get<std::string>();
  const auto metrics_wanted = select_metrics(s);
  const auto want = [&](const char* m) { return metrics_wanted.contains(m); };

  std::map<std::string, forge::ReferenceConversation> references;
  if (want("bleu") || want("rouge_l")) {
    if (!s.contains("scenarios")) throw UsageError("bleu/rouge_l need --scenarios for references");
    for (auto& c : read_conversations(s["scenarios"].get<std::string>())) {
      references.emplace(c.note_id, std::move(c));
    }
  }
  std::optional<gateway::Endpoint> judge_endpoint;
  if (want("content") || want("strategy")) judge_endpoint = make_endpoint(s, "judge");

  if (!fs::exists(episodes_path)) throw UsageError("missing " + episodes_path.string());
  if (fs::file_size(episodes_path) == 0) {
    throw metrics::EmptyInput("EmptyInput: " + episodes_path.string() + " is empty");
  }
  std::vector<dialogue::EpisodeOutcome> outcomes;
  for (const auto& j : dataset::read_ldj(episodes_path, "episodes")) {
    outcomes.push_back(dataset::decode_episode(j));
  }
  if (outcomes.empty()) {
    throw metrics::EmptyInput("EmptyInput: " + episodes_path.string() + " holds no transcripts");
  }

  prepare_out_dir(out, in.force);
  RunManifest manifest("score", in.args, s);
  manifest.add_input(episodes_path);
  if (s.contains("scenarios") && (want("bleu") || want("rouge_l"))) {
    manifest.add_input(fs::path(s["scenarios"].get<std::string>()) /
                       dataset::ldj_filename("conversations"));
  }
  if (judge_endpoint && !s["endpoints"]["judge"]["mock"].is_null()) {
    manifest.add_input(s["endpoints"]["judge"]["mock"].get<std::string>());
  }

  std::map<std::string, std::vector<double>> series;
  std::vector<Json> reports;
  std::size_t scored = 0, skipped = 0, cell_errors = 0;
  for (const auto& o : outcomes) {
    if (const auto* err = std::get_if<dialogue::EpisodeError>(&o)) {
      reports.push_back({{"scenario_id", err->scenario_id}, {"skipped", err->kind}});
      ++skipped;
      continue;
    }
    const auto& ep = std::get<dialogue::Episode>(o);
    Json r{{"scenario_id", ep.scenario_id}};
    if (want("reward")) {
      r["reward"] = ep.reward;
      series["reward"].push_back(ep.reward);
    }
    if (want("fkgl")) {
      try {
        const auto b = metrics::fkgl(ep.transcript);
        r["readability"] = {{"words", b.words},
                            {"sentences", b.sentences},
                            {"syllables", b.syllables},
                            {"grade", b.grade}};
        series["fkgl"].push_back(b.grade);
      } catch (const std::exception& e) {
        r["readability"] = {{"error", error_text(e)}};
        ++cell_errors;
      }
    }
    if (want("bleu") || want("rouge_l")) {
      Json ov;
      const auto ref = references.find(ep.scenario_id);
      try {
        if (ref == references.end()) {
          throw metrics::EmptyInput("no reference conversation for " + ep.scenario_id);
        }
        const auto scores = metrics::overlap(ep.transcript, ref->second);
        ov["pairs"] = scores.pairs;
        if (want("bleu")) {
          ov["bleu"] = scores.bleu;
          series["bleu"].push_back(scores.bleu);
        }
        if (want("rouge_l")) {
          ov["rouge_l"] = scores.rouge_l;
          series["rouge_l"].push_back(scores.rouge_l);
        }
      } catch (const std::exception& e) {
        ov = {{"error", error_text(e)}};
        ++cell_errors;
      }
      r["overlap"] = ov;
    }
    if (judge_endpoint) {
      auto backend = judge_endpoint->make_backend();
      try {
        const auto report = judge::judge_report(ep.transcript, *backend, judge_endpoint->config);
        const Json full = dataset::encode(report);
        if (want("content")) {
          r["content"] = full["content"];
          r["labelings"] = full["labelings"];
          for (const auto& cell : report.content) {
            if (cell.score) {
              series["content." + std::string(judge::name(cell.category))].push_back(*cell.score);
            } else {
              ++cell_errors;
            }
          }
        }
        if (want("strategy")) {
          r["strategy"] = full["strategy"];
          r["strategy_raw"] = full["strategy_raw"];
          for (const auto& cell : report.strategy) {
            if (cell.score) {
              series["strategy." + std::string(judge::name(cell.category))].push_back(*cell.score);
            } else {
              ++cell_errors;
            }
          }
        }
      } catch (const std::exception& e) {
        if (want("content")) r["content"] = {{"error", error_text(e)}};
        if (want("strategy")) r["strategy"] = {{"error", error_text(e)}};
        ++cell_errors;
      }
    }
    reports.push_back(std::move(r));
    ++scored;
  }

  std::vector<Json> plot;
  const auto window = s["window"].get<std::size_t>();
  const auto level = s["level"].get<double>();
  for (const auto& [metric, values] : series) {
    for (const auto& p : metrics::plot_series(metric, values, window, level)) {
      plot.push_back(dataset::encode(p));
    }
  }

  const fs::path reports_path = out / dataset::ldj_filename("reports");
  const fs::path plot_path = out / dataset::ldj_filename("plot_data");
  dataset::write_ldj(reports_path, "reports", reports);
  dataset::write_ldj(plot_path, "plot_data", plot);
  manifest.add_output(reports_path);
  manifest.add_output(plot_path);

  std::vector<std::string> names(metrics_wanted.begin(), metrics_wanted.end());
  manifest.counts() = {{"episodes", outcomes.size()},
                       {"scored", scored},
                       {"skipped", skipped},
                       {"cell_errors", cell_errors},
                       {"metrics", names}};
  const int exit_code = cell_errors > 0 ? kExitPartial : kExitOk;
  manifest.write(out, exit_code);
  return exit_code;
}

}  // namespace arena::cli
