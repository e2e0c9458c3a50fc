#include <algorithm>
#include <atomic>
#include <thread>

#include <spdlog/spdlog.h>

#include "arena/dialogue/arena.hpp"
#include "arena/gateway/errors.hpp"

namespace arena::dialogue {

namespace {

EpisodeOutcome run_one(const Scenario& scenario, const BatchConfig& config) {
  try {
    auto educator = config.educator.make_backend();
    auto patient = config.patient.make_backend();
    return run_episode(scenario, *educator, config.educator.config, *patient,
                       config.patient.config, config.dialogue);
  } catch (const DialogueError& e) {
    spdlog::warn("{}: {}: {}", scenario.scenario_id, to_string(e.kind()), e.what());
    return EpisodeError{scenario.scenario_id, std::string(to_string(e.kind())),
                        e.what(), e.partial()};
  } catch (const std::exception& e) {
    spdlog::warn("{}: {}", scenario.scenario_id, e.what());
    return EpisodeError{scenario.scenario_id, "Error", e.what(), std::nullopt};
  }
}

}  // namespace

std::vector<EpisodeOutcome> run_batch(std::span<const Scenario> scenarios,
                                      const BatchConfig& config) {
  if (!config.educator.make_backend || !config.patient.make_backend) {
    throw std::invalid_argument("batch endpoints need backend factories");
  }
  std::vector<EpisodeOutcome> out(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      out[i] = run_one(scenarios[i], config);
    }
  };
  const auto workers = static_cast<std::size_t>(std::clamp(
      config.parallelism, 1, static_cast<int>(std::max<std::size_t>(scenarios.size(), 1))));
  if (workers == 1) {
    worker();
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  pool.clear();
  return out;
}

}  // namespace arena::dialogue
