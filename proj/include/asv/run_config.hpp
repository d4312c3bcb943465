#pragma once

#include <string>

#include "asv/episode.hpp"
#include "asv/rewards.hpp"
#include "asv/trainer.hpp"

namespace asv {

struct ConfigError : SimError {
  using SimError::SimError;
};

// Everything a run needs, with the defaults used when neither the config file
// nor a flag says otherwise.  `episodes` counts evaluation episodes; training
// length lives in trainer.episodes.
struct RunConfig {
  std::string scenario;
  std::string policy = "random";
  std::string out = "out";
  std::string checkpoint;
  int episodes = 100;
  int horizon = 150;
  int jobs = 1;
  int scouts = 2;
  int cleaners = 2;
  uint64_t seed = 1;
  bool strict = false;
  TrashParams trash;
  RewardWeights rewards;
  TrainerConfig trainer;
};

// key=value lines; '#' starts a comment, blank lines ignored, unknown keys
// rejected.  emit_config writes every key in a fixed order with shortest
// round-trip number formatting, so parse(emit(cfg)) == cfg and
// emit(parse(emit(cfg))) == emit(cfg).
RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});
std::string emit_config(const RunConfig& cfg);

WorldParams world_params(const RunConfig& cfg);
FleetConfig fleet_config(const RunConfig& cfg);

}  // namespace asv
