#include "asv/run_config.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <string_view>
#include <vector>

namespace asv {
namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view v, const std::string& key) {
  T out{};
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError("bad value for " + key + ": '" + std::string(v) + "'");
  return out;
}

bool parse_bool(std::string_view v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("bad value for " + key + ": '" + std::string(v) + "'");
}

struct Field {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

// Emission order; grouped run / world / rewards / trainer / net.
const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    auto str = [&f](const char* k, auto ref) {
      f.push_back({k, [ref](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)); },
                   [ref](RunConfig& c, std::string_view v) { ref(c) = std::string(v); }});
    };
    auto num = [&f](const char* k, auto ref) {
      using T = std::decay_t<decltype(ref(std::declval<RunConfig&>()))>;
      f.push_back({k,
                   [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); },
                   [ref, key = std::string(k)](RunConfig& c, std::string_view v) {
                     ref(c) = parse_number<T>(v, key);
                   }});
    };
    auto dbl = [&f](const char* k, auto ref) {
      f.push_back({k, [ref](const RunConfig& c) { return fmt_double(ref(const_cast<RunConfig&>(c))); },
                   [ref, key = std::string(k)](RunConfig& c, std::string_view v) {
                     ref(c) = parse_number<double>(v, key);
                   }});
    };
    auto bol = [&f](const char* k, auto ref) {
      f.push_back({k,
                   [ref](const RunConfig& c) {
                     return std::string(ref(const_cast<RunConfig&>(c)) ? "true" : "false");
                   },
                   [ref, key = std::string(k)](RunConfig& c, std::string_view v) {
                     ref(c) = parse_bool(v, key);
                   }});
    };

    str("scenario", [](RunConfig& c) -> std::string& { return c.scenario; });
    str("policy", [](RunConfig& c) -> std::string& { return c.policy; });
    str("out", [](RunConfig& c) -> std::string& { return c.out; });
    str("checkpoint", [](RunConfig& c) -> std::string& { return c.checkpoint; });
    num("episodes", [](RunConfig& c) -> int& { return c.episodes; });
    num("horizon", [](RunConfig& c) -> int& { return c.horizon; });
    num("jobs", [](RunConfig& c) -> int& { return c.jobs; });
    num("scouts", [](RunConfig& c) -> int& { return c.scouts; });
    num("cleaners", [](RunConfig& c) -> int& { return c.cleaners; });
    num("seed", [](RunConfig& c) -> uint64_t& { return c.seed; });
    bol("strict_determinism", [](RunConfig& c) -> bool& { return c.strict; });

    dbl("trash_count_mean", [](RunConfig& c) -> double& { return c.trash.count_mean; });
    dbl("trash_count_std", [](RunConfig& c) -> double& { return c.trash.count_std; });
    dbl("trash_sigma_spawn", [](RunConfig& c) -> double& { return c.trash.sigma_spawn; });
    dbl("wind_bound", [](RunConfig& c) -> double& { return c.trash.wind_bound; });
    dbl("noise_bound", [](RunConfig& c) -> double& { return c.trash.noise_bound; });

    dbl("reward_c_alpha", [](RunConfig& c) -> double& { return c.rewards.c_alpha; });
    dbl("reward_c_beta", [](RunConfig& c) -> double& { return c.rewards.c_beta; });
    dbl("reward_c_gamma", [](RunConfig& c) -> double& { return c.rewards.c_gamma; });
    dbl("reward_c_delta", [](RunConfig& c) -> double& { return c.rewards.c_delta; });

    num("train_episodes", [](RunConfig& c) -> int& { return c.trainer.episodes; });
    num("batch", [](RunConfig& c) -> int& { return c.trainer.batch; });
    dbl("lr", [](RunConfig& c) -> double& { return c.trainer.lr; });
    dbl("gamma", [](RunConfig& c) -> double& { return c.trainer.gamma; });
    num("target_sync", [](RunConfig& c) -> int& { return c.trainer.target_sync; });
    dbl("eps_start", [](RunConfig& c) -> double& { return c.trainer.eps_start; });
    dbl("eps_end", [](RunConfig& c) -> double& { return c.trainer.eps_end; });
    dbl("eps_fraction", [](RunConfig& c) -> double& { return c.trainer.eps_fraction; });
    dbl("per_alpha", [](RunConfig& c) -> double& { return c.trainer.per_alpha; });
    dbl("per_beta_start", [](RunConfig& c) -> double& { return c.trainer.per_beta_start; });
    dbl("per_beta_end", [](RunConfig& c) -> double& { return c.trainer.per_beta_end; });
    dbl("per_eps", [](RunConfig& c) -> double& { return c.trainer.per_eps; });
    num("capacity", [](RunConfig& c) -> size_t& { return c.trainer.capacity; });
    dbl("prefill", [](RunConfig& c) -> double& { return c.trainer.prefill; });
    bol("greedy_mix", [](RunConfig& c) -> bool& { return c.trainer.greedy_mix; });
    num("train_every", [](RunConfig& c) -> int& { return c.trainer.train_every; });
    num("min_fill_batches", [](RunConfig& c) -> int& { return c.trainer.min_fill_batches; });
    num("eval_every", [](RunConfig& c) -> int& { return c.trainer.eval_every; });
    num("eval_episodes", [](RunConfig& c) -> int& { return c.trainer.eval_episodes; });

    num("net_conv1", [](RunConfig& c) -> int& { return c.trainer.net.conv1; });
    num("net_conv2", [](RunConfig& c) -> int& { return c.trainer.net.conv2; });
    num("net_conv3", [](RunConfig& c) -> int& { return c.trainer.net.conv3; });
    num("net_fc1", [](RunConfig& c) -> int& { return c.trainer.net.fc1; });
    num("net_fc2", [](RunConfig& c) -> int& { return c.trainer.net.fc2; });
    num("net_fc3", [](RunConfig& c) -> int& { return c.trainer.net.fc3; });
    return f;
  }();
  return table;
}

const Field* find_field(std::string_view key) {
  for (const Field& f : fields())
    if (f.key == key) return &f;
  return nullptr;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    size_t eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value, got '" +
                        std::string(sv) + "'");
    std::string_view key = trim(sv.substr(0, eq));
    std::string_view value = trim(sv.substr(eq + 1));
    const Field* f = find_field(key);
    if (!f) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + std::string(key) + "'");
    f->set(base, value);
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

std::string emit_config(const RunConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) {
    out += f.key;
    out += '=';
    out += f.get(cfg);
    out += '\n';
  }
  return out;
}

WorldParams world_params(const RunConfig& cfg) {
  WorldParams w;
  w.trash = cfg.trash;
  w.horizon = cfg.horizon;
  return w;
}

FleetConfig fleet_config(const RunConfig& cfg) {
  FleetConfig f;
  f.scouts = cfg.scouts;
  f.cleaners = cfg.cleaners;
  return f;
}

}  // namespace asv
