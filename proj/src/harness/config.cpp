// SPDX-License-Identifier: Apache-2.0
#include "semevo/harness/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace semevo {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw Error(ErrorCode::kConfig, "invalid value '" + value + "' for key '" + key + "'");
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  bad_value(key, v);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(bool v) { return v ? "true" : "false"; }

const char* to_string(SingularPolicy p) { return p == SingularPolicy::kStrict ? "strict" : "fallback"; }
const char* to_string(GdOptimizer o) { return o == GdOptimizer::kPlain ? "plain" : "adam"; }
const char* to_string(toy::SclDenominator d) {
  return d == toy::SclDenominator::kNegatives ? "negatives" : "all";
}

template <typename E, std::size_t N>
E parse_enum(const std::string& key, const std::string& v, const E (&all)[N]) {
  for (E e : all) {
    if (v == to_string(e)) return e;
  }
  bad_value(key, v);
}

struct Key {
  const char* name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

#define SEMEVO_SIZE(field)                                                        \
  Key {                                                                           \
    #field, [](const RunConfig& c) { return std::to_string(c.field); },            \
        [](RunConfig& c, const std::string& v) {                                  \
          c.field = static_cast<decltype(c.field)>(to_u64(#field, v));            \
        }                                                                         \
  }
#define SEMEVO_REAL(name, field)                                                  \
  Key {                                                                           \
    name, [](const RunConfig& c) { return fmt(c.field); },                         \
        [](RunConfig& c, const std::string& v) { c.field = to_double(name, v); }  \
  }
#define SEMEVO_BOOL(name, field)                                                  \
  Key {                                                                           \
    name, [](const RunConfig& c) { return fmt(c.field); },                         \
        [](RunConfig& c, const std::string& v) { c.field = to_bool(name, v); }    \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"source", [](const RunConfig& c) { return std::string(to_string(c.source)); },
       [](RunConfig& c, const std::string& v) {
         c.source = parse_enum("source", v,
                               {SourceKind::kSynthetic, SourceKind::kToy, SourceKind::kDump});
       }},
      {"split", [](const RunConfig& c) { return std::string(to_string(c.split)); },
       [](RunConfig& c, const std::string& v) {
         c.split = parse_enum("split", v, {SplitKind::kCold, SplitKind::kWarm});
       }},
      SEMEVO_SIZE(num_tasks),
      SEMEVO_SIZE(total_classes),
      SEMEVO_SIZE(dimension),
      SEMEVO_REAL("cluster_separation", cluster_separation),
      SEMEVO_REAL("cluster_spread", cluster_spread),
      SEMEVO_SIZE(train_per_class),
      SEMEVO_SIZE(test_per_class),
      SEMEVO_SIZE(test_limit_per_class),
      {"drift_kind", [](const RunConfig& c) { return std::string(to_string(c.drift.kind)); },
       [](RunConfig& c, const std::string& v) { c.drift.kind = parse_drift_kind(v); }},
      SEMEVO_REAL("drift_magnitude", drift.magnitude),
      SEMEVO_REAL("drift_scale", drift.scale),
      SEMEVO_REAL("observation_noise", drift.observation_noise),
      SEMEVO_REAL("drift_condition_bound", drift.condition_bound),
      SEMEVO_REAL("drift_nonlinear_amplitude", drift.nonlinear_amplitude),
      SEMEVO_REAL("drift_nonlinear_frequency", drift.nonlinear_frequency),
      SEMEVO_SIZE(toy_in_dim),
      SEMEVO_SIZE(toy_hidden),
      SEMEVO_SIZE(toy_epochs),
      SEMEVO_REAL("toy_lr", toy_lr),
      SEMEVO_SIZE(toy_batch),
      SEMEVO_BOOL("toy_adaptive_lr", toy_adaptive_lr),
      SEMEVO_REAL("lambda1", loss_weights.lambda1),
      SEMEVO_REAL("lambda2", loss_weights.lambda2),
      SEMEVO_REAL("tau", loss_weights.tau),
      SEMEVO_BOOL("kd_renormalize", loss_options.kd_renormalize),
      SEMEVO_BOOL("scl_normalize", loss_options.scl_normalize),
      {"scl_denominator",
       [](const RunConfig& c) { return std::string(to_string(c.loss_options.scl_denominator)); },
       [](RunConfig& c, const std::string& v) {
         if (v == "negatives") {
           c.loss_options.scl_denominator = toy::SclDenominator::kNegatives;
         } else if (v == "all") {
           c.loss_options.scl_denominator = toy::SclDenominator::kAll;
         } else {
           bad_value("scl_denominator", v);
         }
       }},
      {"dump_paths",
       [](const RunConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.dump_paths.size(); ++i) {
           if (i) out += ',';
           out += c.dump_paths[i];
         }
         return out;
       },
       [](RunConfig& c, const std::string& v) {
         c.dump_paths.clear();
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) {
           item = trim(item);
           if (!item.empty()) c.dump_paths.push_back(item);
         }
       }},
      SEMEVO_SIZE(queue_capacity),
      SEMEVO_REAL("noise_scale", noise_scale),
      SEMEVO_SIZE(update_stride),
      SEMEVO_SIZE(resolve_stride),
      SEMEVO_REAL("ridge", ridge),
      SEMEVO_REAL("min_ridge", min_ridge),
      {"singular_policy", [](const RunConfig& c) { return std::string(to_string(c.singular_policy)); },
       [](RunConfig& c, const std::string& v) {
         c.singular_policy =
             parse_enum("singular_policy", v, {SingularPolicy::kStrict, SingularPolicy::kFallback});
       }},
      SEMEVO_REAL("cond_threshold", cond_threshold),
      {"solver", [](const RunConfig& c) { return std::string(to_string(c.solver)); },
       [](RunConfig& c, const std::string& v) {
         c.solver = parse_enum("solver", v,
                               {SolverKind::kNone, SolverKind::kAnalytic, SolverKind::kGd,
                                SolverKind::kGdWithQueue});
       }},
      SEMEVO_REAL("gd_lr", gd_lr),
      SEMEVO_SIZE(gd_steps),
      {"gd_optimizer", [](const RunConfig& c) { return std::string(to_string(c.gd_optimizer)); },
       [](RunConfig& c, const std::string& v) {
         c.gd_optimizer = parse_enum("gd_optimizer", v, {GdOptimizer::kPlain, GdOptimizer::kAdam});
       }},
      {"gd_init", [](const RunConfig& c) { return std::string(to_string(c.gd_init)); },
       [](RunConfig& c, const std::string& v) {
         c.gd_init = parse_enum("gd_init", v, {GdInit::kIdentity, GdInit::kTrained, GdInit::kRandom});
       }},
      {"gd_queue_init", [](const RunConfig& c) { return std::string(to_string(c.gd_queue_init)); },
       [](RunConfig& c, const std::string& v) {
         c.gd_queue_init = parse_enum("gd_queue_init", v, {QueueInit::kPseudo, QueueInit::kEmpty});
       }},
      SEMEVO_BOOL("train_projector", train_projector),
      SEMEVO_BOOL("affine_projector", affine_projector),
      SEMEVO_BOOL("predict_before_update", predict_before_update),
      {"test_balance", [](const RunConfig& c) { return std::string(to_string(c.test_balance)); },
       [](RunConfig& c, const std::string& v) {
         c.test_balance =
             parse_enum("test_balance", v, {TestBalance::kBalanced, TestBalance::kUnbalanced});
       }},
      SEMEVO_REAL("unbalanced_fraction", unbalanced_fraction),
      SEMEVO_BOOL("replay_audit", replay_audit),
      SEMEVO_REAL("oracle_tol", oracle_tol),
      SEMEVO_SIZE(oracle_max_steps),
      SEMEVO_SIZE(curve_points),
      SEMEVO_SIZE(seed),
      SEMEVO_SIZE(stream_seed),
      {"output_dir", [](const RunConfig& c) { return c.output_dir; },
       [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
  };
  return table;
}

#undef SEMEVO_SIZE
#undef SEMEVO_REAL
#undef SEMEVO_BOOL

std::string canonical_without(const RunConfig& config, const std::set<std::string>& skip) {
  std::string out;
  for (const Key& k : keys()) {
    if (skip.count(k.name)) continue;
    out += k.name;
    out += " = ";
    out += k.get(config);
    out += '\n';
  }
  return out;
}

}  // namespace

const char* to_string(SourceKind v) {
  switch (v) {
    case SourceKind::kSynthetic: return "synthetic";
    case SourceKind::kToy: return "toy";
    case SourceKind::kDump: return "dump";
  }
  return "unknown";
}

const char* to_string(SplitKind v) { return v == SplitKind::kCold ? "cold" : "warm"; }

const char* to_string(SolverKind v) {
  switch (v) {
    case SolverKind::kNone: return "none";
    case SolverKind::kAnalytic: return "analytic";
    case SolverKind::kGd: return "gd";
    case SolverKind::kGdWithQueue: return "gd_with_queue";
    case SolverKind::kOracle: return "gd_oracle";
  }
  return "unknown";
}

const char* to_string(GdInit v) {
  switch (v) {
    case GdInit::kIdentity: return "identity";
    case GdInit::kTrained: return "trained";
    case GdInit::kRandom: return "random";
  }
  return "unknown";
}

const char* to_string(QueueInit v) { return v == QueueInit::kPseudo ? "pseudo" : "empty"; }

const char* to_string(TestBalance v) {
  return v == TestBalance::kBalanced ? "balanced" : "unbalanced";
}

void set_config_key(RunConfig& config, const std::string& key, const std::string& value) {
  for (const Key& k : keys()) {
    if (key == k.name) {
      k.set(config, value);
      return;
    }
  }
  throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(lineno) + ": duplicate key '" +
                                          key + "'");
    }
    set_config_key(config, key, trim(line.substr(eq + 1)));
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kConfig, what);
  };
  require(c.num_tasks >= 1, "num_tasks must be at least 1");
  require(c.dimension >= 1, "dimension must be positive");
  require(c.cluster_separation > 0 && c.cluster_spread >= 0, "cluster geometry out of range");
  require(c.train_per_class >= 1 && c.test_per_class >= 1, "per-class counts must be positive");
  require(c.drift.magnitude >= 0 && c.drift.observation_noise >= 0 &&
              c.drift.nonlinear_amplitude >= 0 && c.drift.nonlinear_frequency >= 0 &&
              c.drift.scale > 0 && c.drift.condition_bound >= 1,
          "drift parameters out of range");
  require(c.toy_in_dim >= 1 && c.toy_hidden >= 1 && c.toy_batch >= 1 && c.toy_lr > 0,
          "toy trainer parameters out of range");
  require(c.loss_weights.lambda1 >= 0 && c.loss_weights.lambda2 >= 0 && c.loss_weights.tau > 0,
          "loss weights out of range");
  require(c.source != SourceKind::kDump || !c.dump_paths.empty(), "dump source needs dump_paths");
  require(c.queue_capacity >= 1, "queue_capacity must be positive");
  require(c.noise_scale >= 0, "noise_scale must be non-negative");
  require(c.update_stride >= 1 && c.resolve_stride >= 1, "strides must be positive");
  require(c.ridge >= 0 && c.min_ridge > 0, "ridge values out of range");
  require(c.cond_threshold > 1, "cond_threshold must exceed 1");
  require(c.gd_lr > 0, "gd_lr must be positive");
  require(c.unbalanced_fraction > 0 && c.unbalanced_fraction < 1,
          "unbalanced_fraction must lie in (0, 1)");
  require(c.oracle_tol > 0 && c.oracle_max_steps >= 1, "oracle settings out of range");
  require(c.curve_points >= 1, "curve_points must be positive");
  if (c.source != SourceKind::kDump) classes_per_task(c);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Key& k : keys()) out.emplace_back(k.name);
  return out;
}

std::string canonical_text(const RunConfig& config) { return canonical_without(config, {}); }

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t config_hash(const RunConfig& config) {
  return fnv1a(canonical_without(config, {"output_dir"}));
}

std::uint64_t group_hash(const RunConfig& config) {
  return fnv1a(canonical_without(config, {"output_dir", "seed", "stream_seed"}));
}

std::vector<std::size_t> classes_per_task(const RunConfig& config) {
  return config.split == SplitKind::kCold ? cold_start_split(config.total_classes, config.num_tasks)
                                          : warm_start_split(config.total_classes, config.num_tasks);
}

}  // namespace semevo
