// logbarrier: run, compare and materialize log-loss experiments.
//
// Exit codes: 0 success, 2 usage error, 1 numeric or I/O failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "logbarrier/harness.hpp"

namespace lb = logbarrier;

namespace {

struct Flags {
  std::string config, preset, problem, algo, budget, out, instance;
  long d = 0, n = 0, groups = -1;
  int B = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double ratio = 0.0;
};

void add_run_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file (flags override it)");
  app->add_option("--preset", f.preset, "preset name");
  app->add_option("--problem", f.problem, "pip | qst | kelly | permanent");
  app->add_option("--algo", f.algo, "lbsda | em | imle");
  app->add_option("--d", f.d, "dimension");
  app->add_option("--n", f.n, "sample size (rows, shots or days)");
  app->add_option("--B", f.B, "batch size");
  app->add_option("--seed", f.seed, "random seed")->each([&f](const std::string&) { f.seed_set = true; });
  app->add_option("--budget", f.budget, "iters:N | epochs:E | seconds:S");
  app->add_option("--checkpoint-ratio", f.ratio, "geometric checkpoint ratio (default 1.25)");
  app->add_option("--groups", f.groups, "qst measurement settings (0: 2 d^2)");
  app->add_option("--instance", f.instance, "load the instance from a file");
  app->add_option("--out", f.out, "output path");
}

lb::ExperimentConfig build_config(const Flags& f) {
  lb::ExperimentConfig cfg;
  if (!f.preset.empty()) cfg = lb::preset(f.preset);
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw lb::UsageError("cannot read config '" + f.config + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw lb::UsageError("config '" + f.config + "': " + e.what());
    }
    cfg.merge_json(j);
  }
  if (!f.problem.empty()) cfg.problem = lb::parse_problem(f.problem);
  if (!f.algo.empty()) cfg.algo = lb::parse_algo(f.algo);
  if (f.d > 0) cfg.d = f.d;
  if (f.n > 0) cfg.n = f.n;
  if (f.B > 0) cfg.B = f.B;
  if (f.seed_set) cfg.seed = f.seed;
  if (!f.budget.empty()) cfg.budget = lb::Budget::parse(f.budget);
  if (f.ratio > 0.0) cfg.checkpoint_ratio = f.ratio;
  if (f.groups >= 0) cfg.groups = static_cast<int>(f.groups);
  if (!f.instance.empty()) cfg.instance = f.instance;
  if (!f.out.empty()) cfg.out = f.out;
  cfg.validate();
  return cfg;
}

template <typename T>
std::vector<T> split_list(const std::string& s, T (*conv)(const std::string&)) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(conv(item));
  return out;
}

std::uint64_t parse_seed(const std::string& s) {
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw lb::UsageError("bad seed '" + s + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic dual averaging with the logarithmic barrier"};
  app.require_subcommand(1);

  Flags run_flags;
  auto* run = app.add_subcommand("run", "run one algorithm on one instance and write a CSV trace");
  add_run_flags(run, run_flags);

  Flags cmp_flags;
  std::string algos = "lbsda", seeds = "0";
  unsigned threads = 0;
  auto* compare = app.add_subcommand("compare", "run (algo, seed) cells of a preset in parallel");
  add_run_flags(compare, cmp_flags);
  compare->add_option("--algos", algos, "comma-separated algorithms");
  compare->add_option("--seeds", seeds, "comma-separated seeds");
  compare->add_option("--threads", threads, "worker threads (default: LOGBARRIER_THREADS or cores)");

  Flags gen_flags;
  auto* gen = app.add_subcommand("gen", "materialize an instance to disk");
  add_run_flags(gen, gen_flags);

  app.add_subcommand("presets", "list preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      const auto cfg = build_config(run_flags);
      if (cfg.out.empty()) throw lb::UsageError("run needs --out");
      const auto res = lb::run_experiment(cfg);
      lb::write_csv(res.record, cfg.out, res.config_echo);
      const auto& last = res.record.checkpoints.back();
      std::cout << "wrote " << res.record.checkpoints.size() << " checkpoints to " << cfg.out
                << " (final objective " << lb::format_double(last.objective) << ", "
                << res.record.metric_name << " " << lb::format_double(last.metric) << ")\n";
    } else if (compare->parsed()) {
      lb::CompareSpec spec;
      spec.base = build_config(cmp_flags);
      spec.algos = split_list<lb::Algo>(algos, lb::parse_algo);
      spec.seeds = split_list<std::uint64_t>(seeds, parse_seed);
      spec.out_dir = spec.base.out.empty() ? "compare_out" : spec.base.out;
      spec.threads = threads;
      const auto summary = lb::run_compare(spec);
      std::cout << summary.dump(2) << '\n';
    } else if (gen->parsed()) {
      const auto cfg = build_config(gen_flags);
      if (cfg.out.empty()) throw lb::UsageError("gen needs --out");
      lb::generate_instance(cfg, cfg.out);
      std::cout << "wrote instance to " << cfg.out << '\n';
    } else {
      for (const auto& name : lb::preset_names()) std::cout << name << '\n';
    }
  } catch (const lb::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
