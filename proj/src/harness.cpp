#include "logbarrier/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "logbarrier/baselines.hpp"
#include "logbarrier/datagen.hpp"
#include "logbarrier/io.hpp"
#include "logbarrier/problems.hpp"
#include "logbarrier/solver.hpp"

namespace logbarrier {

using nlohmann::json;

Problem parse_problem(const std::string& s) {
  if (s == "pip") return Problem::pip;
  if (s == "qst") return Problem::qst;
  if (s == "kelly") return Problem::kelly;
  if (s == "permanent") return Problem::permanent;
  throw UsageError("unknown problem '" + s + "' (expected pip, qst, kelly or permanent)");
}

Algo parse_algo(const std::string& s) {
  if (s == "lbsda") return Algo::lbsda;
  if (s == "em") return Algo::em;
  if (s == "imle") return Algo::imle;
  throw UsageError("unknown algorithm '" + s + "' (expected lbsda, em or imle)");
}

std::string to_string(Problem p) {
  switch (p) {
    case Problem::pip: return "pip";
    case Problem::qst: return "qst";
    case Problem::kelly: return "kelly";
    case Problem::permanent: return "permanent";
  }
  return "?";
}

std::string to_string(Algo a) {
  switch (a) {
    case Algo::lbsda: return "lbsda";
    case Algo::em: return "em";
    case Algo::imle: return "imle";
  }
  return "?";
}

namespace {

bool is_classical(Problem p) { return p == Problem::pip || p == Problem::kelly; }

int log2_exact(Eigen::Index d) {
  int q = 0;
  while ((Eigen::Index{1} << q) < d) ++q;
  return (Eigen::Index{1} << q) == d ? q : -1;
}

int sqrt_exact(Eigen::Index d) {
  const auto s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
  return static_cast<Eigen::Index>(s) * s == d ? s : -1;
}

// Separate streams for the instance and for the solver.
std::uint64_t solver_seed(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ull; }

int effective_groups(const ExperimentConfig& cfg) {
  return cfg.groups > 0 ? cfg.groups : static_cast<int>(2 * cfg.d * cfg.d);
}

PoissonInstance make_poisson(const ExperimentConfig& cfg, long* redraws) {
  if (!cfg.instance.empty()) return read_poisson_instance(cfg.instance);
  RngStream rng(cfg.seed);
  PoissonInstance p;
  const RealVector lambda = shepp_logan(sqrt_exact(cfg.d));
  auto sensing = sensing_vectors(cfg.n, cfg.d, rng);
  if (redraws) *redraws = sensing.redraws;
  p.y = poisson_counts(sensing.b, lambda, rng);
  p.b = std::move(sensing.b);
  p.lambda_true = lambda;
  return p;
}

QSTInstance make_qst(const ExperimentConfig& cfg) {
  if (!cfg.instance.empty()) return read_qst_instance(cfg.instance);
  RngStream rng(cfg.seed);
  const DensityMatrix rho = w_state(log2_exact(cfg.d));
  const auto ens = random_measurements(cfg.d, cfg.d / 2, effective_groups(cfg), rng);
  return sample_outcomes(rho, ens, cfg.n, rng);
}

ClassicalDataset make_kelly(const ExperimentConfig& cfg) {
  if (!cfg.instance.empty()) return read_classical_dataset(cfg.instance);
  RngStream rng(cfg.seed);
  return kelly_dataset(random_market(cfg.n, cfg.d, rng));
}

HermitianMatrix make_permanent_matrix(const ExperimentConfig& cfg) {
  RngStream rng(cfg.seed);
  HermitianMatrix A = random_psd(cfg.d, cfg.d, rng);
  return A / std::real(A.trace());
}

template <class Setup>
RunResult<Setup> dispatch(const ExperimentConfig& cfg, const Dataset<Setup>& ds, std::size_t epoch_size,
                          const MetricFn<Setup>& metric, const std::string& metric_name) {
  CheckpointSchedule schedule{cfg.checkpoint_ratio};
  if (cfg.algo == Algo::lbsda) {
    SolverConfig sc;
    sc.d = ds.dim();
    sc.batch_size = cfg.B;
    sc.seed = solver_seed(cfg.seed);
    return lbsda_run(ds, sc, cfg.budget, schedule, metric, epoch_size, metric_name);
  }
  return baseline_run(ds, cfg.budget, schedule, metric, metric_name);
}

}  // namespace

PoissonInstance poisson_instance(const ExperimentConfig& cfg) { return make_poisson(cfg, nullptr); }

QSTInstance qst_instance(const ExperimentConfig& cfg) { return make_qst(cfg); }

SolverConfig solver_config(const ExperimentConfig& cfg) {
  SolverConfig sc;
  sc.d = cfg.d;
  sc.batch_size = cfg.B;
  sc.seed = solver_seed(cfg.seed);
  return sc;
}

void ExperimentConfig::validate() const {
  if (d < 1) throw UsageError("d must be >= 1");
  if (B < 1) throw UsageError("B must be >= 1");
  if (n < 1 && problem != Problem::permanent) throw UsageError("n must be >= 1");
  if (!(checkpoint_ratio > 1.0)) throw UsageError("checkpoint ratio must exceed 1");
  if (!(budget.value > 0.0)) throw UsageError("budget must be positive");
  if (algo == Algo::em && !is_classical(problem))
    throw UsageError("em applies to classical problems (pip, kelly)");
  if (algo == Algo::imle && is_classical(problem))
    throw UsageError("imle applies to quantum problems (qst, permanent)");
  if (instance.empty()) {
    if (problem == Problem::pip && (sqrt_exact(d) < 4))
      throw UsageError("pip needs d = side^2 with side >= 4 (phantom raster)");
    if (problem == Problem::qst && log2_exact(d) < 2)
      throw UsageError("qst needs d = 2^q with q >= 2");
    if (problem == Problem::permanent && d > kMaxPermanentDim)
      throw UsageError("permanent needs d <= " + std::to_string(kMaxPermanentDim));
  } else if (problem == Problem::permanent) {
    throw UsageError("permanent instances are generated, not loaded");
  }
  if (groups < 0) throw UsageError("groups must be >= 0");
}

json ExperimentConfig::to_json() const {
  json j{{"problem", to_string(problem)},
         {"algo", to_string(algo)},
         {"d", d},
         {"n", n},
         {"B", B},
         {"seed", seed},
         {"budget", budget.to_string()},
         {"checkpoint_ratio", checkpoint_ratio},
         {"out", out}};
  if (problem == Problem::qst) j["groups"] = effective_groups(*this);
  if (!instance.empty()) j["instance"] = instance;
  if (!preset.empty()) j["preset"] = preset;
  return j;
}

void ExperimentConfig::merge_json(const json& j) {
  try {
    if (j.contains("preset")) *this = logbarrier::preset(j.at("preset").get<std::string>());
    if (j.contains("problem")) problem = parse_problem(j.at("problem").get<std::string>());
    if (j.contains("algo")) algo = parse_algo(j.at("algo").get<std::string>());
    if (j.contains("d")) d = j.at("d").get<Eigen::Index>();
    if (j.contains("n")) n = j.at("n").get<long>();
    if (j.contains("B")) B = j.at("B").get<int>();
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("budget")) budget = Budget::parse(j.at("budget").get<std::string>());
    if (j.contains("checkpoint_ratio")) checkpoint_ratio = j.at("checkpoint_ratio").get<double>();
    if (j.contains("groups")) groups = j.at("groups").get<int>();
    if (j.contains("instance")) instance = j.at("instance").get<std::string>();
    if (j.contains("out")) out = j.at("out").get<std::string>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.preset = name;
  if (name == "pip-desk") {
    c.problem = Problem::pip;
    c.d = 64;
    c.n = 100000;
    c.B = 1;
    c.budget = Budget::epochs(20);
  } else if (name == "pip-paper") {
    c.problem = Problem::pip;
    c.d = 256;
    c.n = 1000000;
    c.B = 1;
    c.budget = Budget::epochs(20);
  } else if (name == "qst-desk") {
    c.problem = Problem::qst;
    c.d = 8;
    c.n = 10000;
    c.B = 8;
    c.budget = Budget::epochs(2000);
  } else if (name == "qst-paper") {
    c.problem = Problem::qst;
    c.d = 64;
    c.n = 409600;
    c.B = 64;
    c.groups = 1024;
    c.budget = Budget::epochs(20);
  } else if (name == "kelly-desk") {
    c.problem = Problem::kelly;
    c.d = 8;
    c.n = 1000;
    c.B = 1;
    c.budget = Budget::epochs(50);
  } else if (name == "permanent-desk") {
    c.problem = Problem::permanent;
    c.d = 3;
    c.n = 3;
    c.B = 3;
    c.budget = Budget::iterations(20000);
  } else {
    throw UsageError("unknown preset '" + name + "'");
  }
  return c;
}

std::vector<std::string> preset_names() {
  return {"pip-desk", "pip-paper", "qst-desk", "qst-paper", "kelly-desk", "permanent-desk"};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  res.config_echo = cfg.to_json();
  json info;
  switch (cfg.problem) {
    case Problem::pip: {
      long redraws = 0;
      const auto inst = make_poisson(cfg, &redraws);
      const auto ref = pip_to_classical(inst);
      MetricFn<Classical> metric;
      std::string name = "none";
      if (inst.lambda_true) {
        metric = [&](const RealVector& x) {
          return normalized_estimation_error(recover_lambda(x, ref.context), *inst.lambda_true);
        };
        name = "normalized_estimation_error";
      }
      auto run = dispatch(cfg, ref.dataset, ref.context.n_original, metric, name);
      res.record = std::move(run.record);
      info = {{"Y", ref.context.Y}, {"n", ref.context.n_original},
              {"nonzero_counts", ref.context.kept_rows.size()}, {"sensing_redraws", redraws}};
      break;
    }
    case Problem::qst: {
      const auto inst = make_qst(cfg);
      const auto ds = inst.dataset();
      MetricFn<Quantum> metric;
      std::string name = "none";
      if (inst.rho_true) {
        metric = [&](const HermitianMatrix& rho) { return fidelity(rho, *inst.rho_true); };
        name = "fidelity";
      }
      auto run = dispatch(cfg, ds, static_cast<std::size_t>(inst.total_shots()), metric, name);
      res.record = std::move(run.record);
      info = {{"shots", inst.total_shots()}, {"distinct_outcomes", ds.size()}};
      break;
    }
    case Problem::kelly: {
      const auto ds = make_kelly(cfg);
      auto run = dispatch(cfg, ds, ds.size(), MetricFn<Classical>{}, "none");
      res.record = std::move(run.record);
      info = {{"days", ds.size()}};
      break;
    }
    case Problem::permanent: {
      const HermitianMatrix A = make_permanent_matrix(cfg);
      const auto ds = permanent_dataset(A);
      const double d = static_cast<double>(cfg.d);
      MetricFn<Quantum> rel = [&](const HermitianMatrix& rho) { return std::exp(-d * f_value(ds, rho)); };
      auto run = dispatch(cfg, ds, ds.size(), rel, "rel");
      res.record = std::move(run.record);
      info = {{"permanent", std::real(permanent_exact(A))}};
      break;
    }
  }
  res.config_echo["instance_info"] = info;
  res.config_echo["metric_name"] = res.record.metric_name;
  res.config_echo["diverged"] = res.record.diverged;
  res.config_echo["best_objective"] = res.record.best_objective();
  return res;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void write_csv(const RunRecord& rec, const std::string& path, const json& config_echo) {
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "iter,epochs,elapsed_s,objective,metric\n";
    for (const auto& c : rec.checkpoints)
      out << c.iter << ',' << format_double(c.epochs) << ',' << format_double(c.elapsed_s) << ','
          << format_double(c.objective) << ',' << format_double(c.metric) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
  }
  const auto sidecar = std::filesystem::path(path).replace_extension(".json");
  std::ofstream js(sidecar, std::ios::binary | std::ios::trunc);
  if (!js) throw std::runtime_error("cannot open '" + sidecar.string() + "' for writing");
  js << config_echo.dump(2) << '\n';
  if (!js) throw std::runtime_error("write to '" + sidecar.string() + "' failed");
}

namespace {

double parse_field(std::string_view s, const std::string& path, std::size_t line) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw std::runtime_error(path + ":" + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::vector<Checkpoint> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != "iter,epochs,elapsed_s,objective,metric")
    throw std::runtime_error(path + ": unexpected CSV header");
  std::vector<Checkpoint> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 5) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 5 fields");
    Checkpoint c;
    c.iter = static_cast<long>(parse_field(fields[0], path, lineno));
    c.epochs = parse_field(fields[1], path, lineno);
    c.elapsed_s = parse_field(fields[2], path, lineno);
    c.objective = parse_field(fields[3], path, lineno);
    c.metric = parse_field(fields[4], path, lineno);
    out.push_back(c);
  }
  return out;
}

json run_compare(const CompareSpec& spec) {
  if (spec.algos.empty() || spec.seeds.empty()) throw UsageError("compare needs at least one algo and seed");
  for (auto a : spec.algos) {
    ExperimentConfig c = spec.base;
    c.algo = a;
    c.validate();
  }
  std::filesystem::create_directories(spec.out_dir);

  struct Cell {
    Algo algo;
    std::uint64_t seed;
    std::string csv;
    ExperimentResult result;
    std::string error;
  };
  std::vector<Cell> cells;
  for (auto seed : spec.seeds)
    for (auto a : spec.algos) {
      const std::string stem = (spec.base.preset.empty() ? to_string(spec.base.problem) : spec.base.preset) +
                               "_" + to_string(a) + "_s" + std::to_string(seed);
      cells.push_back({a, seed, (std::filesystem::path(spec.out_dir) / (stem + ".csv")).string(), {}, {}});
    }

  unsigned threads = spec.threads;
  if (threads == 0) {
    if (const char* env = std::getenv("LOGBARRIER_THREADS")) threads = static_cast<unsigned>(std::atoi(env));
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = std::min<unsigned>(threads, static_cast<unsigned>(cells.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      auto& cell = cells[i];
      ExperimentConfig c = spec.base;
      c.algo = cell.algo;
      c.seed = cell.seed;
      c.out = cell.csv;
      try {
        cell.result = run_experiment(c);
        write_csv(cell.result.record, cell.csv, cell.result.config_echo);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  json summary{{"base", spec.base.to_json()}, {"cells", json::array()}};
  for (const auto& cell : cells) {
    if (!cell.error.empty()) throw SolverError("compare cell " + cell.csv + " failed: " + cell.error);
  }
  for (const auto& cell : cells) {
    double reference = std::numeric_limits<double>::infinity();
    for (const auto& other : cells)
      if (other.seed == cell.seed) reference = std::min(reference, other.result.record.best_objective());
    summary["cells"].push_back({{"algo", to_string(cell.algo)},
                                {"seed", cell.seed},
                                {"csv", cell.csv},
                                {"best_objective", cell.result.record.best_objective()},
                                {"reference_objective", reference},
                                {"diverged", cell.result.record.diverged}});
  }
  std::ofstream js(std::filesystem::path(spec.out_dir) / "summary.json", std::ios::binary | std::ios::trunc);
  js << summary.dump(2) << '\n';
  return summary;
}

void generate_instance(const ExperimentConfig& cfg, const std::string& path) {
  cfg.validate();
  switch (cfg.problem) {
    case Problem::pip: write_poisson_instance(path, make_poisson(cfg, nullptr)); break;
    case Problem::qst: write_qst_instance(path, make_qst(cfg)); break;
    case Problem::kelly: write_dataset(path, make_kelly(cfg)); break;
    case Problem::permanent: write_dataset(path, permanent_dataset(make_permanent_matrix(cfg))); break;
  }
}

}  // namespace logbarrier
