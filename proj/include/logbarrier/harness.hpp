#pragma once

// Experiment driver: configs and presets, instance generation, running one
// algorithm on one instance, and CSV output.

#include <string>
#include <vector>

#include <json.hpp>

#include "logbarrier/problems.hpp"
#include "logbarrier/record.hpp"
#include "logbarrier/types.hpp"

namespace logbarrier {

enum class Problem { pip, qst, kelly, permanent };
enum class Algo { lbsda, em, imle };

Problem parse_problem(const std::string& s);
Algo parse_algo(const std::string& s);
std::string to_string(Problem p);
std::string to_string(Algo a);

struct ExperimentConfig {
  Problem problem = Problem::pip;
  Algo algo = Algo::lbsda;
  Eigen::Index d = 64;
  long n = 100000;  // sensing rows (pip), shots (qst), days (kelly); ignored for permanent
  int B = 1;
  std::uint64_t seed = 0;
  Budget budget = Budget::epochs(20);
  double checkpoint_ratio = 1.25;
  int groups = 0;            // qst measurement settings; 0 selects 2 d^2
  std::string instance;      // optional instance file to load instead of generating
  std::string out;
  std::string preset;        // name of the preset this config came from, if any

  void validate() const;
  nlohmann::json to_json() const;
  /// Overlays the keys present in `j` onto this config.
  void merge_json(const nlohmann::json& j);
};

/// Known presets: pip-desk, pip-paper, qst-desk, qst-paper, kelly-desk, permanent-desk.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

struct ExperimentResult {
  RunRecord record;
  nlohmann::json config_echo;
};

/// The instance `cfg` describes (loaded from cfg.instance when set). A pip
/// instance is a phantom raster sensed by random 0 or 1/n vectors; a qst
/// instance is W-state outcomes under random projector-pair measurements.
PoissonInstance poisson_instance(const ExperimentConfig& cfg);
QSTInstance qst_instance(const ExperimentConfig& cfg);
/// Solver settings for an LB-SDA run of `cfg` (the solver stream is seeded
/// separately from the instance stream).
SolverConfig solver_config(const ExperimentConfig& cfg);

/// Generates (or loads) the instance for `cfg` and runs the selected algorithm.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Header `iter,epochs,elapsed_s,objective,metric`, shortest round-trip
/// decimals, LF endings; writes the config echo next to it as <stem>.json.
void write_csv(const RunRecord& rec, const std::string& path,
               const nlohmann::json& config_echo = nlohmann::json::object());
std::vector<Checkpoint> read_csv(const std::string& path);

/// Shortest decimal string that parses back to exactly `v` ("nan"/"inf" for non-finite).
std::string format_double(double v);

struct CompareSpec {
  ExperimentConfig base;
  std::vector<Algo> algos;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  unsigned threads = 0;  // 0: LOGBARRIER_THREADS, else hardware concurrency
};

/// Runs every (algo, seed) cell on a thread pool, one CSV per cell, and
/// writes summary.json with each cell's reference objective: the best
/// objective over all algorithms on the same seed's instance.
nlohmann::json run_compare(const CompareSpec& spec);

/// Materializes the instance of `cfg` to `path` (Poisson or QST file; other
/// problems are written as their classical/quantum dataset).
void generate_instance(const ExperimentConfig& cfg, const std::string& path);

}  // namespace logbarrier
