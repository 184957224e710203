#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "macforge/aloha.hpp"
#include "macforge/env.hpp"

// Experiment harness: exhaustive-sweep ground truth, convergence and
// warm-start curves, the ALOHA and DCF baseline comparisons, and the
// block-selection frequency report.
namespace macforge::harness {

using agents::AgentConfig;
using agents::GenomeEnv;
using agents::QTable;
using blocks::Catalog;
using blocks::Genome;

// Derived, distinct seeds from one master seed.
std::vector<std::uint64_t> make_seeds(std::uint64_t master, int count, std::uint64_t tag = 0);

// Runs fn(i) for i in [0, n) across `jobs` worker threads.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

// Genomes tying the best mean within goal_tol form the top equivalence
// class, ordered lexicographically (simplest first); everything else
// follows by mean descending with the same lexicographic tie-break. The
// goal genome is rank 1.
struct SweepEntry {
    Genome genome;
    double mean;
};

struct SweepResult {
    std::vector<SweepEntry> ranked;
    double best_mean = 0.0;
    double goal_tol = 0.02;

    const Genome& goal() const { return ranked.front().genome; }
    // 1-based rank of the first genome satisfying a predicate; 0 if none.
    int first_rank(const std::function<bool(const Genome&)>& pred) const;
    std::string csv() const;
};

inline constexpr double kDefaultGoalTol = 0.04;

// Simulates every valid genome in the catalog over the environment's
// evaluation seeds, primes the environment cache, and ranks.
SweepResult exhaustive_sweep(GenomeEnv& env, double goal_tol = kDefaultGoalTol, int jobs = 1);

// Reward functions over sim results.
double reward_throughput(const sim::SimResult& r);
// w0 * delivery ratio - w1 * energy per delivered bit.
double reward_energy_weighted(const sim::SimResult& r, double w0, double w1);

struct ConvergenceResult {
    SweepResult sweep;
    Genome goal;
    std::vector<std::vector<int>> visits;  // [training seed][episode]
    std::vector<double> mean_visits;       // averaged over training seeds
    // First episode (1-based) whose seed-averaged visits reach the
    // threshold; 0 if never.
    int episodes_to(double threshold) const;
    std::string csv() const;
};

// Trains fresh (or warm-started) tabular agents and records goal visits
// per episode. `warm_from` pre-trains on another environment whose
// learned table seeds the target runs.
ConvergenceResult convergence_experiment(const GenomeEnv::Options& target,
                                         const std::optional<GenomeEnv::Options>& warm_from,
                                         int episodes, const std::vector<std::uint64_t>& train_seeds,
                                         const AgentConfig& cfg, double goal_tol, int jobs);

// The five blocks that can only assemble ALOHA-like protocols.
Catalog aloha_restricted_catalog();

struct AlohaRow {
    int scenario_id;
    Genome learned;
    double learned_value;
    double aloha_value;
};
std::vector<AlohaRow> aloha_comparison(int episodes, std::uint64_t master_seed, int eval_seed_count,
                                       const AgentConfig& cfg, double goal_tol, int jobs);
std::string aloha_csv(const std::vector<AlohaRow>& rows);

enum class Ramp { Low, High };

struct DcfRow {
    int node_count;
    Genome learned;
    double learned_value;
    double dcf_value;
};
// Node ramps: Low grows 1..15 with a join every 3 s, High grows 25..50
// with a join every 2 s; no noise. The agent is pre-trained per node
// count (warm-started from the previous count).
std::vector<DcfRow> dcf_comparison(Ramp ramp, int episodes_per_count, std::uint64_t master_seed,
                                   int eval_seed_count, const AgentConfig& cfg, int jobs);
std::string dcf_csv(const std::vector<DcfRow>& rows);

struct BlockReport {
    // [scenario 1..8][block][option] -> selection count over repetitions
    std::vector<std::array<std::array<int, 8>, blocks::kNumBlocks>> counts;
    int repetitions = 0;
    std::string wide_csv() const;  // 8 rows x 8 block columns, modal option(count)
    std::string long_csv() const;  // scenario,block,option,count
};
BlockReport block_selection_report(int repetitions, int episodes, std::uint64_t master_seed,
                                   int eval_seed_count, const AgentConfig& cfg,
                                   const Catalog& catalog, double goal_tol, int jobs);

// Experiment description as the CLI assembles it.
struct ExperimentSpec {
    enum class Kind { Sweep, Convergence, AlohaCompare, DcfCompare, BlockReport };
    Kind kind = Kind::Sweep;
    std::vector<int> scenario_ids;
    int repetitions = 1;
    std::uint64_t master_seed = 1;
    AgentConfig agent;
    Catalog catalog = Catalog::full();
    std::string output_dir;
};

// Output directory with a config-echo manifest; directory name gets a
// timestamp unless an explicit path is given.
class ExperimentWriter {
public:
    ExperimentWriter(const std::string& kind, const std::string& explicit_dir);
    const std::filesystem::path& dir() const { return dir_; }
    void write_manifest(const std::vector<std::pair<std::string, std::string>>& entries) const;
    void write_file(const std::string& name, const std::string& content) const;

private:
    std::filesystem::path dir_;
};

}  // namespace macforge::harness
