#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mcol/macrocolumn.hpp"
#include "mcol/names.hpp"
#include "mcol/reference_model.hpp"
#include "mcol/rng.hpp"

namespace mcol {

enum class WalkMode {
  LearnedSuccessors,  // hop along learned out-edges of the current feature
  Features,           // hop to a uniformly random other feature cell
  Cells,              // raw random walk over grid cells
};

struct Environment {
  int id = 0;
  int grid = 0;
  std::vector<std::pair<int, int>> placement;  // feature -> cell

  std::optional<int> feature_at(int x, int y) const;
};

struct PathStep {
  int xmove = 0;
  int ymove = 0;
  std::optional<int> feature;  // feature at the post-move cell
};

struct ExplorationPath {
  std::vector<PathStep> steps;  // exactly episode_len entries
  std::vector<int> arrivals;    // realized visitation order
  std::pair<int, int> drop{0, 0};
};

struct BenchConfig {
  std::uint64_t seed = 1;
  int n_envs = 40;
  int n_features = 10;
  int grid = 30;
  int episode_len = 100;
  int visits = 4;
  int segments = 0;  // 0 = auto (computed bound)
  SdpParams params;
  DisplacementEncoding encoding = DisplacementEncoding::OneHot;
  LearningGate gate = LearningGate::CompleteVector;
  WalkMode walk = WalkMode::LearnedSuccessors;

  void validate() const;
};

std::vector<Environment> gen_environments(std::uint64_t seed, int n, int grid, int n_features);
ExplorationPath gen_exploration_path(const Environment& env, std::uint64_t seed, int visits, int episode_len);
std::vector<RefEdge> derive_graph(const Environment& env, const ExplorationPath& path);

/// Max over the three minicolumns, their neurons and head features of the
/// number of distinct stored contexts landing on one dendrite.
int compute_segment_bound(const std::vector<std::vector<RefEdge>>& graphs, int n_envs, int n_features, int grid);

struct Scenario {
  BenchConfig cfg;
  NameTable names;
  std::vector<Environment> envs;
  std::vector<ExplorationPath> paths;
  std::vector<std::vector<RefEdge>> graphs;
  // Edges whose (tail, dx, dy, head) geometry repeats in another environment;
  // their displacement-minicolumn segments fight over the eId synapse.
  std::set<RefEdge> duplicate_geometry;
  int segment_bound = 0;
  int segments_used = 0;

  Dims dims() const { return Dims{cfg.n_envs, cfg.n_features, cfg.grid, segments_used}; }
  Macrocolumn make_macrocolumn() const;
};

/// Environments, paths and ground-truth graphs for a config; asserts
/// resolvability (regenerating placements on identical edge sets).
Scenario make_scenario(const BenchConfig& cfg);

struct EpisodeResult {
  std::string phase = "orient_nav";
  int env_id = 0;
  std::uint64_t seed = 0;
  int segments = 0;
  std::optional<int> steps_to_orient;
  int oriented_cycles = 0;
  int post_orient_cycles = 0;
  int nav_queries = 0;
  int nav_errors = 0;

  std::optional<double> oriented_fraction() const;
};

struct Divergence {
  long long cycle = 0;
  std::string where;
  std::string field;
  std::string mc_value;
  std::string ref_value;

  std::string describe() const;
};

struct CrossCheckReport {
  std::optional<Divergence> divergence;
  long long cycles_compared = 0;
  bool exploration_memory_checked = false;
  bool exploration_memory_match = true;
  std::string exploration_detail;

  bool clean() const { return !divergence && exploration_memory_match; }
};

/// Drives the exploration phase over every environment (explore mode,
/// 1-hot eId_in). A reference model, when given, runs in lockstep.
void run_exploration(Macrocolumn& mc, const Scenario& sc, RefModel* ref = nullptr);

/// One orientation + navigation episode in environment env_index. With a
/// reference model attached, decoded outputs are compared on every consumed
/// cycle (all non-query cycles plus accepted queries).
EpisodeResult run_orientation_nav(Macrocolumn& mc, const Scenario& sc, int env_index, RefModel* ref = nullptr,
                                  CrossCheckReport* report = nullptr, std::ostream* trace = nullptr);

struct BenchRun {
  std::vector<EpisodeResult> episodes;  // exploration rows then navigation rows
  std::uint64_t parity_ties = 0;
  std::size_t pl_edges = 0;
  std::size_t ref_edges = 0;
};

BenchRun run_benchmark(const Scenario& sc, RefModel* ref = nullptr, CrossCheckReport* report = nullptr,
                       std::ostream* trace = nullptr);

/// Full oracle gate for a config: lockstep exploration with end-state memory
/// comparison, then lockstep orientation/navigation over every environment.
CrossCheckReport cross_check(const BenchConfig& cfg);

struct Metrics {
  int episodes = 0;
  int orient_success = 0;
  std::map<int, int> steps_hist;
  std::optional<int> steps_median;
  std::optional<int> steps_max;
  long long nav_queries = 0;
  long long nav_errors = 0;
  std::optional<double> fraction_mean;
  std::optional<double> fraction_min;
};

Metrics summarize(const std::vector<EpisodeResult>& episodes);

std::string episodes_to_csv(const std::vector<EpisodeResult>& episodes);
std::string metrics_to_text(const Metrics& m, const std::string& prefix);
std::string config_to_text(const BenchConfig& cfg);
std::string placements_to_text(const Scenario& sc);

namespace fixtures {

inline constexpr int kFigGrid = 30;
inline constexpr int kFigEnvs = 2;
inline constexpr int kFigFeatures = 5;

NameTable fig_names();
/// The two-environment PL contents table, displacements mod 30.
std::vector<RefEdge> fig6_edges();
/// Consistent 30x30 placements for environment beta.
Environment beta_environment();

/// Presents the whole edge list once per pass, `reps` passes, through
/// explore-mode steps (two cycles per edge: arrive at tail, move to head).
void teach(Macrocolumn& mc, const std::vector<RefEdge>& edges, int reps);
void teach(RefModel& ref, const std::vector<RefEdge>& edges);

struct ScriptRow {
  ControlInputs in;
  // expected decoded query vector
  std::set<int> eid;
  std::optional<int> tail, dx, dy, head;
  // expected inference, when asserted
  std::optional<std::set<int>> i_eid;
  std::optional<int> i_dx, i_dy;
};

/// The orientation-and-navigation movement column (beta drop), including the
/// final inferred-move step; run after an orient_init cycle.
std::vector<ScriptRow> fig7_script();
/// The alpha exploration movement column (explore mode, eId alpha).
std::vector<ScriptRow> fig5_script();

}  // namespace fixtures

}  // namespace mcol
