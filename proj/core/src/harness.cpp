#include "mcol/harness.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mcol/codec.hpp"
#include "mcol/grid_cells.hpp"

namespace mcol {

namespace {

std::set<int> decode_set(const SpikeVector& v) {
  std::set<int> s;
  for (int p : v.hot()) s.insert(p);
  return s;
}

std::optional<int> decode_sole(const SpikeVector& v) {
  const int h = v.sole_hot();
  return h < 0 ? std::nullopt : std::optional<int>(h);
}

std::string show_set(const std::set<int>& s) {
  std::string out = "{";
  bool first = true;
  for (int v : s) {
    if (!first) out += ',';
    first = false;
    out += std::to_string(v);
  }
  return out + "}";
}

std::string show_opt(const std::optional<int>& v) { return v ? std::to_string(*v) : "-"; }

RefInputs to_ref_inputs(const ControlInputs& in, int n_features) {
  RefInputs ri;
  if (in.eid_in.width()) ri.eid_in = decode_set(in.eid_in);
  ri.xmove = in.xmove;
  ri.ymove = in.ymove;
  if (in.feature.width() == n_features) ri.feature = decode_sole(in.feature);
  if (in.target.width() == n_features) ri.target = decode_sole(in.target);
  ri.explore = in.explore;
  ri.query = in.query;
  return ri;
}

int wrap(int v, int grid) { return ((v % grid) + grid) % grid; }

// Signed torus move taking `from` to `to`.
std::pair<int, int> torus_move(std::pair<int, int> from, std::pair<int, int> to, int grid) {
  return {displacement_to_signed(wrap(to.first - from.first, grid), grid),
          displacement_to_signed(wrap(to.second - from.second, grid), grid)};
}

// Drives one macrocolumn cycle and, when attached, the oracle in lockstep.
struct Stepper {
  Macrocolumn& mc;
  RefModel* ref = nullptr;
  CrossCheckReport* report = nullptr;
  std::ostream* trace = nullptr;
  const NameTable* names = nullptr;
  int grid = 0;
  long long cycle = 0;
  std::string where;

  StepResult step_mc(const ControlInputs& in) {
    StepResult r = mc.step(in);
    ++cycle;
    if (trace && names) *trace << trace_line(static_cast<int>(cycle), in, r, *names, grid) << '\n';
    return r;
  }

  RefOut step_ref(const ControlInputs& in) {
    if (!ref) return {};
    if (in.orient_init) {
      ref->orient_init();
      return {};
    }
    return ref->step(to_ref_inputs(in, mc.dims().n_features));
  }

  StepResult step(const ControlInputs& in, RefOut* ref_out = nullptr) {
    StepResult r = step_mc(in);
    const RefOut ro = step_ref(in);
    if (ref_out) *ref_out = ro;
    return r;
  }

  void diverge(const std::string& field, const std::string& mc_value, const std::string& ref_value) {
    if (!report || report->divergence) return;
    report->divergence = Divergence{cycle, where, field, mc_value, ref_value};
  }

  void compare_eid(const StepResult& r) {
    if (!ref || !report || report->divergence) return;
    const auto mc_set = decode_set(r.out.eid_out);
    if (mc_set != ref->state().eid_out)
      diverge("eId_out", show_set(mc_set), show_set(ref->state().eid_out));
    else
      ++report->cycles_compared;
  }

  void compare_displacements(const StepResult& r, const RefOut& ro) {
    if (!ref || !report || report->divergence) return;
    const auto mc_dx = decode_sole(r.out.i_dx);
    const auto mc_dy = decode_sole(r.out.i_dy);
    if (mc_dx != ro.i_dx)
      diverge("i_dx", show_opt(mc_dx), show_opt(ro.i_dx));
    else if (mc_dy != ro.i_dy)
      diverge("i_dy", show_opt(mc_dy), show_opt(ro.i_dy));
    else
      ++report->cycles_compared;
  }
};

}  // namespace

std::optional<int> Environment::feature_at(int x, int y) const {
  for (std::size_t f = 0; f < placement.size(); ++f)
    if (placement[f] == std::pair<int, int>{x, y}) return static_cast<int>(f);
  return std::nullopt;
}

void BenchConfig::validate() const {
  params.validate();
  if (n_envs < 1 || n_features < 1 || grid < 1 || episode_len < 1 || visits < 1 || segments < 0)
    throw std::invalid_argument("BenchConfig: all counts must be >= 1");
  if (n_features > grid * grid) throw std::invalid_argument("BenchConfig: more features than grid cells");
  if (2 * (visits * n_features) + 1 > episode_len)
    throw std::invalid_argument("BenchConfig: episode too short for the visit schedule");
}

std::vector<Environment> gen_environments(std::uint64_t seed, int n, int grid, int n_features) {
  if (n_features > grid * grid) throw std::invalid_argument("gen_environments: impossible placement count");
  std::vector<Environment> envs;
  envs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rng rng = Rng::stream(seed, "env-place", static_cast<std::uint64_t>(i));
    Environment env;
    env.id = i;
    env.grid = grid;
    std::set<std::pair<int, int>> used;
    while (static_cast<int>(env.placement.size()) < n_features) {
      std::pair<int, int> cell{rng.below_int(grid), rng.below_int(grid)};
      if (used.insert(cell).second) env.placement.push_back(cell);
    }
    envs.push_back(std::move(env));
  }
  return envs;
}

ExplorationPath gen_exploration_path(const Environment& env, std::uint64_t seed, int visits, int episode_len) {
  const int n_features = static_cast<int>(env.placement.size());
  if (2 * (visits * n_features) + 1 > episode_len) throw std::invalid_argument("gen_exploration_path: episode too short");

  Rng rng = Rng::stream(seed, "path", static_cast<std::uint64_t>(env.id));

  // One pseudo-random visitation order over all features, repeated `visits`
  // times so every derived edge is presented enough times to entrench.
  std::vector<int> order(static_cast<std::size_t>(n_features));
  for (int f = 0; f < n_features; ++f) order[static_cast<std::size_t>(f)] = f;
  rng.shuffle(order);

  ExplorationPath path;
  path.drop = {rng.below_int(env.grid), rng.below_int(env.grid)};

  std::pair<int, int> pos = path.drop;
  for (int rep = 0; rep < visits; ++rep) {
    for (int k = 0; k < n_features; ++k) {
      const int f = order[static_cast<std::size_t>(k)];
      const auto cell = env.placement[static_cast<std::size_t>(f)];
      const auto [mx, my] = torus_move(pos, cell, env.grid);
      pos = cell;
      path.steps.push_back(PathStep{mx, my, f});
      path.arrivals.push_back(f);
      path.steps.push_back(PathStep{0, 0, f});  // pause at the feature
    }
  }
  // Zero-move padding; the agent stays on the final feature cell.
  const std::optional<int> resting = env.feature_at(pos.first, pos.second);
  while (static_cast<int>(path.steps.size()) < episode_len) path.steps.push_back(PathStep{0, 0, resting});
  return path;
}

std::vector<RefEdge> derive_graph(const Environment& env, const ExplorationPath& path) {
  std::vector<RefEdge> edges;
  std::set<RefEdge> seen;
  for (std::size_t i = 0; i + 1 < path.arrivals.size(); ++i) {
    const int a = path.arrivals[i], b = path.arrivals[i + 1];
    if (a == b) continue;  // pauses and repeats do not create edges
    const auto& ca = env.placement[static_cast<std::size_t>(a)];
    const auto& cb = env.placement[static_cast<std::size_t>(b)];
    const RefEdge e{env.id, a, wrap(cb.first - ca.first, env.grid), wrap(cb.second - ca.second, env.grid), b};
    if (seen.insert(e).second) edges.push_back(e);
  }
  return edges;
}

int compute_segment_bound(const std::vector<std::vector<RefEdge>>& graphs, int, int, int) {
  // Distinct contexts per (value line, head feature) for each minicolumn.
  std::map<std::pair<int, int>, std::set<std::tuple<int, int, int>>> eid_col, dx_col, dy_col;
  for (const auto& graph : graphs) {
    for (const auto& e : graph) {
      eid_col[{e.eid, e.head}].insert({e.tail, e.dx, e.dy});
      dx_col[{e.dx, e.head}].insert({e.eid, e.tail, e.dy});
      dy_col[{e.dy, e.head}].insert({e.eid, e.tail, e.dx});
    }
  }
  std::size_t bound = 0;
  for (const auto* col : {&eid_col, &dx_col, &dy_col})
    for (const auto& [key, contexts] : *col) bound = std::max(bound, contexts.size());
  return static_cast<int>(bound);
}

Macrocolumn Scenario::make_macrocolumn() const {
  return Macrocolumn(dims(), cfg.params, cfg.gate, cfg.encoding);
}

Scenario make_scenario(const BenchConfig& cfg) {
  cfg.validate();
  Scenario sc;
  sc.cfg = cfg;
  sc.names = NameTable::make(cfg.n_envs, cfg.n_features);
  sc.envs = gen_environments(cfg.seed, cfg.n_envs, cfg.grid, cfg.n_features);

  const auto edge_set_of = [](const std::vector<RefEdge>& g) {
    std::set<std::tuple<int, int, int, int>> s;
    for (const auto& e : g) s.insert({e.tail, e.dx, e.dy, e.head});
    return s;
  };

  // Resolvability: regenerate a placement if its labeled edge set duplicates
  // an earlier environment's. Bounded so inherently unresolvable configs
  // (single-feature environments have empty edge sets) fail loudly.
  std::uint64_t salt = 0;
  for (int i = 0; i < cfg.n_envs; ++i) {
    for (;;) {
      sc.paths.resize(static_cast<std::size_t>(i));
      sc.paths.push_back(gen_exploration_path(sc.envs[static_cast<std::size_t>(i)], cfg.seed, cfg.visits, cfg.episode_len));
      const auto gi = edge_set_of(derive_graph(sc.envs[static_cast<std::size_t>(i)], sc.paths.back()));
      bool duplicate = false;
      for (int j = 0; j < i && !duplicate; ++j)
        duplicate = gi == edge_set_of(derive_graph(sc.envs[static_cast<std::size_t>(j)], sc.paths[static_cast<std::size_t>(j)]));
      if (!duplicate) break;
      if (salt > 100)
        throw std::invalid_argument("make_scenario: environments are not resolvable (identical edge sets persist)");
      sc.envs[static_cast<std::size_t>(i)] =
          gen_environments(cfg.seed ^ (0x5eedbeefULL + ++salt), cfg.n_envs, cfg.grid, cfg.n_features)[static_cast<std::size_t>(i)];
      sc.envs[static_cast<std::size_t>(i)].id = i;
    }
  }

  sc.graphs.reserve(sc.envs.size());
  for (int i = 0; i < cfg.n_envs; ++i)
    sc.graphs.push_back(derive_graph(sc.envs[static_cast<std::size_t>(i)], sc.paths[static_cast<std::size_t>(i)]));

  // Edges repeating the same (tail, dx, dy, head) geometry across environments.
  std::map<std::tuple<int, int, int, int>, std::vector<const RefEdge*>> groups;
  for (const auto& g : sc.graphs)
    for (const auto& e : g) groups[{e.tail, e.dx, e.dy, e.head}].push_back(&e);
  for (const auto& [key, members] : groups)
    if (members.size() > 1)
      for (const RefEdge* e : members) sc.duplicate_geometry.insert(*e);

  sc.segment_bound = compute_segment_bound(sc.graphs, cfg.n_envs, cfg.n_features, cfg.grid);
  sc.segments_used = cfg.segments > 0 ? cfg.segments : std::max(sc.segment_bound, 1);
  return sc;
}

std::optional<double> EpisodeResult::oriented_fraction() const {
  if (!steps_to_orient || post_orient_cycles == 0) return std::nullopt;
  return static_cast<double>(oriented_cycles) / static_cast<double>(post_orient_cycles);
}

std::string Divergence::describe() const {
  std::ostringstream os;
  os << "cycle " << cycle << " (" << where << "): " << field << " mc=" << mc_value << " ref=" << ref_value;
  return os.str();
}

void run_exploration(Macrocolumn& mc, const Scenario& sc, RefModel* ref) {
  Stepper st{mc, ref, nullptr, nullptr, &sc.names, sc.cfg.grid, 0, ""};
  for (int i = 0; i < sc.cfg.n_envs; ++i) {
    ControlInputs init;
    init.orient_init = true;
    st.step(init);  // clear tail/displacement state between episodes
    const SpikeVector eid_in = SpikeVector::one_hot_at(i, sc.cfg.n_envs);
    for (const PathStep& ps : sc.paths[static_cast<std::size_t>(i)].steps) {
      ControlInputs in;
      in.explore = true;
      in.eid_in = eid_in;
      in.xmove = ps.xmove;
      in.ymove = ps.ymove;
      if (ps.feature) in.feature = SpikeVector::one_hot_at(*ps.feature, sc.cfg.n_features);
      st.step(in);
    }
  }
}

EpisodeResult run_orientation_nav(Macrocolumn& mc, const Scenario& sc, int env_index, RefModel* ref,
                                  CrossCheckReport* report, std::ostream* trace) {
  const BenchConfig& cfg = sc.cfg;
  const Environment& env = sc.envs[static_cast<std::size_t>(env_index)];
  const auto& graph = sc.graphs[static_cast<std::size_t>(env_index)];
  Rng agent = Rng::stream(cfg.seed, "agent", static_cast<std::uint64_t>(env.id));

  EpisodeResult res;
  res.env_id = env.id;
  res.seed = cfg.seed;
  res.segments = sc.segments_used;

  std::vector<std::vector<int>> successors(static_cast<std::size_t>(cfg.n_features));
  for (const auto& e : graph) {
    auto& s = successors[static_cast<std::size_t>(e.tail)];
    if (std::find(s.begin(), s.end(), e.head) == s.end()) s.push_back(e.head);
  }
  for (auto& s : successors) std::sort(s.begin(), s.end());

  Stepper st{mc, ref, report, trace, &sc.names, cfg.grid, 0, ""};
  st.where = "env " + sc.names.env(env.id);

  {
    ControlInputs init;
    init.orient_init = true;
    const StepResult r = st.step(init);
    st.compare_eid(r);
  }

  std::pair<int, int> pos{agent.below_int(cfg.grid), agent.below_int(cfg.grid)};
  int cycles = 0;
  int current_feature = -1;
  int last_visited = -1;
  std::optional<int> first_oriented;
  bool oriented = false;
  // A query counts as answered only on a full double match (eId and tail both
  // at maximum weight). Untrained segments sit at multiples of w_b and
  // partially overwritten ones below, so nothing else reaches this level.
  const int accept_level = 2 * cfg.params.w_max;

  const auto true_env_set = std::set<int>{env.id};
  const auto after_cycle = [&](const StepResult& r) {
    ++cycles;
    if (const auto out = decode_set(r.out.eid_out); out.size() == 1) {
      if (!first_oriented) first_oriented = cycles;
      oriented = true;
    }
    if (first_oriented && cycles > *first_oriented) {
      ++res.post_orient_cycles;
      const bool ok = decode_set(r.out.eid_out) == true_env_set && last_visited >= 0 &&
                      mc.tail_loop().sole_hot() == last_visited;
      if (ok) ++res.oriented_cycles;
    }
  };

  const auto arrive = [&](std::pair<int, int> cell) -> std::optional<int> {
    const auto [mx, my] = torus_move(pos, cell, cfg.grid);
    pos = cell;
    const auto f = env.feature_at(cell.first, cell.second);
    ControlInputs in;
    in.xmove = mx;
    in.ymove = my;
    if (f) in.feature = SpikeVector::one_hot_at(*f, cfg.n_features);
    const StepResult r = st.step(in);
    if (f) {
      last_visited = *f;
      current_feature = *f;
    }
    after_cycle(r);
    st.compare_eid(r);
    return f;
  };

  const auto pause = [&]() {
    ControlInputs in;
    if (current_feature >= 0) in.feature = SpikeVector::one_hot_at(current_feature, cfg.n_features);
    const StepResult r = st.step(in);
    after_cycle(r);
    st.compare_eid(r);
  };

  while (cycles < cfg.episode_len) {
    if (!oriented) {
      // Orientation hop: compressed feature-to-feature walk.
      std::pair<int, int> goal;
      if (cfg.walk == WalkMode::Cells) {
        goal = {agent.below_int(cfg.grid), agent.below_int(cfg.grid)};
      } else {
        int next;
        const auto& succ = current_feature >= 0 ? successors[static_cast<std::size_t>(current_feature)]
                                                : std::vector<int>{};
        if (cfg.walk == WalkMode::LearnedSuccessors && !succ.empty()) {
          next = succ[static_cast<std::size_t>(agent.below_int(static_cast<int>(succ.size())))];
        } else if (current_feature >= 0 && cfg.n_features > 1) {
          next = agent.below_int(cfg.n_features - 1);
          if (next >= current_feature) ++next;
        } else {
          next = agent.below_int(cfg.n_features);
        }
        goal = env.placement[static_cast<std::size_t>(next)];
      }
      const auto f = arrive(goal);
      if (cycles >= cfg.episode_len) break;
      if (f) pause();
      continue;
    }

    // Navigation: query a random target from the current feature.
    if (cfg.n_features < 2) {
      pause();  // nowhere to navigate; idle out the episode
      continue;
    }
    if (current_feature < 0) {
      // Oriented while standing on a featureless cell (after an error reset);
      // walk to some feature first.
      const int next = agent.below_int(cfg.n_features);
      const auto f = arrive(env.placement[static_cast<std::size_t>(next)]);
      if (f && cycles < cfg.episode_len) pause();
      continue;
    }
    int target = agent.below_int(cfg.n_features - 1);
    if (target >= current_feature) ++target;

    ControlInputs q;
    q.query = true;
    q.target = SpikeVector::one_hot_at(target, cfg.n_features);
    q.feature = SpikeVector::one_hot_at(current_feature, cfg.n_features);
    const StepResult r = st.step_mc(q);
    ++res.nav_queries;

    const auto dx = decode_sole(r.out.i_dx);
    const auto dy = decode_sole(r.out.i_dy);
    const bool accepted = dx && dy && !r.inference.i_dx.winners.empty() && !r.inference.i_dy.winners.empty() &&
                          r.inference.i_dx.winners[0].potential == accept_level &&
                          r.inference.i_dy.winners[0].potential == accept_level;
    after_cycle(r);
    if (accepted) {
      // Only consumed queries reach the oracle: the macrocolumn's state is
      // invariant across rejected probes, and the oracle's eId_out carry rule
      // would otherwise latch stale inferences the agent discarded.
      const RefOut ro = st.step_ref(q);
      st.compare_eid(r);
      st.compare_displacements(r, ro);
    }
    if (!accepted || cycles >= cfg.episode_len) continue;  // rejected: try another target

    const int sdx = displacement_to_signed(*dx, cfg.grid);
    const int sdy = displacement_to_signed(*dy, cfg.grid);
    const auto f = arrive({wrap(pos.first + sdx, cfg.grid), wrap(pos.second + sdy, cfg.grid)});
    if (cycles >= cfg.episode_len) break;
    if (f && *f == target) {
      pause();
      continue;
    }

    // Arrival feature differs from the target: navigation error.
    ++res.nav_errors;
    ControlInputs reset;
    reset.orient_init = true;
    const StepResult rr = st.step(reset);
    after_cycle(rr);
    st.compare_eid(rr);
    oriented = false;
    current_feature = f ? *f : -1;
  }

  if (first_oriented) res.steps_to_orient = first_oriented;
  return res;
}

namespace {

// Expected displacement-minicolumn contents after exploration: every stored
// edge except duplicate-geometry groups (whose segments fight over the eId
// line and never entrench).
std::vector<RefEdge> expected_without_duplicates(const std::vector<RefEdge>& all, const std::set<RefEdge>& dup) {
  std::vector<RefEdge> out;
  for (const auto& e : all)
    if (!dup.count(e)) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BenchRun run_benchmark(const Scenario& sc, RefModel* ref, CrossCheckReport* report, std::ostream* trace) {
  Macrocolumn mc = sc.make_macrocolumn();
  run_exploration(mc, sc, ref);

  BenchRun run;
  for (int i = 0; i < sc.cfg.n_envs; ++i) {
    EpisodeResult er;
    er.phase = "explore";
    er.env_id = i;
    er.seed = sc.cfg.seed;
    er.segments = sc.segments_used;
    run.episodes.push_back(er);
  }

  run.parity_ties = mc.place_cells().parity_tie_count();
  run.pl_edges = mc.place_cells().decode_edges().size();
  if (ref) run.ref_edges = ref->memory().size();

  if (ref && report) {
    report->exploration_memory_checked = true;
    auto ref_edges = ref->memory().edges();
    std::sort(ref_edges.begin(), ref_edges.end());
    const auto check = [&](const char* label, std::vector<RefEdge> got, const std::vector<RefEdge>& want) {
      if (got == want) return;
      report->exploration_memory_match = false;
      if (report->exploration_detail.empty())
        report->exploration_detail = std::string(label) + ": decoded " + std::to_string(got.size()) +
                                     " edges, oracle expects " + std::to_string(want.size());
    };
    check("i_eId", mc.place_cells().decode_edges(mc.place_cells().eid_column()), ref_edges);
    const auto expect_disp = expected_without_duplicates(ref_edges, sc.duplicate_geometry);
    check("i_dx", mc.place_cells().decode_edges(mc.place_cells().dx_column()), expect_disp);
    check("i_dy", mc.place_cells().decode_edges(mc.place_cells().dy_column()), expect_disp);
  }

  for (int i = 0; i < sc.cfg.n_envs; ++i)
    run.episodes.push_back(run_orientation_nav(mc, sc, i, ref, report, trace));
  return run;
}

CrossCheckReport cross_check(const BenchConfig& cfg) {
  const Scenario sc = make_scenario(cfg);
  RefModel ref(cfg.n_envs, cfg.grid);
  CrossCheckReport report;
  run_benchmark(sc, &ref, &report);
  return report;
}

Metrics summarize(const std::vector<EpisodeResult>& episodes) {
  Metrics m;
  std::vector<int> steps;
  std::vector<double> fractions;
  for (const auto& e : episodes) {
    if (e.phase != "orient_nav") continue;
    ++m.episodes;
    m.nav_queries += e.nav_queries;
    m.nav_errors += e.nav_errors;
    if (e.steps_to_orient) {
      ++m.orient_success;
      steps.push_back(*e.steps_to_orient);
      ++m.steps_hist[*e.steps_to_orient];
    }
    if (const auto f = e.oriented_fraction()) fractions.push_back(*f);
  }
  if (!steps.empty()) {
    std::sort(steps.begin(), steps.end());
    m.steps_median = steps[steps.size() / 2];
    m.steps_max = steps.back();
  }
  if (!fractions.empty()) {
    double sum = 0, mn = fractions.front();
    for (double f : fractions) {
      sum += f;
      mn = std::min(mn, f);
    }
    m.fraction_mean = sum / static_cast<double>(fractions.size());
    m.fraction_min = mn;
  }
  return m;
}

namespace {

std::string fmt_fraction(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string episodes_to_csv(const std::vector<EpisodeResult>& episodes) {
  std::ostringstream os;
  os << "phase,env_id,seed,segments,steps_to_orient,oriented_fraction,nav_queries,nav_errors\n";
  for (const auto& e : episodes) {
    os << e.phase << ',' << e.env_id << ',' << e.seed << ',' << e.segments << ',';
    if (e.phase == "orient_nav") {
      if (e.steps_to_orient) os << *e.steps_to_orient;
      os << ',';
      if (const auto f = e.oriented_fraction()) os << fmt_fraction(*f);
      os << ',' << e.nav_queries << ',' << e.nav_errors;
    } else {
      os << ",,,";
    }
    os << '\n';
  }
  return os.str();
}

std::string metrics_to_text(const Metrics& m, const std::string& prefix) {
  std::ostringstream os;
  os << prefix << "episodes = " << m.episodes << '\n';
  os << prefix << "orient.success = " << m.orient_success << '\n';
  if (m.steps_median) os << prefix << "orient.steps.median = " << *m.steps_median << '\n';
  if (m.steps_max) os << prefix << "orient.steps.max = " << *m.steps_max << '\n';
  for (const auto& [steps, count] : m.steps_hist)
    os << prefix << "orient.hist." << steps << " = " << count << '\n';
  os << prefix << "nav.queries = " << m.nav_queries << '\n';
  os << prefix << "nav.errors = " << m.nav_errors << '\n';
  if (m.fraction_mean) os << prefix << "oriented_fraction.mean = " << fmt_fraction(*m.fraction_mean) << '\n';
  if (m.fraction_min) os << prefix << "oriented_fraction.min = " << fmt_fraction(*m.fraction_min) << '\n';
  return os.str();
}

std::string config_to_text(const BenchConfig& cfg) {
  std::ostringstream os;
  os << "config.seed = " << cfg.seed << '\n';
  os << "config.n_envs = " << cfg.n_envs << '\n';
  os << "config.n_features = " << cfg.n_features << '\n';
  os << "config.grid = " << cfg.grid << '\n';
  os << "config.episode_len = " << cfg.episode_len << '\n';
  os << "config.visits = " << cfg.visits << '\n';
  os << "config.segments = " << (cfg.segments > 0 ? std::to_string(cfg.segments) : std::string("auto")) << '\n';
  os << "config.theta = " << cfg.params.theta << '\n';
  os << "config.w_b = " << cfg.params.w_b << '\n';
  os << "config.w_max = " << cfg.params.w_max << '\n';
  os << "config.capture = " << cfg.params.capture << '\n';
  os << "config.backoff = " << cfg.params.backoff << '\n';
  os << "config.search = " << cfg.params.search << '\n';
  os << "config.encoding = " << (cfg.encoding == DisplacementEncoding::OneHot ? "onehot" : "composite") << '\n';
  os << "config.learning_gate = " << (cfg.gate == LearningGate::CompleteVector ? "strict" : "loose") << '\n';
  os << "config.walk = "
     << (cfg.walk == WalkMode::LearnedSuccessors ? "learned"
         : cfg.walk == WalkMode::Features        ? "features"
                                                 : "cells")
     << '\n';
  return os.str();
}

std::string placements_to_text(const Scenario& sc) {
  std::ostringstream os;
  for (const auto& env : sc.envs)
    for (std::size_t f = 0; f < env.placement.size(); ++f)
      os << sc.names.env(env.id) << ' ' << sc.names.feature(static_cast<int>(f)) << ' ' << env.placement[f].first
         << ' ' << env.placement[f].second << '\n';
  return os.str();
}

namespace fixtures {

NameTable fig_names() { return NameTable::make(kFigEnvs, kFigFeatures); }

std::vector<RefEdge> fig6_edges() {
  const auto m = [](int v) { return ((v % kFigGrid) + kFigGrid) % kFigGrid; };
  // alpha=0 beta=1; A..E = 0..4
  return {
      {0, 1, m(-5), m(5), 0},   // alpha B -5  5 A
      {1, 4, m(3), m(4), 0},    // beta  E  3  4 A
      {1, 1, m(5), m(0), 0},    // beta  B  5  0 A
      {1, 0, m(-9), m(-4), 2},  // beta  A -9 -4 C
      {0, 4, m(-7), m(-1), 2},  // alpha E -7 -1 C
      {0, 2, m(4), m(4), 1},    // alpha C  4  4 B
      {1, 2, m(4), m(4), 1},    // beta  C  4  4 B
      {0, 0, m(8), m(-1), 3},   // alpha A  8 -1 D
      {1, 1, m(-6), m(1), 3},   // beta  B -6  1 D
      {1, 3, m(8), m(-5), 4},   // beta  D  8 -5 E
      {0, 3, m(0), m(7), 4},    // alpha D  0  7 E
  };
}

Environment beta_environment() {
  // Placements consistent with every beta edge of the contents table.
  Environment env;
  env.id = 1;
  env.grid = kFigGrid;
  env.placement = {{0, 0}, {25, 0}, {21, 26}, {19, 1}, {27, 26}};  // A B C D E
  return env;
}

void teach(Macrocolumn& mc, const std::vector<RefEdge>& edges, int reps) {
  const Dims dims = mc.dims();
  for (int pass = 0; pass < reps; ++pass) {
    for (const RefEdge& e : edges) {
      ControlInputs at_tail;
      at_tail.explore = true;
      at_tail.eid_in = SpikeVector::one_hot_at(e.eid, dims.n_envs);
      at_tail.feature = SpikeVector::one_hot_at(e.tail, dims.n_features);
      mc.step(at_tail);

      ControlInputs to_head;
      to_head.explore = true;
      to_head.eid_in = SpikeVector::one_hot_at(e.eid, dims.n_envs);
      to_head.xmove = displacement_to_signed(e.dx, dims.grid);
      to_head.ymove = displacement_to_signed(e.dy, dims.grid);
      to_head.feature = SpikeVector::one_hot_at(e.head, dims.n_features);
      mc.step(to_head);
    }
  }
}

void teach(RefModel& ref, const std::vector<RefEdge>& edges) {
  for (const RefEdge& e : edges) ref.memory().store(e);
}

namespace {

ControlInputs move_input(int mx, int my, std::optional<int> feature, bool query = false,
                         std::optional<int> target = std::nullopt) {
  ControlInputs in;
  in.xmove = mx;
  in.ymove = my;
  if (feature) in.feature = SpikeVector::one_hot_at(*feature, kFigFeatures);
  if (query) {
    in.query = true;
    in.target = SpikeVector::one_hot_at(*target, kFigFeatures);
  }
  return in;
}

ControlInputs explore_input(int env, int mx, int my, std::optional<int> feature) {
  ControlInputs in = move_input(mx, my, feature);
  in.explore = true;
  in.eid_in = SpikeVector::one_hot_at(env, kFigEnvs);
  return in;
}

}  // namespace

std::vector<ScriptRow> fig7_script() {
  // A=0 B=1 C=2 D=3 E=4; alpha=0 beta=1; displacements signed.
  const std::set<int> both{0, 1};
  const std::set<int> beta{1};
  std::vector<ScriptRow> rows;
  const auto add = [&](ControlInputs in, std::set<int> eid, std::optional<int> tail, std::optional<int> dx,
                       std::optional<int> dy, std::optional<int> head, std::optional<std::set<int>> i_eid,
                       std::optional<int> i_dx = std::nullopt, std::optional<int> i_dy = std::nullopt) {
    ScriptRow r;
    r.in = std::move(in);
    r.eid = std::move(eid);
    r.tail = tail;
    r.dx = dx;
    r.dy = dy;
    r.head = head;
    r.i_eid = std::move(i_eid);
    r.i_dx = i_dx;
    r.i_dy = i_dy;
    rows.push_back(std::move(r));
  };
  using O = std::optional<int>;
  add(move_input(-1, 1, 2), both, O{}, O{}, O{}, 2, both);          // first feature reached
  add(move_input(0, 0, 2), both, 2, O{}, O{}, 2, both);             // pause, access PL
  add(move_input(-2, -2, std::nullopt), both, 2, -2, -2, O{}, std::set<int>{});  // featureless cell
  add(move_input(6, 6, 1), both, 2, 4, 4, 1, both);                 // second feature; still ambiguous
  add(move_input(0, 0, 1), both, 1, O{}, O{}, 1, both);             // pause
  add(move_input(-6, 1, 3), both, 1, -6, 1, 3, beta);               // third feature; orientation complete
  add(move_input(0, 0, 3), beta, 3, O{}, O{}, 3, beta);             // pause, then navigate to E
  add(move_input(0, 0, 3, true, 4), beta, 3, O{}, O{}, 4, beta, 8, -5);  // query target E
  add(move_input(8, -5, 4), beta, 3, 8, -5, 4, beta);               // inferred displacement as movement
  return rows;
}

std::vector<ScriptRow> fig5_script() {
  std::vector<ScriptRow> rows;
  const std::set<int> alpha{0};
  using O = std::optional<int>;
  const auto add = [&](int mx, int my, std::optional<int> feature, O tail, O dx, O dy, O head) {
    ScriptRow r;
    r.in = explore_input(0, mx, my, feature);
    r.eid = alpha;
    r.tail = tail;
    r.dx = dx;
    r.dy = dy;
    r.head = head;
    rows.push_back(std::move(r));
  };
  add(0, 0, std::nullopt, O{}, O{}, O{}, O{});  // initial quiescent cycle
  add(-1, 1, 2, O{}, O{}, O{}, 2);
  add(0, 0, 2, 2, O{}, O{}, 2);
  add(1, 1, std::nullopt, 2, 1, 1, O{});
  add(3, 3, 1, 2, 4, 4, 1);  // store [alpha C 4 4 B]
  add(0, 0, 1, 1, O{}, O{}, 1);
  add(-2, -3, std::nullopt, 1, -2, -3, O{});
  add(-3, 8, 0, 1, -5, 5, 0);  // store [alpha B -5 5 A]
  add(0, 0, 0, 0, O{}, O{}, 0);
  add(-5, 5, std::nullopt, 0, -5, 5, O{});
  add(13, -6, 3, 0, 8, -1, 3);  // store [alpha A 8 -1 D]
  add(0, 0, 3, 3, O{}, O{}, 3);
  add(8, -1, std::nullopt, 3, 8, -1, O{});
  add(-8, 8, 4, 3, 0, 7, 4);  // store [alpha D 0 7 E]
  add(0, 0, 4, 4, O{}, O{}, 4);
  add(0, 7, std::nullopt, 4, 0, 7, O{});
  add(-7, -8, 2, 4, -7, -1, 2);  // store [alpha E -7 -1 C]
  return rows;
}

}  // namespace fixtures

}  // namespace mcol
