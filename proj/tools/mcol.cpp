// Command-line front end: run / sweep / verify / teach / trace.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mcol/codec.hpp"
#include "mcol/harness.hpp"

namespace fs = std::filesystem;
using namespace mcol;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitConfigError = 2;

struct Options {
  BenchConfig cfg;
  std::string out_dir = "out";
  std::string trace_file;
  std::string fixture;
  std::string edges_file;
  std::string segments_list = "16,12,8,4";
  int reps = 2;
  bool check_oracle = false;
  bool quick = false;
  bool raw_bits = false;
};

int parse_positive(const std::string& value, const std::string& key) {
  std::size_t used = 0;
  const int v = std::stoi(value, &used);
  if (used != value.size() || v < 0) throw std::invalid_argument("bad value for " + key + ": " + value);
  return v;
}

void apply_config_entry(BenchConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "seed")
    cfg.seed = std::stoull(value);
  else if (key == "n_envs")
    cfg.n_envs = parse_positive(value, key);
  else if (key == "n_features")
    cfg.n_features = parse_positive(value, key);
  else if (key == "grid")
    cfg.grid = parse_positive(value, key);
  else if (key == "episode_len")
    cfg.episode_len = parse_positive(value, key);
  else if (key == "visits")
    cfg.visits = parse_positive(value, key);
  else if (key == "segments")
    cfg.segments = value == "auto" ? 0 : parse_positive(value, key);
  else if (key == "theta")
    cfg.params.theta = parse_positive(value, key);
  else if (key == "w_b")
    cfg.params.w_b = parse_positive(value, key);
  else if (key == "w_max")
    cfg.params.w_max = parse_positive(value, key);
  else if (key == "capture")
    cfg.params.capture = parse_positive(value, key);
  else if (key == "backoff")
    cfg.params.backoff = parse_positive(value, key);
  else if (key == "search")
    cfg.params.search = parse_positive(value, key);
  else if (key == "encoding") {
    if (value == "onehot")
      cfg.encoding = DisplacementEncoding::OneHot;
    else if (value == "composite")
      cfg.encoding = DisplacementEncoding::Composite;
    else
      throw std::invalid_argument("encoding must be onehot or composite");
  } else if (key == "learning_gate") {
    if (value == "strict")
      cfg.gate = LearningGate::CompleteVector;
    else if (value == "loose")
      cfg.gate = LearningGate::HeadOnly;
    else
      throw std::invalid_argument("learning_gate must be strict or loose");
  } else if (key == "walk") {
    if (value == "learned")
      cfg.walk = WalkMode::LearnedSuccessors;
    else if (value == "features")
      cfg.walk = WalkMode::Features;
    else if (value == "cells")
      cfg.walk = WalkMode::Cells;
    else
      throw std::invalid_argument("walk must be learned, features or cells");
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

void load_config_file(BenchConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

Macrocolumn make_fig_column(const BenchConfig& cfg) {
  return Macrocolumn(Dims{fixtures::kFigEnvs, fixtures::kFigFeatures, fixtures::kFigGrid, 4}, cfg.params);
}

// Teach the contents-table fixture and replay the orientation/navigation
// movement column, emitting one trace line per cycle.
int run_fig7_trace(const BenchConfig& cfg, std::ostream& os, bool raw_bits) {
  Macrocolumn mc = make_fig_column(cfg);
  fixtures::teach(mc, fixtures::fig6_edges(), 2);
  const NameTable names = fixtures::fig_names();
  ControlInputs init;
  init.orient_init = true;
  os << trace_line(0, init, mc.step(init), names, fixtures::kFigGrid, raw_bits) << '\n';
  int step = 1;
  for (const auto& row : fixtures::fig7_script()) {
    const StepResult r = mc.step(row.in);
    os << trace_line(step++, row.in, r, names, fixtures::kFigGrid, raw_bits) << '\n';
  }
  return kExitOk;
}

int run_fig5_trace(const BenchConfig& cfg, std::ostream& os, bool raw_bits) {
  Macrocolumn mc = make_fig_column(cfg);
  const NameTable names = fixtures::fig_names();
  ControlInputs init;
  init.orient_init = true;
  os << trace_line(0, init, mc.step(init), names, fixtures::kFigGrid, raw_bits) << '\n';
  int step = 1;
  for (const auto& row : fixtures::fig5_script()) {
    const StepResult r = mc.step(row.in);
    os << trace_line(step++, row.in, r, names, fixtures::kFigGrid, raw_bits) << '\n';
  }
  os << "stored edges:\n";
  RefMemory mem;
  for (const auto& e : mc.place_cells().decode_edges()) mem.store(e);
  os << mem.to_text(names, fixtures::kFigGrid);
  return kExitOk;
}

int cmd_run(const Options& opt) {
  if (!opt.fixture.empty()) {
    if (opt.fixture != "fig6") {
      std::cerr << "unknown fixture: " << opt.fixture << "\n";
      return kExitConfigError;
    }
    std::ostringstream os;
    run_fig7_trace(opt.cfg, os, opt.raw_bits);
    if (!opt.trace_file.empty())
      write_file(opt.trace_file, os.str());
    else
      std::cout << os.str();
    return kExitOk;
  }

  const Scenario sc = make_scenario(opt.cfg);
  RefModel ref(opt.cfg.n_envs, opt.cfg.grid);
  CrossCheckReport report;
  std::ostringstream trace;
  const BenchRun run = run_benchmark(sc, opt.check_oracle ? &ref : nullptr, opt.check_oracle ? &report : nullptr,
                                     opt.trace_file.empty() ? nullptr : &trace);

  const Metrics m = summarize(run.episodes);
  std::ostringstream summary;
  summary << config_to_text(opt.cfg);
  summary << "segments.bound = " << sc.segment_bound << '\n';
  summary << "segments.used = " << sc.segments_used << '\n';
  summary << "scenario.duplicate_edges = " << sc.duplicate_geometry.size() << '\n';
  summary << "explore.pl_edges = " << run.pl_edges << '\n';
  if (opt.check_oracle) summary << "explore.ref_edges = " << run.ref_edges << '\n';
  summary << "explore.parity_ties = " << run.parity_ties << '\n';
  summary << metrics_to_text(m, "bench.");
  if (opt.check_oracle) {
    summary << "oracle.cycles_compared = " << report.cycles_compared << '\n';
    summary << "oracle.clean = " << (report.clean() ? "yes" : "no") << '\n';
    if (report.divergence) summary << "oracle.divergence = " << report.divergence->describe() << '\n';
    if (!report.exploration_memory_match) summary << "oracle.memory = " << report.exploration_detail << '\n';
  }

  const fs::path out(opt.out_dir);
  write_file(out / "results.csv", episodes_to_csv(run.episodes));
  write_file(out / "summary.txt", summary.str());
  write_file(out / "environments.txt", placements_to_text(sc));
  RefMemory truth;
  for (const auto& g : sc.graphs)
    for (const auto& e : g) truth.store(e);
  write_file(out / "edges.txt", truth.to_text(sc.names, sc.cfg.grid));
  if (!opt.trace_file.empty()) write_file(opt.trace_file, trace.str());
  std::cout << summary.str();

  if (opt.check_oracle && !report.clean()) return kExitVerifyFail;
  return kExitOk;
}

int cmd_sweep(const Options& opt) {
  std::vector<int> points;
  std::stringstream ss(opt.segments_list);
  std::string tok;
  while (std::getline(ss, tok, ',')) points.push_back(parse_positive(tok, "segments-list"));
  if (points.empty()) {
    std::cerr << "empty segment list\n";
    return kExitConfigError;
  }

  std::vector<EpisodeResult> all;
  std::ostringstream summary;
  summary << config_to_text(opt.cfg);
  std::vector<std::pair<int, double>> means;
  for (int s : points) {
    BenchConfig cfg = opt.cfg;
    cfg.segments = s;
    const Scenario sc = make_scenario(cfg);
    const BenchRun run = run_benchmark(sc);
    all.insert(all.end(), run.episodes.begin(), run.episodes.end());
    const Metrics m = summarize(run.episodes);
    const std::string prefix = "sweep.s" + std::to_string(s) + ".";
    summary << metrics_to_text(m, prefix);
    if (m.fraction_mean) means.emplace_back(s, *m.fraction_mean);
  }
  // advisory: oriented fraction should not degrade as segments grow
  bool monotone = true;
  for (std::size_t i = 1; i < means.size(); ++i) {
    const auto& [s_hi, f_hi] = means[i - 1];
    const auto& [s_lo, f_lo] = means[i];
    if (s_hi > s_lo && f_hi + 1e-9 < f_lo) monotone = false;
    if (s_hi < s_lo && f_lo + 1e-9 < f_hi) monotone = false;
  }
  summary << "sweep.monotone_advisory = " << (monotone ? "ok" : "violated") << '\n';

  const fs::path out(opt.out_dir);
  write_file(out / "results.csv", episodes_to_csv(all));
  write_file(out / "summary.txt", summary.str());
  std::cout << summary.str();
  return kExitOk;
}

int cmd_verify(const Options& opt) {
  int failures = 0;
  const auto check = [&](const char* name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "ok   " : "FAIL ") << name;
    if (!ok && !detail.empty()) std::cout << " (" << detail << ")";
    std::cout << '\n';
    if (!ok) ++failures;
  };

  // desk-scale oracle lockstep: 2 environments, 15x15, 5 features
  BenchConfig desk = opt.cfg;
  desk.n_envs = 2;
  desk.n_features = 5;
  desk.grid = 15;
  desk.episode_len = 60;
  desk.segments = 4;
  const CrossCheckReport report = cross_check(desk);
  check("oracle lockstep (desk scenario)", report.clean(),
        report.divergence ? report.divergence->describe() : report.exploration_detail);

  // invariant spot checks
  {
    const Rational b = overlap_backoff_bound(64, 48, 1);
    check("cluster overlap bound 48/16", b.num == 3 && b.den == 1);
  }
  {
    bool ok = true;
    for (int theta = 1; theta <= 16 && ok; ++theta)
      for (int m1 = 2; m1 <= 16 && ok; ++m1)
        ok = temporal_spike_time(m1, theta) <= temporal_spike_time(m1 - 1, theta);
    check("temporal spike times non-increasing", ok);
  }
  {
    const auto one = wta_1({5, 9, 9, 2});
    const auto all = wta_t({5, 9, 9, 2});
    check("wta tie rules", one == std::vector<int>{0, 9, 0, 0} && all == std::vector<int>{0, 9, 9, 0});
  }

  if (!opt.quick) {
    {
      const codec::CompositeCode code({7, 8, 9});
      std::set<std::string> seen;
      for (long long v = 0; v < code.capacity(); ++v) seen.insert(code.encode(v).to_string());
      check("composite code capacity 504", seen.size() == 504);
    }
    {
      SdpParams p = opt.cfg.params;
      Rng rng(1234);
      DendriteWeights w(6, 4, p.w_b);
      bool ok = true;
      for (int i = 0; i < 100000 && ok; ++i) {
        SpikeVector x(6), z(4);
        for (int b = 0; b < 6; ++b)
          if (rng.below(2)) x.set_bit(b);
        if (rng.below(4) != 0) z.set_bit(rng.below_int(4));
        w = sdp_apply(w, x, z, p);
        for (int v : w.w) ok = ok && v >= 0 && v <= p.w_max;
      }
      check("weight range under fuzzed updates", ok);
    }
  }

  if (failures) {
    std::cout << failures << " check(s) failed\n";
    return kExitVerifyFail;
  }
  std::cout << "all checks passed\n";
  return kExitOk;
}

int cmd_teach(const Options& opt) {
  std::vector<RefEdge> edges;
  NameTable names;
  int grid = opt.cfg.grid;
  Dims dims;
  if (!opt.edges_file.empty()) {
    names = NameTable::make(opt.cfg.n_envs, opt.cfg.n_features);
    std::ifstream in(opt.edges_file);
    if (!in) {
      std::cerr << "cannot open " << opt.edges_file << "\n";
      return kExitConfigError;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    edges = RefMemory::from_text(buf.str(), names, grid).edges();
    dims = Dims{opt.cfg.n_envs, opt.cfg.n_features, grid, opt.cfg.segments > 0 ? opt.cfg.segments : 4};
  } else {
    names = fixtures::fig_names();
    edges = fixtures::fig6_edges();
    grid = fixtures::kFigGrid;
    dims = Dims{fixtures::kFigEnvs, fixtures::kFigFeatures, grid, opt.cfg.segments > 0 ? opt.cfg.segments : 4};
  }

  Macrocolumn mc(dims, opt.cfg.params, opt.cfg.gate);
  fixtures::teach(mc, edges, opt.reps);

  std::ostringstream os;
  os << "taught " << edges.size() << " edges, " << opt.reps << " pass(es)\n";
  RefMemory decoded;
  for (const auto& e : mc.place_cells().decode_edges()) decoded.store(e);
  os << "decoded " << decoded.size() << " entrenched segments\n";
  os << decoded.to_text(names, grid);
  os << "--\n";
  os << mc.place_cells().dump(names);

  if (!opt.trace_file.empty())
    write_file(opt.trace_file, os.str());
  else
    std::cout << os.str();
  return kExitOk;
}

int cmd_trace(const Options& opt) {
  std::ostringstream os;
  int rc;
  if (opt.fixture == "fig5")
    rc = run_fig5_trace(opt.cfg, os, opt.raw_bits);
  else if (opt.fixture.empty() || opt.fixture == "fig7" || opt.fixture == "fig6")
    rc = run_fig7_trace(opt.cfg, os, opt.raw_bits);
  else {
    std::cerr << "unknown fixture: " << opt.fixture << "\n";
    return kExitConfigError;
  }
  if (!opt.trace_file.empty())
    write_file(opt.trace_file, os.str());
  else
    std::cout << os.str();
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mcol: spiking macrocolumn simulator and mouse-in-the-dark benchmark"};
  app.require_subcommand(1);

  Options opt;
  std::string config_file;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_file, "flat key = value config file");
    cmd->add_option("--seed", opt.cfg.seed, "master seed");
    cmd->add_option("--envs", opt.cfg.n_envs, "environment count");
    cmd->add_option("--features", opt.cfg.n_features, "features per environment");
    cmd->add_option("--grid", opt.cfg.grid, "torus width");
    cmd->add_option("--episode-len", opt.cfg.episode_len, "cycles per episode");
    cmd->add_option("--visits", opt.cfg.visits, "visits per feature during exploration");
    cmd->add_option("--segments", opt.cfg.segments, "segments per dendrite (0 = auto bound)");
    cmd->add_option("--theta", opt.cfg.params.theta, "segment threshold");
    cmd->add_option("--w-b", opt.cfg.params.w_b, "baseline weight / search cap");
    cmd->add_option("--w-max", opt.cfg.params.w_max, "maximum weight");
    cmd->add_option("--capture", opt.cfg.params.capture, "capture increment");
    cmd->add_option("--backoff", opt.cfg.params.backoff, "backoff decrement");
    cmd->add_option("--search", opt.cfg.params.search, "search increment");
    cmd->add_option("--encoding", [&](const std::vector<std::string>& v) {
      apply_config_entry(opt.cfg, "encoding", v.back());
      return true;
    }, "displacement encoding: onehot | composite");
    cmd->add_option("--learning-gate", [&](const std::vector<std::string>& v) {
      apply_config_entry(opt.cfg, "learning_gate", v.back());
      return true;
    }, "strict (complete vectors) | loose (any head)");
    cmd->add_option("--walk", [&](const std::vector<std::string>& v) {
      apply_config_entry(opt.cfg, "walk", v.back());
      return true;
    }, "orientation walk: learned | features | cells");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--trace-file", opt.trace_file, "write per-cycle trace here");
  };

  CLI::App* run = app.add_subcommand("run", "exploration then orientation/navigation episodes");
  add_common(run);
  run->add_option("--fixture", opt.fixture, "fig6: teach the contents table and replay the orientation walk");
  run->add_flag("--check-oracle", opt.check_oracle, "run the reference model in lockstep");

  CLI::App* sweep = app.add_subcommand("sweep", "navigation quality across segment counts");
  add_common(sweep);
  sweep->add_option("--segments-list", opt.segments_list, "comma separated segment counts");

  CLI::App* verify = app.add_subcommand("verify", "oracle lockstep gate plus invariant checks");
  add_common(verify);
  verify->add_flag("--quick", opt.quick, "skip the slower exhaustive checks");

  CLI::App* teach = app.add_subcommand("teach", "present an edge list and dump the place cells");
  add_common(teach);
  teach->add_option("--edges", opt.edges_file, "edge file: `eId tail dx dy head` per line");
  teach->add_option("--fixture", opt.fixture, "fig6 (default when --edges is absent)");
  teach->add_option("--reps", opt.reps, "presentation passes over the list");

  CLI::App* trace = app.add_subcommand("trace", "per-cycle trace of a fixture replay");
  add_common(trace);
  trace->add_option("--fixture", opt.fixture, "fig7 (default) | fig5");
  trace->add_flag("--raw", opt.raw_bits, "append the packed |field|field| volley to each line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfigError;
  }

  try {
    // file first, then re-apply command line overrides on top
    if (!config_file.empty()) {
      BenchConfig from_file;
      load_config_file(from_file, config_file);
      BenchConfig overrides = opt.cfg;
      opt.cfg = from_file;
      // command-line options that were explicitly set win; CLI11 already
      // wrote them into `overrides`, so replay any non-default entries
      const BenchConfig defaults;
      if (overrides.seed != defaults.seed) opt.cfg.seed = overrides.seed;
      if (overrides.n_envs != defaults.n_envs) opt.cfg.n_envs = overrides.n_envs;
      if (overrides.n_features != defaults.n_features) opt.cfg.n_features = overrides.n_features;
      if (overrides.grid != defaults.grid) opt.cfg.grid = overrides.grid;
      if (overrides.episode_len != defaults.episode_len) opt.cfg.episode_len = overrides.episode_len;
      if (overrides.visits != defaults.visits) opt.cfg.visits = overrides.visits;
      if (overrides.segments != defaults.segments) opt.cfg.segments = overrides.segments;
      if (overrides.params.theta != defaults.params.theta) opt.cfg.params.theta = overrides.params.theta;
      if (overrides.params.w_b != defaults.params.w_b) opt.cfg.params.w_b = overrides.params.w_b;
      if (overrides.params.w_max != defaults.params.w_max) opt.cfg.params.w_max = overrides.params.w_max;
      if (overrides.params.capture != defaults.params.capture) opt.cfg.params.capture = overrides.params.capture;
      if (overrides.params.backoff != defaults.params.backoff) opt.cfg.params.backoff = overrides.params.backoff;
      if (overrides.params.search != defaults.params.search) opt.cfg.params.search = overrides.params.search;
      if (overrides.encoding != defaults.encoding) opt.cfg.encoding = overrides.encoding;
      if (overrides.gate != defaults.gate) opt.cfg.gate = overrides.gate;
      if (overrides.walk != defaults.walk) opt.cfg.walk = overrides.walk;
    }

    if (run->parsed()) return cmd_run(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (verify->parsed()) return cmd_verify(opt);
    if (teach->parsed()) return cmd_teach(opt);
    if (trace->parsed()) return cmd_trace(opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFail;
  }
  return kExitOk;
}
