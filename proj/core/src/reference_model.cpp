#include "mcol/reference_model.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mcol/grid_cells.hpp"

namespace mcol {

bool RefMemory::store(const RefEdge& e) {
  if (index_.count(e)) return false;
  index_.insert(e);
  edges_.push_back(e);
  return true;
}

bool RefMemory::contains(const RefEdge& e) const { return index_.count(e) != 0; }

std::string RefMemory::to_text(const NameTable& names, int grid) const {
  std::ostringstream os;
  std::vector<int> heads;
  for (const auto& e : edges_)
    if (std::find(heads.begin(), heads.end(), e.head) == heads.end()) heads.push_back(e.head);
  std::sort(heads.begin(), heads.end());
  for (int h : heads) {
    for (const auto& e : edges_) {
      if (e.head != h) continue;
      os << names.env(e.eid) << ' ' << names.feature(e.tail) << ' ' << displacement_to_signed(e.dx, grid) << ' '
         << displacement_to_signed(e.dy, grid) << ' ' << names.feature(e.head) << '\n';
    }
  }
  return os.str();
}

RefMemory RefMemory::from_text(const std::string& text, const NameTable& names, int grid) {
  RefMemory mem;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string env, tail, head;
    long long dx, dy;
    if (!(ls >> env)) continue;  // blank line
    if (!(ls >> tail >> dx >> dy >> head))
      throw std::invalid_argument("edge file line " + std::to_string(lineno) + ": expected `eId tail dx dy head`");
    const auto mod = [grid](long long v) { return static_cast<int>(((v % grid) + grid) % grid); };
    mem.store(RefEdge{names.env_index(env), names.feature_index(tail), mod(dx), mod(dy), names.feature_index(head)});
  }
  return mem;
}

RefOut ref_query(const RefMemory& mem, const RefQueryVector& sv) {
  RefOut out;
  if (!sv.head) return out;

  int global_best = 0;
  std::vector<std::pair<const RefEdge*, int>> scored;
  for (const auto& e : mem.edges()) {
    if (e.head != *sv.head) continue;
    int score = 0;
    if (sv.eid.count(e.eid)) ++score;
    if (sv.tail && e.tail == *sv.tail) ++score;
    if (sv.dx && e.dx == *sv.dx) ++score;
    if (sv.dy && e.dy == *sv.dy) ++score;
    scored.emplace_back(&e, score);
    global_best = std::max(global_best, score);
  }
  if (global_best < 1) return out;

  // i_eid: every environment whose best-scoring edge ties the global best.
  std::map<int, int> best_per_eid;
  // i_dx / i_dy: best score per held value, winner is the smallest value
  // whose best ties the global best.
  std::map<int, int> best_per_dx, best_per_dy;
  for (const auto& entry : scored) {
    const RefEdge* e = entry.first;
    const int score = entry.second;
    auto bump = [score](std::map<int, int>& m, int key) {
      auto [it, fresh] = m.try_emplace(key, score);
      if (!fresh) it->second = std::max(it->second, score);
    };
    bump(best_per_eid, e->eid);
    bump(best_per_dx, e->dx);
    bump(best_per_dy, e->dy);
  }
  for (const auto& [eid, best] : best_per_eid)
    if (best == global_best) out.i_eid.insert(eid);
  for (const auto& [dx, best] : best_per_dx) {
    if (best == global_best) {
      out.i_dx = dx;
      break;
    }
  }
  for (const auto& [dy, best] : best_per_dy) {
    if (best == global_best) {
      out.i_dy = dy;
      break;
    }
  }
  return out;
}

RefOut RefModel::step(const RefInputs& in) {
  const auto mod = [this](long long v) { return static_cast<int>(((v % grid_) + grid_) % grid_); };

  // Displacement accumulates before the query; the odometer starts when a
  // nonzero move leaves a feature cell (tail set, displacement null). The
  // feature-triggered reset happens at end of cycle, so the arrival query
  // still sees the accumulated value.
  if (state_.dx) {
    state_.dx = mod(*state_.dx + in.xmove);
    state_.dy = mod(*state_.dy + in.ymove);
  } else if (state_.tail && (in.xmove != 0 || in.ymove != 0)) {
    state_.dx = mod(in.xmove);
    state_.dy = mod(in.ymove);
  }

  const std::optional<int> head = in.query ? in.target : in.feature;
  const std::set<int>& eff_eid = in.explore ? in.eid_in : state_.eid_out;

  last_query_ = RefQueryVector{eff_eid, state_.tail, state_.dx, state_.dy, head};
  RefOut out = ref_query(memory_, last_query_);

  if (!out.i_eid.empty()) state_.eid_out = out.i_eid;
  if (in.feature) state_.tail = in.feature;

  if (in.explore && head && last_query_.tail && last_query_.dx && last_query_.dy && eff_eid.size() == 1)
    memory_.store(RefEdge{*eff_eid.begin(), *last_query_.tail, *last_query_.dx, *last_query_.dy, *head});

  if (in.feature) {
    state_.dx.reset();
    state_.dy.reset();
  }
  return out;
}

void RefModel::orient_init() {
  state_.eid_out.clear();
  for (int e = 0; e < n_envs_; ++e) state_.eid_out.insert(e);
  state_.tail.reset();
  state_.dx.reset();
  state_.dy.reset();
}

}  // namespace mcol
