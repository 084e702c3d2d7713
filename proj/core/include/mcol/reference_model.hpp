#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mcol/names.hpp"

namespace mcol {

/// One labeled directed edge of an environment graph; displacements are held
/// modulo the grid width. Only complete vectors are ever stored.
struct RefEdge {
  int eid = 0;
  int tail = 0;
  int dx = 0;
  int dy = 0;
  int head = 0;

  auto operator<=>(const RefEdge&) const = default;
};

/// Exact set-of-edges associative memory (insertion ordered, idempotent).
class RefMemory {
 public:
  bool store(const RefEdge& e);  // false when already present
  const std::vector<RefEdge>& edges() const { return edges_; }
  bool contains(const RefEdge& e) const;
  std::size_t size() const { return edges_.size(); }

  // One edge per line, `eId tail dx dy head`, signed displacement
  // representatives, grouped by head.
  std::string to_text(const NameTable& names, int grid) const;
  static RefMemory from_text(const std::string& text, const NameTable& names, int grid);

 private:
  std::vector<RefEdge> edges_;
  std::set<RefEdge> index_;
};

struct RefQueryVector {
  std::set<int> eid;
  std::optional<int> tail;
  std::optional<int> dx;
  std::optional<int> dy;
  std::optional<int> head;
};

struct RefOut {
  std::set<int> i_eid;  // empty = null
  std::optional<int> i_dx;
  std::optional<int> i_dy;
};

/// Associative lookup mirroring the three independent minicolumns: i_eid via
/// the t-WTA analog, i_dx / i_dy via the 1-WTA lowest-value analog. Per-edge
/// score counts matches among eId-set membership, tail, dx, dy; only edges
/// with the queried head compete, and a best score of zero yields null.
RefOut ref_query(const RefMemory& mem, const RefQueryVector& sv);

struct RefState {
  std::set<int> eid_out;
  std::optional<int> tail;
  std::optional<int> dx;
  std::optional<int> dy;
};

struct RefInputs {
  std::set<int> eid_in;
  int xmove = 0;
  int ymove = 0;
  std::optional<int> feature;
  std::optional<int> target;
  bool explore = false;
  bool query = false;
};

/// The state-machine oracle. One step() call is one gamma cycle.
class RefModel {
 public:
  RefModel(int n_envs, int grid) : n_envs_(n_envs), grid_(grid) {}

  int n_envs() const { return n_envs_; }
  int grid() const { return grid_; }
  RefState& state() { return state_; }
  const RefState& state() const { return state_; }
  RefMemory& memory() { return memory_; }
  const RefMemory& memory() const { return memory_; }

  RefOut step(const RefInputs& in);
  void orient_init();

  // The record queried by the most recent step (pre-update tail, accumulated
  // displacement); exposed for traces and tests.
  const RefQueryVector& last_query() const { return last_query_; }

 private:
  int n_envs_;
  int grid_;
  RefState state_;
  RefMemory memory_;
  RefQueryVector last_query_;
};

}  // namespace mcol
