#pragma once

#include <set>
#include <vector>

#include "mcol/spike_vector.hpp"

namespace mcol::codec {

// Line positions at this interface are 1-based, leftmost first, matching the
// printed |0010|...| convention. Everything else in the library is 0-based.

SpikeVector encode_one_hot(int index, int width);
std::set<int> decode_hot_set(const SpikeVector& v);

/// The five-bundle state-vector layout [eId | tail | dx | dy | head].
BundleLayout state_layout(int n_envs, int n_features, int grid);

SpikeVector pack_state_vector(const SpikeVector& eid, const SpikeVector& tail, const SpikeVector& dx,
                              const SpikeVector& dy, const SpikeVector& head, const BundleLayout& layout);
struct StateBundles {
  SpikeVector eid, tail, dx, dy, head;
};
StateBundles unpack_state_vector(const SpikeVector& whole, const BundleLayout& layout);

/// Residue coding over pairwise-coprime one-hot fields; capacity is the
/// product of the field sizes, lines used is their sum.
class CompositeCode {
 public:
  explicit CompositeCode(std::vector<int> field_sizes);

  const std::vector<int>& field_sizes() const { return sizes_; }
  long long capacity() const { return capacity_; }
  int lines() const { return lines_; }

  SpikeVector encode(long long value) const;
  long long decode(const SpikeVector& v) const;
  SpikeVector rotate(const SpikeVector& v, long long amount) const;

 private:
  std::vector<int> sizes_;
  long long capacity_ = 1;
  int lines_ = 0;
};

}  // namespace mcol::codec
