#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcol/codec.hpp"
#include "mcol/names.hpp"
#include "mcol/neural.hpp"
#include "mcol/reference_model.hpp"
#include "mcol/spike_vector.hpp"

namespace mcol {

using StateBundles = codec::StateBundles;

enum class WtaKind { One, All };  // 1-WTA / t-WTA

enum class LearningGate {
  CompleteVector,  // all five bundles non-null, eId 1-hot (default)
  HeadOnly,        // any cycle with a non-null head learns
};

struct MinicolumnResult {
  SpikeVector output;                 // binarized WTA survivors, width n_V
  std::vector<int> potentials;        // per neuron, pre-WTA
  std::vector<WinnerRecord> winners;  // one record per surviving neuron
};

/// A bank of multi-dendrite neurons, one per line of its value bundle V,
/// followed by WTA inhibition. Neuron i's distal input is [V_i | D2] where
/// D2 is the concatenation of the shared context bundles; the proximal input
/// is the head bundle, one dendrite per feature.
class Minicolumn {
 public:
  struct D2Field {
    std::string name;
    int width = 0;
  };
  struct DecodedSegment {
    int neuron = 0, dendrite = 0, segment = 0;
    std::vector<std::optional<int>> d2_values;  // per D2 field, hot line or nullopt
    bool partial = false;                       // some set weight below w_max
  };

  Minicolumn(std::string name, int n_neurons, std::vector<D2Field> d2, int n_features, int segments, WtaKind wta,
             const SdpParams& params);

  const std::string& name() const { return name_; }
  int n_neurons() const { return n_neurons_; }
  int segments() const { return segments_; }
  int distal_width() const { return 1 + d2_width_; }
  WtaKind wta() const { return wta_; }

  MinicolumnResult infer(const SpikeVector& value_bundle, const SpikeVector& d2, const SpikeVector& head) const;
  void learn(const SpikeVector& value_bundle, const SpikeVector& d2, int head_feature,
             const std::vector<WinnerRecord>& winners);

  DendriteWeights& dendrite_weights(int neuron, int feature);
  const DendriteWeights& dendrite_weights(int neuron, int feature) const;

  // Segments whose set weights (>= w_max - 1) form exactly one hot line per
  // bundle; the stored context read back out of the synapses.
  std::vector<DecodedSegment> decode_entrenched() const;

  std::uint64_t parity_tie_count() const { return parity_ties_; }

 private:
  SpikeVector neuron_distal(int neuron, const SpikeVector& value_bundle, const SpikeVector& d2) const;

  std::string name_;
  int n_neurons_;
  std::vector<D2Field> d2_fields_;
  int d2_width_;
  int n_features_;
  int segments_;
  WtaKind wta_;
  SdpParams params_;
  std::vector<DendriteWeights> weights_;  // [neuron * n_features + feature]
  std::uint64_t parity_ties_ = 0;
};

struct PlInference {
  MinicolumnResult i_eid;
  MinicolumnResult i_dx;
  MinicolumnResult i_dy;
};

/// The PL associative memory: three minicolumns (i_eId with t-WTA, i_dx and
/// i_dy with 1-WTA) fed the same state vector each cycle.
class PlaceCells {
 public:
  PlaceCells(int n_envs, int n_features, int grid, int segments, const SdpParams& params,
             LearningGate gate = LearningGate::CompleteVector);

  int n_envs() const { return n_envs_; }
  int n_features() const { return n_features_; }
  int grid() const { return grid_; }
  int segments() const { return segments_; }
  const SdpParams& params() const { return params_; }

  PlInference infer(const StateBundles& sv) const;
  void learn(const StateBundles& sv, const PlInference& inference);

  Minicolumn& eid_column() { return eid_; }
  Minicolumn& dx_column() { return dx_; }
  Minicolumn& dy_column() { return dy_; }
  const Minicolumn& eid_column() const { return eid_; }
  const Minicolumn& dx_column() const { return dx_; }
  const Minicolumn& dy_column() const { return dy_; }

  // Edges read back from one minicolumn's entrenched segments.
  std::vector<RefEdge> decode_edges(const Minicolumn& column) const;
  std::vector<RefEdge> decode_edges() const { return decode_edges(eid_); }

  // Weight tables for touched dendrites plus decoded summary lines.
  std::string dump(const NameTable& names) const;

  std::uint64_t parity_tie_count() const;

 private:
  bool gate_allows(const StateBundles& sv) const;

  int n_envs_, n_features_, grid_, segments_;
  SdpParams params_;
  LearningGate gate_;
  Minicolumn eid_, dx_, dy_;
};

}  // namespace mcol
