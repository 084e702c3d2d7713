#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcol/spike_vector.hpp"

namespace mcol {

/// SDP parameters (benchmark defaults from the simulation parameter table).
struct SdpParams {
  int theta = 8;
  int w_b = 6;
  int w_max = 8;
  int capture = 1;
  int backoff = 4;
  int search = 0;

  void validate() const;
};

/// d x s array of synaptic weights: one column per segment, one row per
/// distal line. Stored row-major to match the serialized table.
struct DendriteWeights {
  int d = 0;
  int s = 0;
  std::vector<int> w;  // w[row * s + col]

  DendriteWeights() = default;
  DendriteWeights(int d_, int s_, int fill) : d(d_), s(s_), w(static_cast<std::size_t>(d_) * s_, fill) {}

  int& at(int row, int col) { return w[static_cast<std::size_t>(row) * s + col]; }
  int at(int row, int col) const { return w[static_cast<std::size_t>(row) * s + col]; }

  std::string to_table() const;
  static DendriteWeights from_table(const std::string& text);
};

struct WinnerRecord {
  int neuron = -1;
  int dendrite = -1;
  int segment = -1;
  int potential = 0;
};

/// Point integrator: dot product of the distal volley with one segment's
/// weight column, emitted only when it reaches threshold.
int segment_potential(const std::vector<int>& column, const SpikeVector& distal, int theta);

/// 1-WTA: keep the maximum element (lowest index on ties), zero the rest.
std::vector<int> wta_1(const std::vector<int>& potentials);
/// t-WTA: keep every element equal to the maximum.
std::vector<int> wta_t(const std::vector<int>& potentials);

/// Per-segment potentials, segment-level 1-WTA, gated by the proximal bit.
/// Returns the surviving potential and its segment, or (0, nullopt).
std::pair<int, std::optional<int>> dendrite_infer(const DendriteWeights& weights, const SpikeVector& distal,
                                                  bool proximal, const SdpParams& params);

/// Max over proximally-gated dendrites; ties go to the lowest dendrite index.
std::pair<int, std::optional<WinnerRecord>> neuron_infer(const std::vector<DendriteWeights>& dendrites,
                                                         const SpikeVector& distal, const SpikeVector& proximal,
                                                         const SdpParams& params);

/// One SDP pass over a d x s weight array given the distal input x and the
/// segment output volley z. The three active cases are mutually exclusive:
///   x=1,z=1 -> +capture (<= w_max); x=0,z=1 -> -backoff (>= 0);
///   x=1,z=0 -> +search (<= w_b, never pulls an already-higher weight down).
DendriteWeights sdp_apply(const DendriteWeights& weights, const SpikeVector& x, const SpikeVector& z,
                          const SdpParams& params);

/// Exact rational, normalized, for the cluster-overlap backoff bound.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational(long long n, long long d);
  bool operator==(const Rational&) const = default;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Exclusive upper bound on backoff keeping overlap-v vectors (of m spikes)
/// in an established cluster: b(m-v) < c*v, i.e. b < c*v/(m-v).
Rational overlap_backoff_bound(int m, int v, int c);

/// Spike time of the equivalent ramp-no-leak temporal model for m matched
/// maximum-weight synapses: ceil(theta/m) - 1.
int temporal_spike_time(int m, int theta);

}  // namespace mcol
