#include "mcol/neural.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mcol {

void SdpParams::validate() const {
  if (theta < 1) throw std::invalid_argument("SdpParams: theta must be >= 1");
  if (w_b < 0 || w_b > w_max) throw std::invalid_argument("SdpParams: need 0 <= w_b <= w_max");
  if (capture < 0 || backoff < 0 || search < 0) throw std::invalid_argument("SdpParams: increments must be >= 0");
}

std::string DendriteWeights::to_table() const {
  std::ostringstream os;
  for (int row = 0; row < d; ++row) {
    for (int col = 0; col < s; ++col) {
      if (col) os << ' ';
      os << at(row, col);
    }
    os << '\n';
  }
  return os.str();
}

DendriteWeights DendriteWeights::from_table(const std::string& text) {
  std::istringstream is(text);
  std::vector<std::vector<int>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<int> row;
    int v;
    while (ls >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};
  DendriteWeights w(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()), 0);
  for (int r = 0; r < w.d; ++r) {
    if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != w.s)
      throw std::invalid_argument("DendriteWeights::from_table: ragged rows");
    for (int c = 0; c < w.s; ++c) w.at(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  return w;
}

int segment_potential(const std::vector<int>& column, const SpikeVector& distal, int theta) {
  if (static_cast<int>(column.size()) != distal.width())
    throw std::invalid_argument("segment_potential: width mismatch");
  int p = 0;
  for (int i = 0; i < distal.width(); ++i)
    if (distal.bit(i)) p += column[static_cast<std::size_t>(i)];
  return p >= theta ? p : 0;
}

std::vector<int> wta_1(const std::vector<int>& potentials) {
  std::vector<int> out(potentials.size(), 0);
  int best = 0, best_idx = -1;
  for (std::size_t i = 0; i < potentials.size(); ++i) {
    if (potentials[i] > best) {
      best = potentials[i];
      best_idx = static_cast<int>(i);
    }
  }
  if (best_idx >= 0) out[static_cast<std::size_t>(best_idx)] = best;
  return out;
}

std::vector<int> wta_t(const std::vector<int>& potentials) {
  std::vector<int> out(potentials.size(), 0);
  int best = 0;
  for (int p : potentials) best = std::max(best, p);
  if (best > 0)
    for (std::size_t i = 0; i < potentials.size(); ++i)
      if (potentials[i] == best) out[i] = best;
  return out;
}

std::pair<int, std::optional<int>> dendrite_infer(const DendriteWeights& weights, const SpikeVector& distal,
                                                  bool proximal, const SdpParams& params) {
  if (weights.d != distal.width()) throw std::invalid_argument("dendrite_infer: distal width mismatch");
  if (!proximal) return {0, std::nullopt};
  const auto hot = distal.hot();
  int best = 0, best_seg = -1;
  for (int seg = 0; seg < weights.s; ++seg) {
    int p = 0;
    for (int row : hot) p += weights.at(row, seg);
    if (p >= params.theta && p > best) {
      best = p;
      best_seg = seg;
    }
  }
  if (best_seg < 0) return {0, std::nullopt};
  return {best, best_seg};
}

std::pair<int, std::optional<WinnerRecord>> neuron_infer(const std::vector<DendriteWeights>& dendrites,
                                                         const SpikeVector& distal, const SpikeVector& proximal,
                                                         const SdpParams& params) {
  if (proximal.width() != static_cast<int>(dendrites.size()))
    throw std::invalid_argument("neuron_infer: proximal width must equal dendrite count");
  int best = 0;
  std::optional<WinnerRecord> winner;
  for (int den = 0; den < static_cast<int>(dendrites.size()); ++den) {
    auto [p, seg] = dendrite_infer(dendrites[static_cast<std::size_t>(den)], distal, proximal.bit(den), params);
    if (seg && p > best) {
      best = p;
      winner = WinnerRecord{-1, den, *seg, p};
    }
  }
  return {best, winner};
}

DendriteWeights sdp_apply(const DendriteWeights& weights, const SpikeVector& x, const SpikeVector& z,
                          const SdpParams& params) {
  if (x.width() != weights.d || z.width() != weights.s) throw std::invalid_argument("sdp_apply: shape mismatch");
  DendriteWeights out = weights;
  for (int row = 0; row < weights.d; ++row) {
    const bool xi = x.bit(row);
    for (int col = 0; col < weights.s; ++col) {
      const bool zj = z.bit(col);
      int& w = out.at(row, col);
      if (xi && zj)
        w = std::min(w + params.capture, params.w_max);
      else if (!xi && zj)
        w = std::max(w - params.backoff, 0);
      else if (xi && !zj && w < params.w_b)
        w = std::min(w + params.search, params.w_b);
    }
  }
  return out;
}

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational overlap_backoff_bound(int m, int v, int c) {
  if (v <= 0 || v >= m) throw std::invalid_argument("overlap_backoff_bound: need 0 < v < m");
  return Rational(static_cast<long long>(c) * v, m - v);
}

int temporal_spike_time(int m, int theta) {
  if (m < 1) throw std::invalid_argument("temporal_spike_time: need m >= 1");
  return (theta + m - 1) / m - 1;
}

}  // namespace mcol
