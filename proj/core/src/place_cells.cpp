#include "mcol/place_cells.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mcol/grid_cells.hpp"

namespace mcol {

Minicolumn::Minicolumn(std::string name, int n_neurons, std::vector<D2Field> d2, int n_features, int segments,
                       WtaKind wta, const SdpParams& params)
    : name_(std::move(name)),
      n_neurons_(n_neurons),
      d2_fields_(std::move(d2)),
      d2_width_(0),
      n_features_(n_features),
      segments_(segments),
      wta_(wta),
      params_(params) {
  params_.validate();
  if (n_neurons_ < 1 || n_features_ < 1 || segments_ < 1) throw std::invalid_argument("Minicolumn: bad dimensions");
  for (const auto& f : d2_fields_) d2_width_ += f.width;
  weights_.reserve(static_cast<std::size_t>(n_neurons_) * n_features_);
  for (int i = 0; i < n_neurons_ * n_features_; ++i)
    weights_.emplace_back(distal_width(), segments_, params_.w_b);
}

DendriteWeights& Minicolumn::dendrite_weights(int neuron, int feature) {
  return weights_[static_cast<std::size_t>(neuron) * n_features_ + feature];
}

const DendriteWeights& Minicolumn::dendrite_weights(int neuron, int feature) const {
  return weights_[static_cast<std::size_t>(neuron) * n_features_ + feature];
}

SpikeVector Minicolumn::neuron_distal(int neuron, const SpikeVector& value_bundle, const SpikeVector& d2) const {
  SpikeVector x(distal_width());
  if (value_bundle.bit(neuron)) x.set_bit(0);
  for (int i = 0; i < d2.width(); ++i)
    if (d2.bit(i)) x.set_bit(1 + i);
  return x;
}

MinicolumnResult Minicolumn::infer(const SpikeVector& value_bundle, const SpikeVector& d2,
                                   const SpikeVector& head) const {
  if (value_bundle.width() != n_neurons_ || d2.width() != d2_width_ || head.width() != n_features_)
    throw std::invalid_argument("Minicolumn::infer: bundle width mismatch");

  MinicolumnResult res;
  res.output = SpikeVector(n_neurons_);
  res.potentials.assign(static_cast<std::size_t>(n_neurons_), 0);

  const int head_feature = head.sole_hot();
  if (head_feature < 0) return res;  // proximal nullity: no spikes, no winners

  const auto d2_hot = d2.hot();
  std::vector<int> winning_segment(static_cast<std::size_t>(n_neurons_), -1);
  std::vector<int> seg_potentials(static_cast<std::size_t>(segments_));
  for (int n = 0; n < n_neurons_; ++n) {
    const DendriteWeights& w = dendrite_weights(n, head_feature);
    const bool own = value_bundle.bit(n);
    for (int seg = 0; seg < segments_; ++seg) {
      int p = own ? w.at(0, seg) : 0;
      for (int h : d2_hot) p += w.at(1 + h, seg);
      seg_potentials[static_cast<std::size_t>(seg)] = p >= params_.theta ? p : 0;
    }
    int best = 0, best_seg = -1;
    for (int seg = 0; seg < segments_; ++seg) {
      if (seg_potentials[static_cast<std::size_t>(seg)] > best) {
        best = seg_potentials[static_cast<std::size_t>(seg)];
        best_seg = seg;
      }
    }
    res.potentials[static_cast<std::size_t>(n)] = best;
    winning_segment[static_cast<std::size_t>(n)] = best_seg;
  }

  const std::vector<int> kept = wta_ == WtaKind::One ? wta_1(res.potentials) : wta_t(res.potentials);
  for (int n = 0; n < n_neurons_; ++n) {
    if (kept[static_cast<std::size_t>(n)] > 0) {
      res.output.set_bit(n);
      res.winners.push_back(WinnerRecord{n, head_feature, winning_segment[static_cast<std::size_t>(n)],
                                         res.potentials[static_cast<std::size_t>(n)]});
    }
  }
  return res;
}

void Minicolumn::learn(const SpikeVector& value_bundle, const SpikeVector& d2, int head_feature,
                       const std::vector<WinnerRecord>& winners) {
  for (const WinnerRecord& win : winners) {
    DendriteWeights& w = dendrite_weights(win.neuron, head_feature);
    const SpikeVector x = neuron_distal(win.neuron, value_bundle, d2);

    // Parity-tie bookkeeping: a trained segment winning at exactly the fresh
    // baseline while untouched segments remain merges two contexts.
    const int fresh_baseline = x.count() * params_.w_b;
    if (win.potential == fresh_baseline) {
      bool winner_is_fresh = true;
      bool fresh_exists = false;
      for (int seg = 0; seg < segments_; ++seg) {
        bool all_base = true;
        for (int row = 0; row < w.d; ++row)
          if (w.at(row, seg) != params_.w_b) {
            all_base = false;
            break;
          }
        if (all_base && seg != win.segment) fresh_exists = true;
        if (seg == win.segment) winner_is_fresh = all_base;
      }
      if (!winner_is_fresh && fresh_exists) ++parity_ties_;
    }

    SpikeVector z(segments_);
    z.set_bit(win.segment);
    w = sdp_apply(w, x, z, params_);
  }
}

std::vector<Minicolumn::DecodedSegment> Minicolumn::decode_entrenched() const {
  std::vector<DecodedSegment> out;
  const int set_level = params_.w_max - 1;
  for (int n = 0; n < n_neurons_; ++n) {
    for (int f = 0; f < n_features_; ++f) {
      const DendriteWeights& w = dendrite_weights(n, f);
      for (int seg = 0; seg < segments_; ++seg) {
        if (w.at(0, seg) < set_level) continue;  // D1 line must be stored
        DecodedSegment dec;
        dec.neuron = n;
        dec.dendrite = f;
        dec.segment = seg;
        dec.partial = w.at(0, seg) < params_.w_max;
        bool ok = true;
        int row = 1;
        for (const auto& field : d2_fields_) {
          std::optional<int> hot;
          for (int i = 0; i < field.width && ok; ++i) {
            if (w.at(row + i, seg) >= set_level) {
              if (hot)
                ok = false;  // more than one stored line in a bundle
              else {
                hot = i;
                if (w.at(row + i, seg) < params_.w_max) dec.partial = true;
              }
            }
          }
          if (!hot) ok = false;
          dec.d2_values.push_back(hot);
          row += field.width;
        }
        if (ok) out.push_back(std::move(dec));
      }
    }
  }
  return out;
}

PlaceCells::PlaceCells(int n_envs, int n_features, int grid, int segments, const SdpParams& params, LearningGate gate)
    : n_envs_(n_envs),
      n_features_(n_features),
      grid_(grid),
      segments_(segments),
      params_(params),
      gate_(gate),
      eid_("i_eId", n_envs, {{"tail", n_features}, {"dx", grid}, {"dy", grid}}, n_features, segments, WtaKind::All,
           params),
      dx_("i_dx", grid, {{"eId", n_envs}, {"tail", n_features}, {"dy", grid}}, n_features, segments, WtaKind::One,
          params),
      dy_("i_dy", grid, {{"eId", n_envs}, {"tail", n_features}, {"dx", grid}}, n_features, segments, WtaKind::One,
          params) {}

PlInference PlaceCells::infer(const StateBundles& sv) const {
  PlInference inf;
  inf.i_eid = eid_.infer(sv.eid, sv.tail.concat(sv.dx).concat(sv.dy), sv.head);
  inf.i_dx = dx_.infer(sv.dx, sv.eid.concat(sv.tail).concat(sv.dy), sv.head);
  inf.i_dy = dy_.infer(sv.dy, sv.eid.concat(sv.tail).concat(sv.dx), sv.head);
  return inf;
}

bool PlaceCells::gate_allows(const StateBundles& sv) const {
  if (gate_ == LearningGate::HeadOnly) return !sv.head.is_null();
  return sv.eid.count() == 1 && sv.tail.count() == 1 && sv.dx.count() == 1 && sv.dy.count() == 1 &&
         sv.head.count() == 1;
}

void PlaceCells::learn(const StateBundles& sv, const PlInference& inference) {
  if (!gate_allows(sv)) return;
  const int head_feature = sv.head.sole_hot();
  if (head_feature < 0) return;
  eid_.learn(sv.eid, sv.tail.concat(sv.dx).concat(sv.dy), head_feature, inference.i_eid.winners);
  dx_.learn(sv.dx, sv.eid.concat(sv.tail).concat(sv.dy), head_feature, inference.i_dx.winners);
  dy_.learn(sv.dy, sv.eid.concat(sv.tail).concat(sv.dx), head_feature, inference.i_dy.winners);
}

std::vector<RefEdge> PlaceCells::decode_edges(const Minicolumn& column) const {
  std::vector<RefEdge> out;
  for (const auto& dec : column.decode_entrenched()) {
    RefEdge e;
    e.head = dec.dendrite;
    if (&column == &eid_) {
      if (!dec.d2_values[0] || !dec.d2_values[1] || !dec.d2_values[2]) continue;
      e.eid = dec.neuron;
      e.tail = *dec.d2_values[0];
      e.dx = *dec.d2_values[1];
      e.dy = *dec.d2_values[2];
    } else if (&column == &dx_) {
      e.eid = *dec.d2_values[0];
      e.tail = *dec.d2_values[1];
      e.dx = dec.neuron;
      e.dy = *dec.d2_values[2];
    } else {
      e.eid = *dec.d2_values[0];
      e.tail = *dec.d2_values[1];
      e.dx = *dec.d2_values[2];
      e.dy = dec.neuron;
    }
    out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string PlaceCells::dump(const NameTable& names) const {
  std::ostringstream os;
  const auto neuron_label = [&](const Minicolumn& col, int n) -> std::string {
    if (&col == &eid_) return names.env(n);
    return std::to_string(displacement_to_signed(n, grid_));
  };
  for (const Minicolumn* col : {&eid_, &dx_, &dy_}) {
    os << "minicolumn " << col->name() << '\n';
    auto decoded = col->decode_entrenched();
    for (int n = 0; n < col->n_neurons(); ++n) {
      for (int f = 0; f < n_features_; ++f) {
        const DendriteWeights& w = col->dendrite_weights(n, f);
        const bool touched = std::any_of(w.w.begin(), w.w.end(), [&](int v) { return v != params_.w_b; });
        if (!touched) continue;
        os << "neuron " << neuron_label(*col, n) << " dendrite " << names.feature(f) << '\n';
        os << w.to_table();
        for (const auto& dec : decoded) {
          if (dec.neuron != n || dec.dendrite != f) continue;
          os << "segment " << dec.segment << ": ";
          RefEdge e;
          if (col == &eid_)
            e = RefEdge{n, *dec.d2_values[0], *dec.d2_values[1], *dec.d2_values[2], f};
          else if (col == &dx_)
            e = RefEdge{*dec.d2_values[0], *dec.d2_values[1], n, *dec.d2_values[2], f};
          else
            e = RefEdge{*dec.d2_values[0], *dec.d2_values[1], *dec.d2_values[2], n, f};
          os << names.env(e.eid) << ' ' << names.feature(e.tail) << ' ' << displacement_to_signed(e.dx, grid_) << ' '
             << displacement_to_signed(e.dy, grid_) << " -> " << names.feature(f);
          if (dec.partial) os << " (partial)";
          os << '\n';
        }
      }
    }
  }
  return os.str();
}

std::uint64_t PlaceCells::parity_tie_count() const {
  return eid_.parity_tie_count() + dx_.parity_tie_count() + dy_.parity_tie_count();
}

}  // namespace mcol
