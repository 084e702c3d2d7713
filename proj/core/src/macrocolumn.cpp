#include "mcol/macrocolumn.hpp"

#include <sstream>
#include <stdexcept>

#include "mcol/codec.hpp"

namespace mcol {

SpikeVector select_c(std::pair<bool, bool> sel, const SpikeVector& d0, const SpikeVector& d1) {
  if (sel.first == sel.second) throw std::invalid_argument("select_c: select input must be 1-hot two-rail");
  return sel.first ? d0 : d1;
}

SpikeVector select_d(const SpikeVector& d0, const SpikeVector& d1) {
  if (d0.width() != d1.width()) throw std::invalid_argument("select_d: width mismatch");
  return d1.is_null() ? d0 : d1;
}

namespace {

SpikeVector sized_or_null(const SpikeVector& v, int width, const char* what) {
  if (v.width() == 0) return SpikeVector::null_of(width);
  if (v.width() != width) throw std::invalid_argument(std::string("Macrocolumn: width mismatch on ") + what);
  return v;
}

void require_at_most_one_hot(const SpikeVector& v, const char* what) {
  if (v.count() > 1) throw std::invalid_argument(std::string("Macrocolumn: ") + what + " must be 0- or 1-hot");
}

}  // namespace

Macrocolumn::Macrocolumn(const Dims& dims, const SdpParams& params, LearningGate gate, DisplacementEncoding enc)
    : dims_(dims),
      tail_loop_(dims.n_features),
      eid_loop_(dims.n_envs),
      disp_(dims.grid, enc),
      pl_(dims.n_envs, dims.n_features, dims.grid, dims.segments, params, gate) {}

void Macrocolumn::orient_reset() {
  eid_loop_ = SpikeVector::ones(dims_.n_envs);
  tail_loop_ = SpikeVector::null_of(dims_.n_features);
  disp_.reset();
}

StepResult Macrocolumn::step(const ControlInputs& in) {
  const SpikeVector feature = sized_or_null(in.feature, dims_.n_features, "feature");
  const SpikeVector target = sized_or_null(in.target, dims_.n_features, "target");
  const SpikeVector eid_in = sized_or_null(in.eid_in, dims_.n_envs, "eId_in");
  require_at_most_one_hot(feature, "feature");
  require_at_most_one_hot(target, "target");

  StepResult r;
  if (in.orient_init) {
    orient_reset();
    r.out = StepOutputs{eid_loop_, SpikeVector::null_of(dims_.grid), SpikeVector::null_of(dims_.grid)};
    r.queried = StateBundles{eid_loop_, tail_loop_, SpikeVector::null_of(dims_.grid),
                             SpikeVector::null_of(dims_.grid), SpikeVector::null_of(dims_.n_features)};
    return r;
  }

  // Displacement accumulates before the query; a nonzero move leaving a
  // feature cell (tail held, odometer null) starts the odometer. The arrival
  // reset is applied at end of cycle so the query sees the accumulated value.
  if (!disp_.is_null())
    disp_.rotate(in.xmove, in.ymove);
  else if (!tail_loop_.is_null() && (in.xmove != 0 || in.ymove != 0))
    disp_.set(in.xmove, in.ymove);

  const SpikeVector head = select_c({!in.query, in.query}, feature, target);
  const SpikeVector effective_eid = select_c({!in.explore, in.explore}, eid_loop_, eid_in);

  r.queried = StateBundles{effective_eid, tail_loop_, disp_.dx_one_hot(), disp_.dy_one_hot(), head};
  r.inference = pl_.infer(r.queried);

  eid_loop_ = select_d(eid_loop_, r.inference.i_eid.output);
  // The tail loop captures the sensed feature; a query's target never enters
  // it (head == feature on every non-query cycle).
  tail_loop_ = select_d(tail_loop_, feature);

  if (in.explore) pl_.learn(r.queried, r.inference);

  if (!feature.is_null()) disp_.reset();

  r.out = StepOutputs{eid_loop_, r.inference.i_dx.output, r.inference.i_dy.output};
  return r;
}

namespace {

std::string decode_eid_set(const SpikeVector& v, const NameTable& names) {
  const auto hot = v.hot();
  if (hot.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < hot.size(); ++i) {
    if (i) s += ',';
    s += names.env(hot[i]);
  }
  return s;
}

std::string decode_feature(const SpikeVector& v, const NameTable& names) {
  const int f = v.sole_hot();
  return f < 0 ? "-" : names.feature(f);
}

std::string decode_disp(const SpikeVector& v, int grid) {
  const int d = v.sole_hot();
  return d < 0 ? "-" : std::to_string(displacement_to_signed(d, grid));
}

void append_winners(std::ostringstream& os, const char* label, const MinicolumnResult& res, bool& first) {
  for (const auto& w : res.winners) {
    if (!first) os << ' ';
    first = false;
    os << label << ':' << w.neuron << '/' << w.dendrite << '/' << w.segment << '@' << w.potential;
  }
}

}  // namespace

std::string trace_line(int step, const ControlInputs& in, const StepResult& r, const NameTable& names, int grid,
                       bool raw_bits) {
  std::ostringstream os;
  os << step << '\t';
  os << (in.explore ? 'E' : '-') << (in.query ? 'Q' : '-') << (in.orient_init ? 'I' : '-') << '\t';
  os << '[' << decode_eid_set(r.queried.eid, names) << ' ' << decode_feature(r.queried.tail, names) << ' '
     << decode_disp(r.queried.dx, grid) << ' ' << decode_disp(r.queried.dy, grid) << ' '
     << decode_feature(r.queried.head, names) << ']' << '\t';
  os << decode_eid_set(r.out.eid_out, names) << '\t' << decode_disp(r.out.i_dx, grid) << '\t'
     << decode_disp(r.out.i_dy, grid) << '\t';
  bool first = true;
  append_winners(os, "eId", r.inference.i_eid, first);
  append_winners(os, "dx", r.inference.i_dx, first);
  append_winners(os, "dy", r.inference.i_dy, first);
  if (first) os << '-';
  if (raw_bits) {
    const BundleLayout layout = codec::state_layout(r.queried.eid.width(), r.queried.tail.width(), grid);
    os << '\t'
       << layout.render(codec::pack_state_vector(r.queried.eid, r.queried.tail, r.queried.dx, r.queried.dy,
                                                 r.queried.head, layout));
  }
  return os.str();
}

}  // namespace mcol
