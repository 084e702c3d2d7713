#pragma once

#include <string>
#include <utility>

#include "mcol/grid_cells.hpp"
#include "mcol/names.hpp"
#include "mcol/place_cells.hpp"
#include "mcol/spike_vector.hpp"

namespace mcol {

/// Control select: a conventional multiplexor with a two-rail 1-hot select
/// input. [1,0] passes d0, [0,1] passes d1.
SpikeVector select_c(std::pair<bool, bool> sel, const SpikeVector& d0, const SpikeVector& d1);

/// Data select: new data replaces old data; d1 when non-null, else d0.
SpikeVector select_d(const SpikeVector& d0, const SpikeVector& d1);

struct Dims {
  int n_envs = 0;
  int n_features = 0;
  int grid = 0;
  int segments = 0;
};

struct ControlInputs {
  bool explore = false;
  bool query = false;
  bool orient_init = false;
  SpikeVector eid_in;   // width n_envs, k-hot allowed; empty means null
  SpikeVector target;   // width n_features, 0- or 1-hot
  SpikeVector feature;  // width n_features, 0- or 1-hot
  int xmove = 0;
  int ymove = 0;
};

struct StepOutputs {
  SpikeVector eid_out;
  SpikeVector i_dx;
  SpikeVector i_dy;
};

struct StepResult {
  StepOutputs out;
  PlInference inference;  // winners and potentials of this cycle's query
  StateBundles queried;   // the state vector the PL saw
};

/// The assembled unit: tail/eId/displacement autaptic loops wired to GD and
/// PL, stepped one gamma cycle at a time. Instances are plain values; copies
/// are independent.
class Macrocolumn {
 public:
  Macrocolumn(const Dims& dims, const SdpParams& params, LearningGate gate = LearningGate::CompleteVector,
              DisplacementEncoding enc = DisplacementEncoding::OneHot);

  const Dims& dims() const { return dims_; }
  StepResult step(const ControlInputs& in);
  void orient_reset();

  const SpikeVector& tail_loop() const { return tail_loop_; }
  const SpikeVector& eid_loop() const { return eid_loop_; }
  const DisplacementState& displacement() const { return disp_; }
  PlaceCells& place_cells() { return pl_; }
  const PlaceCells& place_cells() const { return pl_; }

 private:
  Dims dims_;
  SpikeVector tail_loop_;
  SpikeVector eid_loop_;
  DisplacementState disp_;
  PlaceCells pl_;
};

/// Tab-separated per-cycle trace line: step index, mode bits, decoded state
/// vector, decoded outputs, winner triples. With raw_bits the packed
/// |field|field|...| volley is appended as a final column.
std::string trace_line(int step, const ControlInputs& in, const StepResult& r, const NameTable& names, int grid,
                       bool raw_bits = false);

}  // namespace mcol
