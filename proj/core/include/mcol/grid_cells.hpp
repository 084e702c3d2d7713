#pragma once

#include <optional>
#include <vector>

#include "mcol/codec.hpp"
#include "mcol/spike_vector.hpp"

namespace mcol {

enum class DisplacementEncoding { OneHot, Composite };

/// Path-integration state: the (dx, dy) odometer held as rotating hot vectors
/// on a torus of width `grid`. Null (no vectors) means "no displacement is
/// being tracked" and is distinct from a zero displacement.
class DisplacementState {
 public:
  DisplacementState(int grid, DisplacementEncoding enc = DisplacementEncoding::OneHot);

  int grid() const { return grid_; }
  DisplacementEncoding encoding() const { return enc_; }
  bool is_null() const { return !vecs_.has_value(); }

  void reset() { vecs_.reset(); }
  void set(int dx, int dy);  // values taken mod grid

  std::optional<std::pair<int, int>> decoded() const;

  // One-hot views of width `grid`, for the PL state-vector boundary.
  SpikeVector dx_one_hot() const;
  SpikeVector dy_one_hot() const;

  // Raw held vectors (encoding-specific width); null state gives all-zero.
  SpikeVector dx_raw() const;
  SpikeVector dy_raw() const;

  // Trace rendering: "(sdx, sdy)" with signed representatives, "(-, -)" when null.
  std::string to_display() const;

  void rotate(int xmove, int ymove);

 private:
  int grid_;
  DisplacementEncoding enc_;
  std::optional<codec::CompositeCode> code_;  // composite only
  std::optional<std::pair<SpikeVector, SpikeVector>> vecs_;
};

/// One odometer step. feature_present resets the state; from null the move is
/// encoded directly (movement away from a feature starts the odometer);
/// otherwise each vector rotates by its move modulo the grid width.
DisplacementState gd_step(const DisplacementState& d, int xmove, int ymove, bool feature_present);

/// Signed display representative of a torus displacement: m for
/// m <= floor((W-1)/2), otherwise m - W.
int displacement_to_signed(int m, int grid);

/// Pairwise-coprime composite fields whose product is exactly `grid`
/// (prime-power factorization).
std::vector<int> composite_fields_for(int grid);

}  // namespace mcol
