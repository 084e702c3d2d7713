#include "mcol/grid_cells.hpp"

#include <stdexcept>
#include <string>

namespace mcol {

namespace {
int mod_grid(long long v, int grid) {
  long long m = v % grid;
  if (m < 0) m += grid;
  return static_cast<int>(m);
}
}  // namespace

std::vector<int> composite_fields_for(int grid) {
  if (grid < 2) throw std::invalid_argument("composite_fields_for: grid must be >= 2");
  std::vector<int> fields;
  int n = grid;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int q = 1;
    while (n % p == 0) {
      q *= p;
      n /= p;
    }
    fields.push_back(q);
  }
  if (n > 1) fields.push_back(n);
  return fields;
}

DisplacementState::DisplacementState(int grid, DisplacementEncoding enc) : grid_(grid), enc_(enc) {
  if (grid < 1) throw std::invalid_argument("DisplacementState: grid must be >= 1");
  if (enc_ == DisplacementEncoding::Composite) code_.emplace(composite_fields_for(grid));
}

void DisplacementState::set(int dx, int dy) {
  const int x = mod_grid(dx, grid_), y = mod_grid(dy, grid_);
  if (enc_ == DisplacementEncoding::OneHot)
    vecs_ = {SpikeVector::one_hot_at(x, grid_), SpikeVector::one_hot_at(y, grid_)};
  else
    vecs_ = {code_->encode(x), code_->encode(y)};
}

std::optional<std::pair<int, int>> DisplacementState::decoded() const {
  if (!vecs_) return std::nullopt;
  if (enc_ == DisplacementEncoding::OneHot) return {{vecs_->first.sole_hot(), vecs_->second.sole_hot()}};
  return {{static_cast<int>(code_->decode(vecs_->first)), static_cast<int>(code_->decode(vecs_->second))}};
}

SpikeVector DisplacementState::dx_one_hot() const {
  const auto d = decoded();
  return d ? SpikeVector::one_hot_at(d->first, grid_) : SpikeVector::null_of(grid_);
}

SpikeVector DisplacementState::dy_one_hot() const {
  const auto d = decoded();
  return d ? SpikeVector::one_hot_at(d->second, grid_) : SpikeVector::null_of(grid_);
}

SpikeVector DisplacementState::dx_raw() const {
  const int w = enc_ == DisplacementEncoding::OneHot ? grid_ : code_->lines();
  return vecs_ ? vecs_->first : SpikeVector::null_of(w);
}

SpikeVector DisplacementState::dy_raw() const {
  const int w = enc_ == DisplacementEncoding::OneHot ? grid_ : code_->lines();
  return vecs_ ? vecs_->second : SpikeVector::null_of(w);
}

std::string DisplacementState::to_display() const {
  const auto d = decoded();
  if (!d) return "(-, -)";
  return "(" + std::to_string(displacement_to_signed(d->first, grid_)) + ", " +
         std::to_string(displacement_to_signed(d->second, grid_)) + ")";
}

void DisplacementState::rotate(int xmove, int ymove) {
  if (!vecs_) return;
  if (enc_ == DisplacementEncoding::OneHot)
    vecs_ = {vecs_->first.rotated(mod_grid(xmove, grid_)), vecs_->second.rotated(mod_grid(ymove, grid_))};
  else
    vecs_ = {code_->rotate(vecs_->first, mod_grid(xmove, grid_)), code_->rotate(vecs_->second, mod_grid(ymove, grid_))};
}

DisplacementState gd_step(const DisplacementState& d, int xmove, int ymove, bool feature_present) {
  DisplacementState out = d;
  if (feature_present) {
    out.reset();
  } else if (d.is_null()) {
    out.set(xmove, ymove);
  } else {
    out.rotate(xmove, ymove);
  }
  return out;
}

int displacement_to_signed(int m, int grid) {
  if (m < 0 || m >= grid) throw std::invalid_argument("displacement_to_signed: value out of range");
  return m <= (grid - 1) / 2 ? m : m - grid;
}

}  // namespace mcol
