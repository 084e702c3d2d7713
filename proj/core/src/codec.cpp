#include "mcol/codec.hpp"

#include <numeric>
#include <stdexcept>

namespace mcol::codec {

SpikeVector encode_one_hot(int index, int width) {
  if (width < 1 || index < 1 || index > width) throw std::invalid_argument("encode_one_hot: index out of range");
  return SpikeVector::one_hot_at(index - 1, width);
}

std::set<int> decode_hot_set(const SpikeVector& v) {
  std::set<int> out;
  for (int p : v.hot()) out.insert(p + 1);
  return out;
}

BundleLayout state_layout(int n_envs, int n_features, int grid) {
  return BundleLayout{{"eId", n_envs}, {"tail", n_features}, {"dx", grid}, {"dy", grid}, {"head", n_features}};
}

SpikeVector pack_state_vector(const SpikeVector& eid, const SpikeVector& tail, const SpikeVector& dx,
                              const SpikeVector& dy, const SpikeVector& head, const BundleLayout& layout) {
  return layout.pack({eid, tail, dx, dy, head});
}

StateBundles unpack_state_vector(const SpikeVector& whole, const BundleLayout& layout) {
  auto parts = layout.unpack(whole);
  if (parts.size() != 5) throw std::invalid_argument("unpack_state_vector: layout must have 5 bundles");
  return StateBundles{parts[0], parts[1], parts[2], parts[3], parts[4]};
}

CompositeCode::CompositeCode(std::vector<int> field_sizes) : sizes_(std::move(field_sizes)) {
  if (sizes_.empty()) throw std::invalid_argument("CompositeCode: no fields");
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] < 1) throw std::invalid_argument("CompositeCode: field sizes must be positive");
    for (std::size_t j = i + 1; j < sizes_.size(); ++j)
      if (std::gcd(sizes_[i], sizes_[j]) != 1)
        throw std::invalid_argument("CompositeCode: field sizes must be pairwise coprime");
    capacity_ *= sizes_[i];
    lines_ += sizes_[i];
  }
}

SpikeVector CompositeCode::encode(long long value) const {
  if (value < 0 || value >= capacity_) throw std::invalid_argument("CompositeCode::encode: value out of range");
  SpikeVector v(lines_);
  int off = 0;
  for (int size : sizes_) {
    v.set_bit(off + static_cast<int>(value % size));
    off += size;
  }
  return v;
}

long long CompositeCode::decode(const SpikeVector& v) const {
  if (v.width() != lines_) throw std::invalid_argument("CompositeCode::decode: width mismatch");
  // CRT reconstruction from per-field residues.
  long long x = 0, modulus = 1;
  int off = 0;
  for (int size : sizes_) {
    const int r = v.slice(off, size).sole_hot();
    if (r < 0) throw std::invalid_argument("CompositeCode::decode: null field");
    // Solve x' ≡ x (mod modulus), x' ≡ r (mod size).
    long long step = 0;
    while ((x + step * modulus) % size != r) ++step;
    x += step * modulus;
    modulus *= size;
    off += size;
  }
  return x;
}

SpikeVector CompositeCode::rotate(const SpikeVector& v, long long amount) const {
  if (v.width() != lines_) throw std::invalid_argument("CompositeCode::rotate: width mismatch");
  SpikeVector out(lines_);
  int off = 0;
  for (int size : sizes_) {
    const auto field = v.slice(off, size).rotated(static_cast<int>(((amount % size) + size) % size));
    for (int b = 0; b < size; ++b)
      if (field.bit(b)) out.set_bit(off + b);
    off += size;
  }
  return out;
}

}  // namespace mcol::codec
