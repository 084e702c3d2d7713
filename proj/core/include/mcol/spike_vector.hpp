#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace mcol {

/// Fixed-width binary spike volley. The all-zero vector is the canonical
/// representation of null ("no spike" is the only available null).
class SpikeVector {
 public:
  SpikeVector() = default;
  explicit SpikeVector(int width) : bits_(static_cast<std::size_t>(width), 0) {}

  static SpikeVector null_of(int width) { return SpikeVector(width); }
  static SpikeVector ones(int width) {
    SpikeVector v(width);
    for (auto& b : v.bits_) b = 1;
    return v;
  }
  // 0-based hot position.
  static SpikeVector one_hot_at(int pos, int width);
  static SpikeVector from_string(const std::string& s);  // e.g. "0010"

  int width() const { return static_cast<int>(bits_.size()); }
  bool is_null() const;
  int count() const;

  bool bit(int i) const { return bits_[static_cast<std::size_t>(i)] != 0; }
  void set_bit(int i, bool v = true) { bits_[static_cast<std::size_t>(i)] = v ? 1 : 0; }

  // 0-based positions of set bits.
  std::vector<int> hot() const;
  // Hot position of a 1-hot vector, -1 when null; throws if more than one bit set.
  int sole_hot() const;

  SpikeVector slice(int offset, int width) const;
  SpikeVector concat(const SpikeVector& other) const;

  // Cyclic rotation moving the hot position of line i to line (i+amount) mod width.
  SpikeVector rotated(int amount) const;

  std::string to_string() const;

  bool operator==(const SpikeVector&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Ordered (name, width) fields; the wire layout of concatenated bundles.
struct BundleLayout {
  struct Field {
    std::string name;
    int width = 0;
  };
  std::vector<Field> fields;

  BundleLayout() = default;
  BundleLayout(std::initializer_list<Field> fs);

  int total_width() const;
  int offset_of(int field_index) const;
  int index_of(const std::string& name) const;

  SpikeVector pack(const std::vector<SpikeVector>& parts) const;
  std::vector<SpikeVector> unpack(const SpikeVector& whole) const;

  // |0010|0100|...| rendering, fields delimited by bars.
  std::string render(const SpikeVector& whole) const;
};

}  // namespace mcol
