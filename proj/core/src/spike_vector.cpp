#include "mcol/spike_vector.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mcol {

SpikeVector SpikeVector::one_hot_at(int pos, int width) {
  if (width < 1 || pos < 0 || pos >= width) throw std::invalid_argument("one_hot_at: position out of range");
  SpikeVector v(width);
  v.bits_[static_cast<std::size_t>(pos)] = 1;
  return v;
}

SpikeVector SpikeVector::from_string(const std::string& s) {
  SpikeVector v(static_cast<int>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      v.bits_[i] = 1;
    else if (s[i] != '0')
      throw std::invalid_argument("from_string: expected only 0/1 characters");
  }
  return v;
}

bool SpikeVector::is_null() const {
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b == 0; });
}

int SpikeVector::count() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<int> SpikeVector::hot() const {
  std::vector<int> out;
  for (int i = 0; i < width(); ++i)
    if (bits_[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

int SpikeVector::sole_hot() const {
  int found = -1;
  for (int i = 0; i < width(); ++i) {
    if (!bits_[static_cast<std::size_t>(i)]) continue;
    if (found >= 0) throw std::logic_error("sole_hot: vector is not 0- or 1-hot");
    found = i;
  }
  return found;
}

SpikeVector SpikeVector::slice(int offset, int w) const {
  if (offset < 0 || w < 0 || offset + w > width()) throw std::invalid_argument("slice: out of range");
  SpikeVector v(w);
  std::copy_n(bits_.begin() + offset, w, v.bits_.begin());
  return v;
}

SpikeVector SpikeVector::concat(const SpikeVector& other) const {
  SpikeVector v(width() + other.width());
  std::copy(bits_.begin(), bits_.end(), v.bits_.begin());
  std::copy(other.bits_.begin(), other.bits_.end(), v.bits_.begin() + width());
  return v;
}

SpikeVector SpikeVector::rotated(int amount) const {
  const int w = width();
  if (w == 0) return *this;
  int shift = amount % w;
  if (shift < 0) shift += w;
  SpikeVector v(w);
  for (int i = 0; i < w; ++i)
    if (bits_[static_cast<std::size_t>(i)]) v.bits_[static_cast<std::size_t>((i + shift) % w)] = 1;
  return v;
}

std::string SpikeVector::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) s[i] = '1';
  return s;
}

BundleLayout::BundleLayout(std::initializer_list<Field> fs) : fields(fs) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].width < 1) throw std::invalid_argument("BundleLayout: field width must be >= 1");
    for (std::size_t j = i + 1; j < fields.size(); ++j)
      if (fields[i].name == fields[j].name) throw std::invalid_argument("BundleLayout: duplicate field name");
  }
}

int BundleLayout::total_width() const {
  return std::accumulate(fields.begin(), fields.end(), 0,
                         [](int acc, const Field& f) { return acc + f.width; });
}

int BundleLayout::offset_of(int field_index) const {
  int off = 0;
  for (int i = 0; i < field_index; ++i) off += fields[static_cast<std::size_t>(i)].width;
  return off;
}

int BundleLayout::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < fields.size(); ++i)
    if (fields[i].name == name) return static_cast<int>(i);
  throw std::invalid_argument("BundleLayout: no field named " + name);
}

SpikeVector BundleLayout::pack(const std::vector<SpikeVector>& parts) const {
  if (parts.size() != fields.size()) throw std::invalid_argument("pack: wrong number of parts");
  SpikeVector whole(total_width());
  int off = 0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (parts[i].width() != fields[i].width) throw std::invalid_argument("pack: width mismatch in field " + fields[i].name);
    for (int b = 0; b < parts[i].width(); ++b)
      if (parts[i].bit(b)) whole.set_bit(off + b);
    off += fields[i].width;
  }
  return whole;
}

std::vector<SpikeVector> BundleLayout::unpack(const SpikeVector& whole) const {
  if (whole.width() != total_width()) throw std::invalid_argument("unpack: width mismatch");
  std::vector<SpikeVector> parts;
  parts.reserve(fields.size());
  int off = 0;
  for (const Field& f : fields) {
    parts.push_back(whole.slice(off, f.width));
    off += f.width;
  }
  return parts;
}

std::string BundleLayout::render(const SpikeVector& whole) const {
  const auto parts = unpack(whole);
  std::string s = "|";
  for (const auto& p : parts) {
    s += p.to_string();
    s += '|';
  }
  return s;
}

}  // namespace mcol
