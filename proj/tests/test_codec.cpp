#include <doctest.h>

#include <set>
#include <stdexcept>

#include "mcol/codec.hpp"
#include "mcol/rng.hpp"

using namespace mcol;
using namespace mcol::codec;

TEST_SUITE_BEGIN("codec");

TEST_CASE("one-hot encoding matches the printed vector convention") {
  CHECK(encode_one_hot(3, 4).to_string() == "0010");
  CHECK(encode_one_hot(4, 8).to_string() == "00010000");
  CHECK(encode_one_hot(1, 1).to_string() == "1");
  CHECK_THROWS_AS(encode_one_hot(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(encode_one_hot(5, 4), std::invalid_argument);
}

TEST_CASE("decode_hot_set inverts encoding and reads k-hot unions") {
  CHECK(decode_hot_set(SpikeVector::from_string("0010")) == std::set<int>{3});
  CHECK(decode_hot_set(SpikeVector::from_string("0000")).empty());
  CHECK(decode_hot_set(SpikeVector::from_string("0110")) == std::set<int>{2, 3});
  for (int w = 1; w <= 12; ++w)
    for (int k = 1; k <= w; ++k) CHECK(decode_hot_set(encode_one_hot(k, w)) == std::set<int>{k});
}

TEST_CASE("state vector pack renders the five-bundle example") {
  const BundleLayout layout = state_layout(4, 4, 8);
  const SpikeVector whole =
      pack_state_vector(encode_one_hot(3, 4), encode_one_hot(2, 4), encode_one_hot(4, 8), encode_one_hot(3, 8),
                        encode_one_hot(4, 4), layout);
  CHECK(layout.render(whole) == "|0010|0100|00010000|00100000|0001|");

  const SpikeVector all_null = pack_state_vector(SpikeVector(4), SpikeVector(4), SpikeVector(8), SpikeVector(8),
                                                 SpikeVector(4), layout);
  CHECK(all_null.is_null());
  CHECK(all_null.width() == layout.total_width());

  CHECK_THROWS_AS(pack_state_vector(SpikeVector(3), SpikeVector(4), SpikeVector(8), SpikeVector(8), SpikeVector(4),
                                    layout),
                  std::invalid_argument);
}

TEST_CASE("pack/unpack round-trip over seeded random vectors") {
  const BundleLayout layout = state_layout(40, 10, 30);
  Rng rng(20240811);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<SpikeVector> parts;
    for (const auto& f : layout.fields) {
      SpikeVector v(f.width);
      for (int b = 0; b < f.width; ++b)
        if (rng.below(4) == 0) v.set_bit(b);
      parts.push_back(std::move(v));
    }
    const SpikeVector whole = layout.pack(parts);
    CHECK(layout.unpack(whole) == parts);
  }
}

TEST_CASE("composite zero case and field layout") {
  const CompositeCode code({7, 8, 9});
  CHECK(code.capacity() == 504);
  CHECK(code.lines() == 24);
  CHECK(code.encode(0).to_string() == std::string("1000000") + "10000000" + "100000000");
  const BundleLayout fields{{"f7", 7}, {"f8", 8}, {"f9", 9}};
  CHECK(fields.render(code.encode(0)) == "|1000000|10000000|100000000|");
}

TEST_CASE("all 504 codes are distinct and decode back") {
  const CompositeCode code({7, 8, 9});
  std::set<std::string> seen;
  for (long long v = 0; v < code.capacity(); ++v) {
    const SpikeVector sv = code.encode(v);
    CHECK(code.decode(sv) == v);
    seen.insert(sv.to_string());
  }
  CHECK(seen.size() == 504);
  CHECK_THROWS_AS(code.encode(504), std::invalid_argument);
  CHECK_THROWS_AS(CompositeCode({6, 8, 9}), std::invalid_argument);
}

TEST_CASE("residue arithmetic oracle over the (2,3,5) code") {
  const CompositeCode code({2, 3, 5});
  CHECK(code.capacity() == 30);
  // value 17 -> residues (1, 2, 2)
  CHECK(code.encode(17).to_string() == std::string("01") + "001" + "00100");
  CHECK(code.decode(code.rotate(code.encode(17), 13)) == 0);
  // independent modular oracle over every value and shift
  for (long long v = 0; v < 30; ++v)
    for (long long a = -30; a <= 30; ++a)
      CHECK(code.decode(code.rotate(code.encode(v), a)) == ((v + a) % 30 + 30) % 30);
}

TEST_CASE("single-step rotation cycles through every code") {
  const CompositeCode code({7, 8, 9});
  const SpikeVector start = code.encode(123);
  SpikeVector v = start;
  std::set<std::string> seen;
  for (long long i = 0; i < code.capacity(); ++i) {
    seen.insert(v.to_string());
    v = code.rotate(v, 1);
  }
  CHECK(v == start);
  CHECK(static_cast<long long>(seen.size()) == code.capacity());
}

TEST_SUITE_END();
