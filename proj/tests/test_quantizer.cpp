#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "reachquant/errors.hpp"
#include "reachquant/quantizer.hpp"
#include "reachquant/rng.hpp"

using namespace reachquant;

TEST_CASE("quantizer configuration") {
  const QuantizerConfig c4 = QuantizerConfig::from_levels(4, 2);
  CHECK(c4.levels == 4);
  CHECK(c4.bits == 4);  // 2 axes * log2(4)
  CHECK(c4.dim == 2);

  // Non power of two carries no exact bit count.
  CHECK(QuantizerConfig::from_levels(3, 2).bits == 0);
  CHECK(QuantizerConfig::from_levels(256, 3).bits == 24);

  CHECK_THROWS_AS(QuantizerConfig::from_levels(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(QuantizerConfig::from_levels(65537, 2), std::invalid_argument);
  CHECK_THROWS_AS(QuantizerConfig::from_levels(4, 0), std::invalid_argument);

  const QuantizerConfig b4 = QuantizerConfig::from_bits(4, 2);
  CHECK(b4.levels == 4);
  CHECK(b4 == c4);
  CHECK(QuantizerConfig::from_bits(30, 2).levels == 32768);
  CHECK_THROWS_AS(QuantizerConfig::from_bits(5, 2), std::invalid_argument);   // not a multiple
  CHECK_THROWS_AS(QuantizerConfig::from_bits(32, 2), std::invalid_argument);  // 16 bits per axis
  CHECK_THROWS_AS(QuantizerConfig::from_bits(0, 2), std::invalid_argument);
}

TEST_CASE("encoder cell indexing on a literal region") {
  const QuantizerState qs{{0.0}, {1.0}, 3};
  // Cells over [-1, 1] with N = 4: [-1,-.5) [-.5,0) [0,.5) [.5,1].
  CHECK(encode({-0.9}, qs, 4).indices[0] == 0);
  CHECK(encode({-0.5}, qs, 4).indices[0] == 1);  // boundary folds upward
  CHECK(encode({-0.1}, qs, 4).indices[0] == 1);
  CHECK(encode({0.0}, qs, 4).indices[0] == 2);
  CHECK(encode({0.49}, qs, 4).indices[0] == 2);
  CHECK(encode({0.5}, qs, 4).indices[0] == 3);
  CHECK(encode({1.0}, qs, 4).indices[0] == 3);  // upper boundary folds into the last cell
  CHECK(encode({1.0}, qs, 4).k == 3);

  CHECK_THROWS_AS(encode({1.1}, qs, 4), QuantizerOverflow);
  CHECK_THROWS_AS(encode({-1.1}, qs, 4), QuantizerOverflow);
  try {
    encode({-1.1}, qs, 4);
  } catch (const QuantizerOverflow& e) {
    CHECK(e.axis() == 0);
    CHECK(e.value() == -1.1);
    CHECK(e.lo() == -1.0);
    CHECK(e.hi() == 1.0);
    CHECK(e.step() == 3);
  }

  CHECK_THROWS_AS(encode({0.0, 0.0}, qs, 4), std::invalid_argument);  // dim mismatch
  CHECK_THROWS_AS(encode({0.0}, QuantizerState{{0.0}, {0.0}, 0}, 4), std::invalid_argument);
  CHECK_THROWS_AS(encode({0.0}, qs, 1), std::invalid_argument);
}

TEST_CASE("decoder centroids for both range conventions") {
  const QuantizerState qs{{0.0}, {1.0}, 0};
  EncodedPacket p;
  p.indices = {0};
  CHECK(decode(p, qs, 4).value[0] == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(decode(p, qs, 4, DecoderRange::Half).value[0] == doctest::Approx(-0.375).epsilon(1e-15));
  p.indices = {3};
  CHECK(decode(p, qs, 4).value[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(decode(p, qs, 4, DecoderRange::Half).value[0] == doctest::Approx(0.375).epsilon(1e-15));

  p.indices = {4};
  CHECK_THROWS_AS(decode(p, qs, 4), std::invalid_argument);
}

TEST_CASE("round trip error stays below one cell half-width") {
  SplitMix64 rng(99);
  int draws = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int levels = 2 + static_cast<int>(rng.uniform(0.0, 15.0));
    QuantizerState qs;
    qs.C = {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    qs.L = {rng.uniform(0.05, 3.0), rng.uniform(0.05, 3.0), rng.uniform(0.05, 3.0)};

    for (int s = 0; s < 100; ++s, ++draws) {
      Vec x(3);
      for (std::size_t i = 0; i < 3; ++i)
        x[i] = qs.C[i] + rng.uniform(-1.0, 1.0) * qs.L[i];
      const EncodedPacket pe = encode(x, qs, levels);
      const DecodedPacket pd = decode(pe, qs, levels);
      for (std::size_t i = 0; i < 3; ++i) {
        // Centroid distance: at most L/N, and strictly inside the region.
        CHECK(std::abs(pd.value[i] - x[i]) <= qs.L[i] / levels + 1e-12);
        CHECK(std::abs(pd.value[i] - qs.C[i]) < qs.L[i]);
      }
      // Re-encoding the decoded centroid recovers the same cell.
      CHECK(encode(pd.value, qs, levels).indices == pe.indices);
    }
  }
  CHECK(draws == 100000);
}

TEST_CASE("encoder is monotone along each axis") {
  const QuantizerState qs{{1.0, -2.0}, {2.0, 0.5}, 0};
  for (int levels : {2, 3, 4, 7, 16}) {
    std::uint16_t prev = 0;
    for (double s = -1.0; s <= 1.0; s += 1e-3) {
      const std::uint16_t idx = encode({1.0 + 2.0 * s, -2.0}, qs, levels).indices[0];
      CHECK(idx >= prev);
      prev = idx;
    }
    CHECK(prev == levels - 1);
  }
}

TEST_CASE("worst case quantization error recursion step") {
  const Mat lam_bar{{0.8, 0.3}, {0.35, 0.83}};
  const Vec e{0.2, 0.4};
  const Vec out = max_qerror_step(e, lam_bar, 0.1, 4);
  CHECK(out[0] == doctest::Approx((0.8 * 0.2 + 0.3 * 0.4) / 4.0 + 0.1 / 4.0).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx((0.35 * 0.2 + 0.83 * 0.4) / 4.0 + 0.1 / 4.0).epsilon(1e-15));

  CHECK_THROWS_AS(max_qerror_step({-0.1, 0.0}, lam_bar, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(max_qerror_step(e, Mat{{-0.1, 0.0}, {0.0, 0.1}}, 0.0, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(max_qerror_step(e, lam_bar, -0.1, 4), std::invalid_argument);
}

TEST_CASE("packet wire layout is little endian") {
  EncodedPacket p;
  p.k = 0x01020304u;
  p.indices = {0x0a0b, 0x0c0d};
  std::vector<std::uint8_t> wire;
  append_packet_wire(wire, p);
  CHECK(wire == std::vector<std::uint8_t>{0x04, 0x03, 0x02, 0x01, 0x0b, 0x0a, 0x0d, 0x0c});
}

TEST_CASE("bit packing is MSB first at log2(N) bits per axis") {
  EncodedPacket p;
  p.indices = {3, 1};  // N = 4: 11 01 -> 1101 0000
  CHECK(pack_indices(p, 4) == std::vector<std::uint8_t>{0xd0});
  CHECK(payload_bits(2, 4) == 4);

  p.indices = {5, 2, 7};  // N = 8: 101 010 111 -> 1010 1011 1000 0000
  CHECK(pack_indices(p, 8) == std::vector<std::uint8_t>{0xab, 0x80});
  CHECK(payload_bits(3, 8) == 9);

  CHECK_THROWS_AS(pack_indices(p, 3), std::invalid_argument);  // not a power of two
  p.indices = {9};
  CHECK_THROWS_AS(pack_indices(p, 8), std::invalid_argument);  // out of range
  CHECK_THROWS_AS(payload_bits(0, 4), std::invalid_argument);
}
