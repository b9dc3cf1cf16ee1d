#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mcvd/philox.hpp"

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using mcvd::PhiloxCounter;
  CHECK(mcvd::philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
        PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(mcvd::philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                            {0xffffffffu, 0xffffffffu}) ==
        PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(mcvd::philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                            {0xa4093822u, 0x299f31d0u}) ==
        PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("unit_open stays strictly inside (0, 1)") {
  CHECK(mcvd::unit_open(0, 0) > 0.0);
  CHECK(mcvd::unit_open(0xffffffffu, 0xffffffffu) < 1.0);
}

TEST_CASE("normal_pair moments") {
  const mcvd::PhiloxKey key = mcvd::philox_key(12345);
  const int n = 200000;
  double s1 = 0, s2 = 0, s4 = 0, cross = 0;
  for (int k = 0; k < n; ++k) {
    const auto block = mcvd::philox4x32_10({static_cast<std::uint32_t>(k), 0, 0, 0}, key);
    const auto pair = mcvd::normal_pair(block);
    for (double z : {pair.first, pair.second}) {
      s1 += z;
      s2 += z * z;
      s4 += z * z * z * z;
    }
    cross += pair.first * pair.second;
  }
  const double m = 2.0 * n;
  CHECK(std::abs(s1 / m) < 5.0 / std::sqrt(m));
  CHECK(std::abs(s2 / m - 1.0) < 5.0 * std::sqrt(2.0 / m));
  CHECK(std::abs(s4 / m - 3.0) < 5.0 * std::sqrt(96.0 / m));
  CHECK(std::abs(cross / n) < 5.0 / std::sqrt(n));
}
