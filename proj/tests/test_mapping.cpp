#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <set>

#include "iirofdm/errors.hpp"
#include "iirofdm/mapping.hpp"

using namespace iirofdm;
using Eigen::Index;

namespace {

BitSequence label_bits(int label, int bps) {
  BitSequence bits(static_cast<std::size_t>(bps));
  for (int j = 0; j < bps; ++j) {
    bits[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>((label >> (bps - 1 - j)) & 1);
  }
  return bits;
}

}  // namespace

TEST_CASE("qpsk labeling is pinned: 00 maps to (1+j)/sqrt(2)") {
  const Constellation c = make_constellation("qpsk");
  const Complex p = map_bits(c, {0, 0})(0);
  CHECK(std::abs(p - Complex{1.0, 1.0} / std::sqrt(2.0)) < 1e-15);

  // all four labels give distinct unit-energy points
  std::set<std::pair<double, double>> seen;
  for (int label = 0; label < 4; ++label) {
    const Complex q = map_bits(c, label_bits(label, 2))(0);
    CHECK(std::abs(std::norm(q) - 1.0) < 1e-12);
    seen.emplace(q.real(), q.imag());
  }
  CHECK(seen.size() == 4);
}

TEST_CASE("constellations have unit average energy") {
  for (const char* name : {"qpsk", "qam16"}) {
    const Constellation c = make_constellation(name);
    CHECK(std::abs(c.points.squaredNorm() / static_cast<double>(c.points.size()) - 1.0) < 1e-12);
  }
}

TEST_CASE("nearest neighbors differ in exactly one bit") {
  for (const char* name : {"qpsk", "qam16"}) {
    const Constellation c = make_constellation(name);
    const Index count = c.points.size();
    double min_dist = 1e9;
    for (Index i = 0; i < count; ++i) {
      for (Index k = 0; k < count; ++k) {
        if (i != k) min_dist = std::min(min_dist, std::abs(c.points(i) - c.points(k)));
      }
    }
    for (Index i = 0; i < count; ++i) {
      for (Index k = 0; k < count; ++k) {
        if (i == k) continue;
        if (std::abs(c.points(i) - c.points(k)) < min_dist * 1.0001) {
          CHECK(std::popcount(static_cast<unsigned>(i ^ k)) == 1);
        }
      }
    }
  }
}

TEST_CASE("demap inverts map for every label") {
  for (const char* name : {"qpsk", "qam16"}) {
    const Constellation c = make_constellation(name);
    BitSequence bits;
    for (int label = 0; label < c.points.size(); ++label) {
      const BitSequence lb = label_bits(label, c.bits_per_symbol);
      bits.insert(bits.end(), lb.begin(), lb.end());
    }
    CHECK(demap_hard(c, map_bits(c, bits)) == bits);
  }
}

TEST_CASE("exact ties resolve to the lower label") {
  const Constellation qpsk = make_constellation("qpsk");
  // the origin is equidistant from all four points
  Eigen::VectorXcd origin(1);
  origin << Complex{0.0, 0.0};
  CHECK(demap_hard(qpsk, origin) == BitSequence{0, 0});

  // midpoint of (+,+) and (+,-): labels 00 and 01, the lower wins
  Eigen::VectorXcd mid(1);
  mid << Complex{1.0 / std::sqrt(2.0), 0.0};
  CHECK(demap_hard(qpsk, mid) == BitSequence{0, 0});

  const Constellation qam = make_constellation("qam16");
  // midpoint between I levels +3 and +1 at Q level +3: labels 0000 and 0100
  Eigen::VectorXcd qmid(1);
  qmid << Complex{2.0, 3.0} / std::sqrt(10.0);
  CHECK(demap_hard(qam, qmid) == BitSequence{0, 0, 0, 0});
}

TEST_CASE("a perturbed qpsk point still decides its quadrant") {
  const Constellation c = make_constellation("qpsk");
  Eigen::VectorXcd s(1);
  s << Complex{0.9, 0.8} / std::sqrt(2.0);
  CHECK(demap_hard(c, s) == BitSequence{0, 0});
}

TEST_CASE("map_bits rejects bit counts not divisible by bits per symbol") {
  CHECK_THROWS_AS(map_bits(make_constellation("qpsk"), {1}), SizeError);
  CHECK_THROWS_AS(map_bits(make_constellation("qam16"), {1, 0, 1}), SizeError);
  CHECK_THROWS_AS(make_constellation("8psk"), ConfigError);
}

TEST_CASE("count_bit_errors is the Hamming distance") {
  CHECK(count_bit_errors({0, 1, 1, 0}, {0, 1, 1, 0}) == 0);
  CHECK(count_bit_errors({0, 1, 1, 0}, {1, 0, 0, 1}) == 4);
  CHECK(count_bit_errors({0, 1, 1, 0}, {0, 0, 1, 1}) == 2);
  CHECK_THROWS_AS(count_bit_errors({0, 1}, {0}), SizeError);
}
