#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "aliasnet/metrics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace aliasnet;

namespace {

RealImage random_image(int n, std::mt19937_64& gen) {
  return RealImage(n, oracle::random_vector(static_cast<std::size_t>(n) * n, gen, 0.0, 1.0));
}

std::vector<double> as_vector(const RealImage& img) { return {img.values().begin(), img.values().end()}; }

}  // namespace

TEST_CASE("nmse") {
  std::mt19937_64 gen(1);
  const auto x = random_image(16, gen);
  const auto y = random_image(16, gen);
  CHECK(nmse(x, x) == 0.0);
  CHECK(nmse(RealImage(16), x) == doctest::Approx(1.0).epsilon(1e-15));
  for (double c : {0.0, 0.5, 1.0, 2.5}) {
    RealImage scaled = x;
    for (auto& v : scaled.values()) v *= c;
    CHECK(nmse(scaled, x) == doctest::Approx(std::abs(c - 1.0)).epsilon(1e-14));
  }
  // Not symmetric: the reference sets the scale.
  CHECK(nmse(x, y) > 0.0);
  CHECK(nmse(y, x) > 0.0);
  CHECK_THROWS_AS(nmse(x, RealImage(16)), ArgumentError);
  CHECK_THROWS_AS(nmse(x, RealImage(8)), DimensionError);
}

TEST_CASE("ssim identities") {
  std::mt19937_64 gen(2);
  const auto x = random_image(32, gen);
  CHECK(std::abs(ssim(x, x) - 1.0) <= 1e-12);
  RealImage inv = x;
  for (auto& v : inv.values()) v = 1.0 - v;
  CHECK(ssim(x, inv) < ssim(x, x));
  const auto c = RealImage(32, 0.4);
  CHECK(std::abs(ssim(c, c) - 1.0) <= 1e-12);
  CHECK_THROWS_AS(ssim(RealImage(10), RealImage(10)), ArgumentError);
  CHECK_THROWS_AS(ssim(x, x, 0.0), ArgumentError);
  CHECK_THROWS_AS(ssim(x, RealImage(16)), DimensionError);
}

TEST_CASE("ssim matches the per-window oracle") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = random_image(32, gen);
    auto y = x;
    for (auto& v : y.values()) v = std::clamp(v + 0.2 * (oracle::random_vector(1, gen)[0]), 0.0, 1.0);
    const double expect = oracle::windowed_ssim(as_vector(x), as_vector(y), 32, 1.0);
    CHECK(std::abs(ssim(x, y) - expect) <= 1e-9);
  }
  const auto a = random_image(11, gen), b = random_image(11, gen);
  CHECK(std::abs(ssim(a, b, 2.0) - oracle::windowed_ssim(as_vector(a), as_vector(b), 11, 2.0)) <= 1e-9);
}

TEST_CASE("ssim range and scaling") {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_image(16, gen);
    auto y = random_image(16, gen);
    if (trial % 2) y = RealImage(16, oracle::random_vector(256, gen, -3.0, 3.0));
    const double s = ssim(x, y);
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
    // Scaling both images and the dynamic range together leaves SSIM unchanged.
    RealImage xs = x, ys = y;
    for (auto& v : xs.values()) v *= 7.5;
    for (auto& v : ys.values()) v *= 7.5;
    CHECK(std::abs(ssim(xs, ys, 7.5) - s) <= 1e-9);
  }
}

TEST_CASE("benchmark_latency") {
  SUBCASE("trivial closure is fast and consistent") {
    const RealImage img(4, 0.25);
    const auto rep = benchmark_latency([&](std::size_t) { return img; }, 50, 1, 3);
    REQUIRE(rep.per_frame_s.size() == 50);
    double total = 0.0;
    for (double s : rep.per_frame_s) {
      CHECK(s > 0.0);
      total += s;
    }
    CHECK(rep.mean_s == doctest::Approx(total / 50.0).epsilon(1e-12));
    CHECK(rep.frames_per_second == doctest::Approx(1.0 / rep.mean_s).epsilon(1e-12));
    CHECK(rep.frames_per_second > 1e4);
    CHECK(rep.std_s >= 0.0);
  }
  SUBCASE("measured time tracks real work") {
    const auto rep = benchmark_latency(
        [](std::size_t) {
          std::this_thread::sleep_for(std::chrono::milliseconds(2));
          return RealImage(4);
        },
        3, 0, 1);
    CHECK(rep.mean_s >= 0.002);
  }
  SUBCASE("impure closure is rejected") {
    int calls = 0;
    CHECK_THROWS_AS(benchmark_latency([&](std::size_t) { return RealImage(4, ++calls); }, 2, 0, 2),
                    NondeterminismError);
  }
  SUBCASE("argument errors") {
    const auto f = [](std::size_t) { return RealImage(4); };
    CHECK_THROWS_AS(benchmark_latency(f, 2, 0, 0), ArgumentError);
    CHECK_THROWS_AS(benchmark_latency(f, 2, -1, 1), ArgumentError);
    CHECK_THROWS_AS(benchmark_latency(f, 0, 0, 1), ArgumentError);
  }
}
