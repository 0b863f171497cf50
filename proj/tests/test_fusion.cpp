#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "ptseq/fusion.hpp"

using ptseq::FusionConfig;
using ptseq::FusionResult;
using ptseq::ModeDecision;

TEST_CASE("each rule row fires on its own case") {
  // Mode 1 above its threshold, mode 2 below: mode 1 wins outright.
  FusionResult r = ptseq::fuse({"wave", 0.9}, {"stop", 0.7});
  CHECK(r.label == "wave");
  CHECK(r.branch == 2);

  // Both above: the larger likelihood wins, ties to mode 1.
  r = ptseq::fuse({"wave", 0.9}, {"stop", 0.9});
  CHECK(r.label == "wave");
  CHECK(r.branch == 1);
  r = ptseq::fuse({"wave", 0.85}, {"stop", 0.95});
  CHECK(r.label == "stop");
  CHECK(r.branch == 1);

  // Only mode 2 above.
  r = ptseq::fuse({"wave", 0.1}, {"stop", 0.85});
  CHECK(r.label == "stop");
  CHECK(r.branch == 3);

  // Both below: weighted comparison, 0.5135*0.5 < 0.4865*0.6.
  FusionConfig weighted;
  weighted.w1 = 0.5135;
  weighted.w2 = 0.4865;
  r = ptseq::fuse({"wave", 0.5}, {"stop", 0.6}, weighted);
  CHECK(r.label == "stop");
  CHECK(r.branch == 4);

  // Weighted tie favors mode 1.
  r = ptseq::fuse({"wave", 0.4}, {"stop", 0.4});
  CHECK(r.label == "wave");
  CHECK(r.branch == 4);
}

TEST_CASE("thresholds are inclusive") {
  CHECK(ptseq::fuse({"a", 0.8}, {"b", 0.0}).branch == 2);
  CHECK(ptseq::fuse({"a", 0.0}, {"b", 0.85}).branch == 3);
  CHECK(ptseq::fuse({"a", 0.8}, {"b", 0.85}).branch == 1);
  // A hair under either threshold drops out of the top row.
  CHECK(ptseq::fuse({"a", 0.7999}, {"b", 0.85}).branch == 3);
  CHECK(ptseq::fuse({"a", 0.8}, {"b", 0.8499}).branch == 2);
  CHECK(ptseq::fuse({"a", 0.7999}, {"b", 0.8499}).branch == 4);
}

TEST_CASE("exactly one branch fires across the whole unit square") {
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double a1 = i / 100.0;
      const double a2 = j / 100.0;
      FusionResult r = ptseq::fuse({"a", a1}, {"b", a2});
      REQUIRE(r.branch >= 1);
      REQUIRE(r.branch <= 4);
      const bool above1 = a1 >= 0.8;
      const bool above2 = a2 >= 0.85;
      const int expected = above1 && above2 ? 1 : above1 ? 2 : above2 ? 3 : 4;
      CHECK(r.branch == expected);
      CHECK((r.label == "a" || r.label == "b"));
    }
  }
}

TEST_CASE("a below-threshold rival never changes a dominant decision") {
  for (int j = 0; j < 85; ++j) {
    FusionResult r = ptseq::fuse({"a", 0.92}, {"b", j / 100.0});
    CHECK(r.label == "a");
    CHECK(r.branch == 2);
  }
  for (int i = 0; i < 80; ++i) {
    FusionResult r = ptseq::fuse({"a", i / 100.0}, {"b", 0.9});
    CHECK(r.label == "b");
    CHECK(r.branch == 3);
  }
}

TEST_CASE("equal weights make the bottom row symmetric up to the tie rule") {
  oracles::UnitRng rng(800);
  for (int trial = 0; trial < 100; ++trial) {
    const double a1 = 0.79 * rng();
    const double a2 = 0.79 * rng();
    FusionResult fwd = ptseq::fuse({"a", a1}, {"b", a2});
    FusionResult rev = ptseq::fuse({"a", a2}, {"b", a1});
    REQUIRE(fwd.branch == 4);
    REQUIRE(rev.branch == 4);
    if (a1 != a2) {
      const std::string& winner = a1 > a2 ? "a" : "b";
      const std::string& mirrored = a1 > a2 ? "b" : "a";
      CHECK(fwd.label == winner);
      CHECK(rev.label == mirrored);
    } else {
      CHECK(fwd.label == "a");
      CHECK(rev.label == "a");
    }
  }
}

TEST_CASE("weights derive from accuracies and sum to one") {
  auto [w1, w2] = ptseq::derive_weights(0.95, 0.90);
  CHECK(w1 == doctest::Approx(0.95 / 1.85).epsilon(1e-15));
  CHECK(w2 == doctest::Approx(0.90 / 1.85).epsilon(1e-15));
  CHECK(std::abs(w1 - 0.5135) < 1e-4);
  CHECK(std::abs(w2 - 0.4865) < 1e-4);

  auto [e1, e2] = ptseq::derive_weights(0.9, 0.9);
  CHECK(e1 == 0.5);
  CHECK(e2 == 0.5);

  oracles::UnitRng rng(801);
  for (int trial = 0; trial < 100; ++trial) {
    auto [r1, r2] = ptseq::derive_weights(0.01 + 0.99 * rng(), 0.01 + 0.99 * rng());
    CHECK(r1 + r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r1 > 0.0);
    CHECK(r2 > 0.0);
  }

  CHECK_THROWS_AS(ptseq::derive_weights(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ptseq::derive_weights(0.5, -0.1), std::invalid_argument);
}

TEST_CASE("fusion rejects invalid configs and likelihoods") {
  FusionConfig bad;
  bad.theta1 = 1.2;
  CHECK_THROWS_AS(ptseq::fuse({"a", 0.5}, {"b", 0.5}, bad), std::invalid_argument);
  bad = FusionConfig{};
  bad.theta2 = -0.1;
  CHECK_THROWS_AS(ptseq::fuse({"a", 0.5}, {"b", 0.5}, bad), std::invalid_argument);
  bad = FusionConfig{};
  bad.w1 = 0.0;
  CHECK_THROWS_AS(ptseq::fuse({"a", 0.5}, {"b", 0.5}, bad), std::invalid_argument);
  bad = FusionConfig{};
  bad.w2 = -1.0;
  CHECK_THROWS_AS(ptseq::fuse({"a", 0.5}, {"b", 0.5}, bad), std::invalid_argument);

  CHECK_THROWS_AS(ptseq::fuse({"a", 1.5}, {"b", 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(ptseq::fuse({"a", 0.5}, {"b", -0.5}), std::invalid_argument);
}
