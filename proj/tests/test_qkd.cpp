#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "ququart/errors.hpp"
#include "ququart/qkd.hpp"

using namespace ququart;

namespace {

const std::array<MubIndex, 5> kAll{MubIndex::I, MubIndex::II, MubIndex::III, MubIndex::IV, MubIndex::V};
const std::array<MubIndex, 3> kPrepared{MubIndex::I, MubIndex::II, MubIndex::III};

Vector4c amps(const QuquartState& s) { return s.amplitudes(); }

}  // namespace

TEST(Mub, BasesAreOrthonormal) {
  for (auto b : kAll) {
    const auto basis = mub_states(b);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const Complex ip = amps(basis.states[i]).dot(amps(basis.states[j]));
        EXPECT_NEAR(std::abs(ip), i == j ? 1.0 : 0.0, 1e-12) << mub_name(b) << " " << i << "," << j;
      }
  }
}

TEST(Mub, ProductBasesAreMutuallyUnbiased) {
  for (auto a : kPrepared)
    for (auto b : kPrepared) {
      if (a == b) continue;
      for (const auto& x : mub_states(a).states)
        for (const auto& y : mub_states(b).states) EXPECT_NEAR(fidelity(x, y), 0.25, 1e-12);
    }
}

TEST(Mub, ProductBasesMatchSinglePhotonTensors) {
  const Vector4c d_d(Complex(0.5), Complex(0.5), Complex(0.5), Complex(0.5));
  EXPECT_NEAR(fidelity(mub_states(MubIndex::II).states[0], QuquartState::normalized(d_d)), 1.0, 1e-14);
  const Vector4c r_r(Complex(0.5), oracle::kI * 0.5, oracle::kI * 0.5, Complex(-0.5));
  EXPECT_NEAR(fidelity(mub_states(MubIndex::III).states[0], QuquartState::normalized(r_r)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(mub_states(MubIndex::I).states[0][0]), 1.0, 1e-15);
  EXPECT_EQ(parse_mub("IV"), MubIndex::IV);
  EXPECT_THROW(parse_mub("VI"), DomainError);
}

TEST(Qkd, SymbolBits) {
  EXPECT_EQ(symbol_bits(0), 0b11);
  EXPECT_EQ(symbol_bits(1), 0b10);
  EXPECT_EQ(symbol_bits(2), 0b01);
  EXPECT_EQ(symbol_bits(3), 0b00);
}

TEST(Qkd, RecipesReproduceBasisStates) {
  for (auto b : kPrepared)
    for (int k = 0; k < 4; ++k) {
      const auto prep = alice_prepare(b, k);
      const auto made = apply(prep.recipe.transform(), states::vv());
      EXPECT_GE(fidelity(made, mub_states(b).states[k]), 1.0 - 1e-9) << mub_name(b) << " " << k;
      EXPECT_GE(fidelity(prep.state, mub_states(b).states[k]), 1.0 - 1e-12);
    }
  EXPECT_THROW(alice_prepare(MubIndex::IV, 0), DomainError);
  EXPECT_THROW(alice_prepare(MubIndex::I, 4), DomainError);
  EXPECT_THROW(bob_analyzer(MubIndex::V), DomainError);
}

TEST(Qkd, MatchedBasesAreDeterministic) {
  for (auto b : kPrepared)
    for (int k = 0; k < 4; ++k) {
      const auto p = outcome_probabilities(mub_states(b).states[k], b);
      for (int d = 0; d < 4; ++d) EXPECT_NEAR(p[d], d == k ? 1.0 : 0.0, 1e-12);
      EXPECT_EQ(static_cast<int>(bob_measure(mub_states(b).states[k], b, 99 + k).pair), k);
    }
}

TEST(Qkd, MismatchedBasesAreUniform) {
  for (auto a : kPrepared)
    for (auto b : kPrepared) {
      if (a == b) continue;
      for (const auto& s : mub_states(a).states)
        for (double p : outcome_probabilities(s, b)) EXPECT_NEAR(p, 0.25, 1e-12);
    }
}

TEST(Qkd, DiagonalFromCounts) {
  const auto d = diagonal_from_counts({0, 220, 6, 0});
  EXPECT_NEAR(d[0], 0.0, 1e-15);
  EXPECT_NEAR(d[1], 220.0 / 226.0, 1e-15);
  EXPECT_NEAR(d[2], 6.0 / 226.0, 1e-15);
  EXPECT_NEAR(d[1], 0.973, 0.001);
  EXPECT_NEAR(d[2], 0.027, 0.001);
  EXPECT_THROW(diagonal_from_counts({0, 0, 0, 0}), DomainError);
  EXPECT_THROW(diagonal_from_counts({1, -1, 0, 0}), DomainError);
}

TEST(Qkd, NoiselessSession) {
  SessionConfig cfg;
  cfg.n = 10000;
  cfg.seed = 3;
  const auto r = run_session(cfg, true);
  EXPECT_EQ(r.sent, 10000);
  EXPECT_EQ(r.errors, 0);
  EXPECT_EQ(r.qber, 0.0);
  EXPECT_EQ(r.key_alice, r.key_bob);
  EXPECT_EQ(static_cast<std::int64_t>(r.key_alice.size()), r.sifted);
  // matching probability 1/3, 5 sigma
  EXPECT_NEAR(r.sifted / 10000.0, 1.0 / 3.0, 5.0 * std::sqrt(2.0 / 9.0 / 10000.0));
  ASSERT_EQ(r.transcript.size(), 10000u);
  std::int64_t sifted = 0;
  for (const auto& row : r.transcript) {
    EXPECT_EQ(row.sifted, row.alice_basis == row.bob_basis);
    sifted += row.sifted;
  }
  EXPECT_EQ(sifted, r.sifted);
}

TEST(Qkd, SingleBasisSiftsEverything) {
  SessionConfig cfg;
  cfg.n = 500;
  cfg.bases = {MubIndex::I};
  const auto r = run_session(cfg);
  EXPECT_EQ(r.sifted, 500);
  EXPECT_EQ(r.errors, 0);
}

TEST(Qkd, SessionsAreSeeded) {
  SessionConfig cfg;
  cfg.n = 300;
  cfg.noise.depolarize = 0.3;
  cfg.seed = 7;
  const auto a = run_session(cfg);
  const auto b = run_session(cfg);
  EXPECT_EQ(a.key_alice, b.key_alice);
  EXPECT_EQ(a.key_bob, b.key_bob);
}

TEST(Qkd, DepolarizingChannel) {
  // a random state hits the right detector a quarter of the time
  SessionConfig cfg;
  cfg.n = 30000;
  cfg.noise.depolarize = 0.1;
  cfg.seed = 11;
  const auto r = run_session(cfg);
  const double expected = 0.075;
  const double sigma = std::sqrt(expected * (1 - expected) / r.sifted);
  EXPECT_NEAR(r.qber, expected, 3.0 * sigma);

  cfg.noise = {0.0, 0.2};
  const auto d = run_session(cfg);
  EXPECT_NEAR(d.qber, 0.15, 3.0 * std::sqrt(0.15 * 0.85 / d.sifted));
}

TEST(Qkd, InterceptResend) {
  // Eve measures in a random product basis and resends what she saw
  SessionConfig cfg;
  cfg.n = 20000;
  cfg.seed = 5;
  auto eve = [](const QuquartState& sent, Rng& rng) {
    const auto basis = kPrepared[std::uniform_int_distribution<int>(0, 2)(rng)];
    const auto seen = bob_measure(sent, basis, rng);
    return mub_states(basis).states[static_cast<int>(seen.pair)];
  };
  const auto r = run_session(cfg, false, eve);
  // wrong Eve basis (2/3) gives a uniform result, so 3/4 of those are errors
  EXPECT_NEAR(r.qber, 0.5, 3.0 * std::sqrt(0.25 / r.sifted));
}

TEST(Qkd, SessionValidation) {
  SessionConfig cfg;
  cfg.n = 0;
  EXPECT_THROW(run_session(cfg), DomainError);
  cfg.n = 10;
  cfg.bases = {};
  EXPECT_THROW(run_session(cfg), DomainError);
  cfg.bases = {MubIndex::IV};
  EXPECT_THROW(run_session(cfg), DomainError);
  cfg.bases = {MubIndex::I};
  cfg.noise.depolarize = 1.5;
  EXPECT_THROW(run_session(cfg), DomainError);
}

TEST(Tilt, ScanShape) {
  const WavePlate dp1{3.716, Angle::degrees(45.0)};
  const WavePlate dp2{0.315, Angle::degrees(45.0), &quartz(), AxisSense::crossed};
  const auto curve = tilt_scan(dp1, dp2, {702, 605}, 0.0, 15.0, 0.05);
  ASSERT_EQ(curve.size(), 301u);
  EXPECT_DOUBLE_EQ(curve.back().theta_deg, 15.0);
  for (const auto& p : curve) {
    const double d1 = pair_optical_thickness(dp1, dp2, 702.0, oracle::deg(p.theta_deg));
    const double d2 = pair_optical_thickness(dp1, dp2, 605.0, oracle::deg(p.theta_deg));
    EXPECT_NEAR(p.singles, std::pow(std::sin(d1), 2), 1e-12);
    EXPECT_NEAR(p.coincidence, std::pow(std::sin(d1) * std::cos(d2), 2), 1e-12);
    EXPECT_LE(p.coincidence, p.singles + 1e-15);
  }
  const auto peak = first_coincidence_maximum(curve);
  ASSERT_TRUE(peak.has_value());
  EXPECT_NEAR(*peak, 1.70, 1e-9);
  EXPECT_THROW(tilt_scan(dp1, dp2, {702, 605}, 0.0, 15.0, 0.0), DomainError);
}

TEST(Tilt, PairThicknessIsSum) {
  const WavePlate a{3.716, Angle::degrees(45.0)};
  const WavePlate b{0.315, Angle::degrees(45.0), &quartz(), AxisSense::crossed};
  EXPECT_NEAR(pair_optical_thickness(a, b, 702.0, 0.1),
              tilted_optical_thickness(a, 702.0, 0.1) + tilted_optical_thickness(b, 702.0, 0.1), 1e-12);
  EXPECT_FALSE(first_coincidence_maximum({}).has_value());
}
