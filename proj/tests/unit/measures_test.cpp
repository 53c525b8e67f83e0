#include "qnum/measures.hpp"

#include "qnum/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace qnum {
namespace {

// Direct transcriptions of the closed forms, without the log1p rewrites.
double naive_sk(double w) {
  return 1.0 + (1.0 + w) * std::log2((1.0 + w) / 2.0) + (1.0 - w) * std::log2((1.0 - w) / 2.0);
}
double naive_de(double w) {
  const double p = (1.0 + 3.0 * w) / 4.0, q = (1.0 - w) / 4.0;
  return 1.0 + p * std::log2(p) + 3.0 * q * std::log2(q);
}

std::vector<MeasureModel> builtins() {
  return {MeasureModel::secret_key_fraction(), MeasureModel::distillable_entanglement(),
          MeasureModel::negativity(), MeasureModel::teleportation_success()};
}

double central(const std::function<double(double)>& f, double w) {
  const double h = 1e-5;
  return (-f(w + 2 * h) + 8 * f(w + h) - 8 * f(w - h) + f(w - 2 * h)) / (12 * h);
}

TEST(MeasureValue, EndpointAndReferenceValues) {
  const auto sk = MeasureModel::secret_key_fraction();
  const auto de = MeasureModel::distillable_entanglement();
  const auto neg = MeasureModel::negativity();
  const auto succ = MeasureModel::teleportation_success();
  EXPECT_DOUBLE_EQ(sk.value(1.0), 1.0);
  EXPECT_DOUBLE_EQ(de.value(1.0), 1.0);
  EXPECT_NEAR(de.value(0.5), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(neg.value(1.0 / 3.0), 0.0);
  EXPECT_DOUBLE_EQ(succ.value(0.0), 0.5);
  EXPECT_NEAR(sk.value(0.9), 0.4272060857680877, 1e-12);
  EXPECT_EQ(sk.upper_bound(), 1.0);
  EXPECT_EQ(succ.upper_bound(), 1.0);
  EXPECT_FALSE(succ.satisfies_f0_zero());
  EXPECT_TRUE(sk.satisfies_f0_zero());
}

TEST(MeasureValue, AgreesWithNaiveClosedForms) {
  const auto sk = MeasureModel::secret_key_fraction();
  const auto de = MeasureModel::distillable_entanglement();
  for (double w = 0.80; w < 0.999; w += 0.0137) {
    EXPECT_NEAR(sk.value(w), naive_sk(w), 1e-13) << w;
  }
  for (double w = 0.76; w < 0.999; w += 0.0137) {
    EXPECT_NEAR(de.value(w), naive_de(w), 1e-13) << w;
  }
  EXPECT_EQ(sk.value(0.3), 0.0);
  EXPECT_EQ(de.value(0.3), 0.0);
}

TEST(MeasureValue, RejectsOutOfRange) {
  for (const auto& m : builtins()) {
    EXPECT_THROW(m.value(-0.01), DomainError) << m.id();
    EXPECT_THROW(m.value(1.01), DomainError) << m.id();
  }
}

TEST(MeasureDerivatives, ClosedFormExamples) {
  const auto sk = MeasureModel::secret_key_fraction();
  const auto de = MeasureModel::distillable_entanglement();
  EXPECT_NEAR(sk.d1(0.9), std::log2(19.0), 1e-12);
  EXPECT_NEAR(de.d2(0.8), 3.0 * std::log2(std::exp(1.0)) / (3.4 * 0.2), 1e-12);
  // f''_de (1 + 3w)(1 - w) is the constant 3 log2 e, its value at w = 0.
  for (double w = 0.76; w < 1.0; w += 0.03) {
    EXPECT_NEAR(de.d2(w) * (1 + 3 * w) * (1 - w), 4.32808512266689, 1e-12);
  }
  // 2^{f'_sk} = (1 + w) / (1 - w), which would give f'_sk(1/3) = 1.
  for (double w = 0.8; w < 1.0; w += 0.03) {
    EXPECT_NEAR(std::exp2(sk.d1(w)), (1 + w) / (1 - w), 1e-12 * (1 + w) / (1 - w));
  }
}

TEST(MeasureDerivatives, FiniteDifferenceConsistency) {
  std::mt19937_64 rng(11);
  for (const auto& m : builtins()) {
    std::uniform_real_distribution<double> pick(m.threshold() + 0.01, 0.99);
    for (int k = 0; k < 100; ++k) {
      const double w = pick(rng);
      auto f = [&](double v) { return m.value(v); };
      auto df = [&](double v) { return m.d1(v); };
      auto lf = [&](double v) { return m.log_value(v); };
      auto ldf = [&](double v) { return m.log_d1(v); };
      EXPECT_LT(std::abs(m.d1(w) - central(f, w)) / (1 + std::abs(m.d1(w))), 1e-6) << m.id() << " " << w;
      EXPECT_LT(std::abs(m.d2(w) - central(df, w)) / (1 + std::abs(m.d2(w))), 1e-6) << m.id() << " " << w;
      EXPECT_LT(std::abs(m.log_d1(w) - central(lf, w)) / (1 + std::abs(m.log_d1(w))), 1e-6) << m.id() << " " << w;
      EXPECT_LT(std::abs(m.log_d2(w) - central(ldf, w)) / (1 + std::abs(m.log_d2(w))), 1e-6) << m.id() << " " << w;
    }
  }
}

TEST(MeasureDerivatives, DomainIsThePositiveBranch) {
  const auto sk = MeasureModel::secret_key_fraction();
  EXPECT_THROW(sk.d1(0.5), DomainError);
  EXPECT_THROW(sk.d2(1.0), DomainError);
  EXPECT_THROW(sk.log_d1(0.7), DomainError);
  EXPECT_THROW(sk.log_value(0.7), DomainError);
  EXPECT_NO_THROW(sk.log_d2(0.9));
}

TEST(MeasureDerivatives, LogDerivativeIsRatio) {
  for (const auto& m : builtins()) {
    const double w = 0.5 * (m.threshold() + 1.0);
    EXPECT_NEAR(m.log_d1(w), m.d1(w) / m.value(w), 1e-12) << m.id();
  }
}

TEST(MeasureJet, ClampsNearOne) {
  const auto sk = MeasureModel::secret_key_fraction();
  const auto jet = sk.jet(1.0);
  EXPECT_TRUE(std::isfinite(jet.d_log_f));
  EXPECT_TRUE(std::isfinite(jet.d2_log_f));
  EXPECT_NEAR(jet.f, 1.0, 1e-9);
  EXPECT_THROW(sk.jet(0.5), DomainError);
}

TEST(ZeroThreshold, ReferenceValues) {
  EXPECT_NEAR(zero_threshold(MeasureModel::secret_key_fraction()), 0.779944, 1e-5);
  EXPECT_NEAR(zero_threshold(MeasureModel::distillable_entanglement()), 0.747613, 1e-5);
  EXPECT_NEAR(MeasureModel::negativity().threshold(), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(MeasureModel::teleportation_success().threshold(), 0.0);
}

TEST(ZeroThreshold, ValueVanishesAtAndIsPositiveAbove) {
  for (const auto& m : {MeasureModel::secret_key_fraction(), MeasureModel::distillable_entanglement()}) {
    const double c = m.threshold();
    EXPECT_LE(m.value(c), 1e-9) << m.id();
    for (double w = c + 1e-6; w <= 1.0; w += 1e-3) EXPECT_GT(m.value(w), 0.0) << m.id() << " " << w;
    EXPECT_GT(m.value(1.0), 0.0);
  }
}

TEST(ZeroThreshold, DegenerateMeasureThrows) {
  EXPECT_THROW(MeasureModel::polynomial("zero", {0.0}), DegenerateMeasureError);
}

TEST(InflectionPoint, ReferenceValues) {
  EXPECT_NEAR(*inflection_point(MeasureModel::secret_key_fraction()), 0.968418, 1e-5);
  EXPECT_NEAR(*inflection_point(MeasureModel::distillable_entanglement()), 0.966984, 1e-5);
  EXPECT_FALSE(inflection_point(MeasureModel::negativity()));
  EXPECT_FALSE(inflection_point(MeasureModel::teleportation_success()));
}

TEST(InflectionPoint, LogCurvatureVanishesThere) {
  for (const auto& m : {MeasureModel::secret_key_fraction(), MeasureModel::distillable_entanglement()}) {
    const double c1 = *inflection_point(m);
    EXPECT_LT(m.log_d2(c1 - 1e-8), 0.0);
    EXPECT_GT(m.log_d2(c1 + 1e-8), 0.0);
  }
}

TEST(InflectionPoint, SingleSignChangeOnFineGrid) {
  for (const auto& m : {MeasureModel::secret_key_fraction(), MeasureModel::distillable_entanglement()}) {
    const double lo = m.threshold() + 1e-9, hi = 1.0 - 1e-9;
    int changes = 0, prev = 0;
    for (int k = 0; k < 100000; ++k) {
      const double v = m.log_d2(lo + (hi - lo) * k / 99999.0);
      const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
      if (s != 0 && prev != 0 && s != prev) ++changes;
      if (s != 0) prev = s;
    }
    EXPECT_EQ(changes, 1) << m.id();
  }
}

TEST(InflectionPoint, NegativityCurvatureIsClosedForm) {
  const auto neg = MeasureModel::negativity();
  for (double w = 0.4; w < 1.0; w += 0.05) {
    EXPECT_NEAR(neg.log_d2(w), -9.0 / ((3 * w - 1) * (3 * w - 1)), 1e-9);
  }
}

TEST(InflectionPoint, OscillatingLogCurvatureIsRejected) {
  const auto wavy = MeasureModel::custom(
      "wavy", [](double w) { return w * std::exp(0.05 * std::sin(20 * w)); },
      [](double w) { return std::exp(0.05 * std::sin(20 * w)) * (1 + w * std::cos(20 * w)); },
      [](double w) {
        const double e = std::exp(0.05 * std::sin(20 * w));
        const double a = 1 + w * std::cos(20 * w);
        return e * (std::cos(20 * w) * a + std::cos(20 * w) - 20 * w * std::sin(20 * w));
      });
  EXPECT_THROW(inflection_point(wavy), NonUniqueInflectionError);
}

TEST(Fidelity, MappingsAndInverse) {
  EXPECT_DOUBLE_EQ(fidelity_from_werner(1.0), 1.0);
  EXPECT_DOUBLE_EQ(fidelity_from_werner(0.0), 0.25);
  EXPECT_NEAR(fidelity_from_werner(0.8991), 0.9243, 5e-5);
  EXPECT_DOUBLE_EQ(bright_state_population(1.0), 0.0);
  EXPECT_DOUBLE_EQ(bright_state_population(0.0), 0.75);
  EXPECT_NEAR(bright_state_population(2.0 / 3.0), 0.25, 1e-15);
  for (double f = 0.25; f <= 1.0; f += 0.01) {
    EXPECT_NEAR(fidelity_from_werner(werner_from_fidelity(f)), f, 1e-15);
  }
  EXPECT_THROW(werner_from_fidelity(0.2), DomainError);
  EXPECT_THROW(fidelity_from_werner(-0.5), DomainError);
}

TEST(Registry, BuiltinsAndCustom) {
  MeasureRegistry reg;
  EXPECT_NE(reg.find("sk"), nullptr);
  EXPECT_NE(reg.find("succ"), nullptr);
  EXPECT_EQ(reg.find("quad"), nullptr);
  reg.add(MeasureModel::polynomial("quad", {0.0, 0.0, 1.0}));
  ASSERT_NE(reg.find("quad"), nullptr);
  EXPECT_NEAR(reg.find("quad")->value(0.5), 0.25, 1e-15);
  EXPECT_NEAR(reg.find("quad")->d2(0.5), 2.0, 1e-15);
  EXPECT_THROW(reg.add(MeasureModel::polynomial("sk", {0.0, 1.0})), ValidationError);
}

}  // namespace
}  // namespace qnum
