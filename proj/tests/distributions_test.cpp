#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qdeform/distributions.hpp"
#include "qdeform/oracle.hpp"

namespace qdeform {
namespace {

ModePoint at(double x, double gamma) {
  return ModePoint(x, DeformationParameter::from_gamma(gamma));
}

const double kLn2 = std::log(2.0);
const double kLn11 = std::log(1.1);

TEST(ModePoint, RejectsNonPositiveX) {
  EXPECT_THROW(ModePoint(0.0), domain_error);
  EXPECT_THROW(ModePoint(-1.0), domain_error);
  EXPECT_THROW(ModePoint(NAN), domain_error);
  EXPECT_FALSE(at(0.1, 0.1).below_pole());
  EXPECT_TRUE(at(0.11, 0.1).below_pole());
}

TEST(OccupationProbability, Examples) {
  EXPECT_NEAR(occupation_probability(0, ModePoint(kLn2), ZeroPoint::excluded), 0.5, 1e-16);
  EXPECT_NEAR(occupation_probability(1, ModePoint(1.0), ZeroPoint::included),
              0.23254415793482963, 1e-15);
  EXPECT_NEAR(occupation_probability(1, ModePoint(1.0), ZeroPoint::included),
              2.0 * std::sinh(0.5) * std::exp(-1.5), 1e-16);
}

TEST(OccupationProbability, Normalized) {
  for (double x : {1.0, 0.05, 7.0}) {
    for (ZeroPoint z : {ZeroPoint::excluded, ZeroPoint::included}) {
      double sum = 0.0;
      for (std::uint64_t n = 0; n < 4000; ++n) sum += occupation_probability(n, ModePoint(x), z);
      EXPECT_NEAR(sum, 1.0, 1e-12) << "x=" << x;
    }
  }
}

TEST(OccupationProbability, SpectraShareWeights) {
  for (double x : {0.01, 1.0, 30.0, 800.0}) {
    for (std::uint64_t n : {0u, 1u, 5u}) {
      const ModePoint p(x);
      const double a = occupation_probability(n, p, ZeroPoint::excluded);
      const double b = occupation_probability(n, p, ZeroPoint::included);
      EXPECT_NEAR(a, b, 1e-14 * std::max(a, 1e-300));
    }
  }
}

TEST(UndeformedDistribution, Examples) {
  EXPECT_NEAR(undeformed_distribution(ModePoint(kLn2), ZeroPoint::excluded).value, 1.0, 1e-15);
  EXPECT_NEAR(undeformed_distribution(ModePoint(kLn2), ZeroPoint::included).value, 1.5, 1e-15);
  EXPECT_NEAR(undeformed_distribution(ModePoint(50.0), ZeroPoint::included).value, 0.5, 1e-15);
  EXPECT_EQ(undeformed_distribution(ModePoint(1.0), ZeroPoint::included).variant,
            Variant::UndeformedZpe);
}

TEST(UndeformedDistribution, ZeroPointFloor) {
  for (double x : {1e-3, 0.5, 3.0, 40.0, 700.0}) {
    EXPECT_GE(undeformed_distribution(ModePoint(x), ZeroPoint::included).value, 0.5);
    EXPECT_GT(undeformed_distribution(ModePoint(x), ZeroPoint::excluded).value, 0.0);
  }
}

TEST(DeformedNoZpe, Examples) {
  EXPECT_NEAR(deformed_distribution_no_zpe(at(kLn2, 0.0)).value, 1.0, 1e-15);
  EXPECT_NEAR(deformed_distribution_no_zpe(at(1.0, 0.1)).value, 0.58738915180169191, 1e-14);
  EXPECT_NEAR(deformed_distribution_no_zpe(at(0.7, 0.3)).value, 1.1995746962342558, 1e-14);
  const double edge = deformed_distribution_no_zpe(at(0.10001, 0.1)).value;
  EXPECT_GT(edge, 0.0);
  EXPECT_NEAR(edge, 47504.214761463193, 1e-9 * edge);
}

TEST(DeformedNoZpe, PoleIsDomainError) {
  EXPECT_THROW(deformed_distribution_no_zpe(at(0.1, 0.1)), domain_error);
  EXPECT_THROW(deformed_distribution_no_zpe(at(0.05, 0.1)), domain_error);
}

TEST(DeformedZpe, Examples) {
  EXPECT_NEAR(deformed_distribution_zpe(at(kLn2, 0.0)).value, 1.5, 1e-15);
  EXPECT_NEAR(deformed_distribution_zpe(at(1.0, kLn11)).value, 1.0911090275059306, 1e-14);
  EXPECT_NEAR(deformed_distribution_zpe(at(2.5, 0.3)).value, 0.59467886775705222, 1e-14);
  EXPECT_NEAR(deformed_distribution_zpe(at(50.0, 0.01)).value, 0.5, 1e-12);
  EXPECT_THROW(deformed_distribution_zpe(at(0.05, 0.1)), domain_error);
}

TEST(DeformedZpe, RationalAndHyperbolicFormsAgree) {
  for (double g : {0.0, 0.01, 0.3, 1.0}) {
    for (double x : {g + 0.2, 1.0 + g, 5.0, 12.0}) {
      const double ex = std::exp(x);
      const double q = std::exp(g);
      const double rational = 0.5 * (ex * ex - 1.0) / ((ex - q) * (ex - 1.0 / q));
      const double hyperbolic = 0.5 * std::sinh(x) / (std::cosh(x) - std::cosh(g));
      const double closed = deformed_distribution_zpe(at(x, g)).value;
      EXPECT_NEAR(closed, rational, 1e-12 * closed);
      EXPECT_NEAR(closed, hyperbolic, 1e-12 * closed);
    }
  }
}

TEST(DeformedDistributions, MonotoneDecreasingInX) {
  for (double g : {0.0, 0.05, 0.3}) {
    double prev_zpe = INFINITY, prev_no = INFINITY;
    for (double x = g + 0.01; x < 30.0; x *= 1.07) {
      const double zpe = deformed_distribution_zpe(at(x, g)).value;
      const double no = deformed_distribution_no_zpe(at(x, g)).value;
      ASSERT_LT(zpe, prev_zpe);
      ASSERT_LT(no, prev_no);
      prev_zpe = zpe;
      prev_no = no;
    }
  }
}

TEST(DeformedDistributions, ZeroPointDominatesByAtLeastAHalf) {
  for (double g : {0.0, 0.01, 0.1, 0.3}) {
    for (double x = g + 0.05; x < 40.0; x *= 1.3) {
      const double diff = deformed_distribution_zpe(at(x, g)).value -
                          deformed_distribution_no_zpe(at(x, g)).value;
      EXPECT_GT(diff, 0.0);
    }
    const double far = deformed_distribution_zpe(at(40.0, g)).value -
                       deformed_distribution_no_zpe(at(40.0, g)).value;
    EXPECT_NEAR(far, 0.5, 1e-12);
  }
}

TEST(DeformedDistributions, InvariantUnderGammaSign) {
  for (double g : {0.01, 0.2}) {
    for (double x : {0.5, 2.0, 9.0}) {
      EXPECT_EQ(deformed_distribution_zpe(at(x, g)).value,
                deformed_distribution_zpe(at(x, -g)).value);
      EXPECT_NEAR(qdeform::detail::raw_zpe(x, std::exp(g)),
                  qdeform::detail::raw_zpe(x, std::exp(-g)),
                  1e-13 * qdeform::detail::raw_zpe(x, std::exp(g)));
    }
  }
}

TEST(PartialFractions, QTwo) {
  const auto c = partial_fraction_coefficients(DeformationParameter::from_q(2.0));
  EXPECT_NEAR(c.c1, 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(c.c2, -1.0 / 3.0, 1e-15);
}

TEST(PartialFractions, SumIsOne) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lg(std::log(1e-6), std::log(2.0));
  for (int i = 0; i < 2000; ++i) {
    const auto c = partial_fraction_coefficients(DeformationParameter::from_gamma(std::exp(lg(rng))));
    ASSERT_LE(std::fabs(c.c1 + c.c2 - 1.0), 1e-15);
  }
  const auto near_one = partial_fraction_coefficients(DeformationParameter::from_q(1.0 + 1e-6));
  EXPECT_NEAR(near_one.c1 + near_one.c2, 1.0, 1e-9);
  EXPECT_NEAR(near_one.c1, 0.5e6, 2.0);
}

TEST(PartialFractions, MatchesDefinition) {
  for (double q : {1.01, 1.5, 4.0}) {
    const auto c = partial_fraction_coefficients(DeformationParameter::from_q(q));
    EXPECT_NEAR(c.c1, q / (q - 1.0 / q), 1e-13 * c.c1);
    EXPECT_NEAR(c.c2, -(1.0 / q) / (q - 1.0 / q), 1e-13 * std::fabs(c.c1));
  }
}

TEST(PartialFractions, UndeformedIsSingular) {
  EXPECT_THROW(partial_fraction_coefficients(DeformationParameter::undeformed()),
               singular_decomposition_error);
}

TEST(Fugacity, EqualsClosedFormAtZOne) {
  EXPECT_NEAR(deformed_distribution_fugacity(at(1.0, kLn11), 1.0), 1.0911090275059306, 1e-12);
  for (double g : {0.01, 0.05, 0.1, 0.3}) {
    for (double x = g + 0.5; x <= 10.0; x *= 1.2) {
      const ModePoint p = at(x, g);
      EXPECT_NEAR(deformed_distribution_fugacity(p, 1.0),
                  deformed_distribution_zpe(p).value, 1e-12);
    }
  }
}

TEST(Fugacity, UndeformedLimit) {
  const double x = 1.0;
  const double expected = 0.5 * (std::exp(x) + 1.0) / (std::exp(x) - 1.0);
  EXPECT_NEAR(deformed_distribution_fugacity(at(x, 1e-8), 1.0), expected, 1e-6);
  EXPECT_NEAR(deformed_distribution_fugacity(at(x, 0.0), 1.0), expected, 1e-15);
}

TEST(Fugacity, HalfMatchesShiftedSeries) {
  // e^{-x} -> z e^{-beta E}: brute-force series at x - ln z.
  const ModePoint p = at(1.0, 0.1);
  const double f = deformed_distribution_fugacity(p, 0.5);
  EXPECT_NEAR(f, 0.72741049026714091, 1e-13);
  const auto series = series_distribution(at(1.0 + kLn2, 0.1), Variant::DeformedZpe, 1e-13);
  EXPECT_NEAR(f, series.value, 1e-10);
}

TEST(Fugacity, DomainErrors) {
  EXPECT_THROW(deformed_distribution_fugacity(at(1.0, 0.1), 0.0), domain_error);
  EXPECT_THROW(deformed_distribution_fugacity(at(1.0, 0.1), -1.0), domain_error);
  // q z e^{-x} >= 1
  EXPECT_THROW(deformed_distribution_fugacity(at(1.0, 0.1), std::exp(0.95)), domain_error);
  EXPECT_NO_THROW(deformed_distribution_fugacity(at(1.0, 0.1), std::exp(0.85)));
}

}  // namespace
}  // namespace qdeform
