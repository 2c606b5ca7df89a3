#include <cmath>
#include <cstdint>
#include <random>

#include <gtest/gtest.h>

#include "qdeform/qmath.hpp"

namespace qdeform {
namespace {

// (q^n - q^-n)/(q - q^-1) straight from the definition, q not canonicalized.
double raw_basis(std::uint64_t n, double q) {
  const double nd = static_cast<double>(n);
  return (std::pow(q, nd) - std::pow(q, -nd)) / (q - 1.0 / q);
}

TEST(DeformationParameter, FromQOneIsUndeformed) {
  const auto d = make_deformation(1.0, DeformationKind::from_q);
  EXPECT_EQ(d.gamma(), 0.0);
  EXPECT_EQ(d.q(), 1.0);
  EXPECT_TRUE(d.is_undeformed());
}

TEST(DeformationParameter, QBelowOneFoldsToReciprocal) {
  const auto d = make_deformation(0.5, DeformationKind::from_q);
  EXPECT_DOUBLE_EQ(d.q(), 2.0);
  EXPECT_DOUBLE_EQ(d.gamma(), std::log(2.0));
  EXPECT_EQ(DeformationParameter::from_gamma(-0.3),
            DeformationParameter::from_gamma(0.3));
}

TEST(DeformationParameter, FromGammaMatchesFromQ) {
  const auto d = make_deformation(0.0953102, DeformationKind::from_gamma);
  EXPECT_NEAR(d.q(), 1.1000000, 1e-7);
  for (double q : {0.2, 0.9, 1.0, 1.1, 3.0, 40.0}) {
    const auto a = DeformationParameter::from_q(q);
    const auto b = DeformationParameter::from_gamma(std::log(q));
    EXPECT_EQ(a.gamma(), b.gamma());
    EXPECT_NEAR(a.q(), q >= 1.0 ? q : 1.0 / q, 4e-16 * a.q());
  }
}

TEST(DeformationParameter, RejectsBadInput) {
  EXPECT_THROW(DeformationParameter::from_q(0.0), domain_error);
  EXPECT_THROW(DeformationParameter::from_q(-1.0), domain_error);
  EXPECT_THROW(DeformationParameter::from_q(NAN), domain_error);
  EXPECT_THROW(DeformationParameter::from_q(INFINITY), domain_error);
  EXPECT_THROW(DeformationParameter::from_gamma(INFINITY), domain_error);
  EXPECT_THROW(DeformationParameter::from_gamma(NAN), domain_error);
}

TEST(BasisNumber, ZeroAndOne) {
  for (double g : {0.0, 1e-9, 0.1, 2.0, 30.0}) {
    const auto d = DeformationParameter::from_gamma(g);
    EXPECT_EQ(basis_number(0, d), 0.0);
    EXPECT_EQ(basis_number(1, d), 1.0);
  }
}

TEST(BasisNumber, ThreeAtQTwo) {
  // (8 - 1/8)/(2 - 1/2)
  EXPECT_NEAR(basis_number(3, DeformationParameter::from_q(2.0)), 5.25, 1e-14);
}

TEST(BasisNumber, UndeformedIsExactlyN) {
  const auto d = DeformationParameter::undeformed();
  for (std::uint64_t n : {0u, 1u, 2u, 17u, 1000u, 123456789u}) {
    EXPECT_EQ(basis_number(n, d), static_cast<double>(n));
  }
}

TEST(BasisNumber, RecurrenceHolds) {
  for (double g : {0.0, 1e-7, 1e-3, 0.05, 0.5, 1.0, 2.0}) {
    const auto d = DeformationParameter::from_gamma(g);
    const double two_cosh = d.q() + d.q_inverse();
    for (std::uint64_t n = 1; n < 1000; ++n) {
      if (log_basis_number(n + 1, d) > 700.0) break;
      const double next = basis_number(n + 1, d);
      const double rhs = two_cosh * basis_number(n, d) - basis_number(n - 1, d);
      ASSERT_LE(std::fabs(next - rhs), 1e-12 * next) << "gamma=" << g << " n=" << n;
    }
  }
}

TEST(BasisNumber, SmallGammaApproachesN) {
  const auto d = DeformationParameter::from_gamma(1e-8);
  for (std::uint64_t n = 1; n <= 100; ++n) {
    const double nd = static_cast<double>(n);
    EXPECT_LE(std::fabs(basis_number(n, d) - nd) / nd, 1e-7);
  }
}

TEST(BasisNumber, TaylorBranchMatchesSinhRatio) {
  for (double g : {1e-9, 5e-7, 0.999999e-6}) {
    const auto d = DeformationParameter::from_gamma(g);
    for (std::uint64_t n : {2u, 10u, 500u}) {
      const double direct = std::sinh(static_cast<double>(n) * g) / std::sinh(g);
      EXPECT_NEAR(basis_number(n, d), direct, 1e-14 * direct);
    }
  }
}

TEST(BasisNumber, SymmetricUnderQInverse) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> q_dist(1.01, 3.0);
  std::uniform_int_distribution<int> n_dist(0, 60);
  for (int i = 0; i < 500; ++i) {
    const double q = q_dist(rng);
    const auto n = static_cast<std::uint64_t>(n_dist(rng));
    const double a = raw_basis(n, q);
    const double b = raw_basis(n, 1.0 / q);
    EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, a));
    EXPECT_EQ(basis_number(n, DeformationParameter::from_gamma(std::log(q))),
              basis_number(n, DeformationParameter::from_gamma(-std::log(q))));
    EXPECT_NEAR(basis_number(n, DeformationParameter::from_q(q)),
                basis_number(n, DeformationParameter::from_q(1.0 / q)), 1e-13 * std::max(1.0, a));
    EXPECT_NEAR(basis_number(n, DeformationParameter::from_q(q)), a,
                1e-12 * std::max(1.0, a));
  }
}

TEST(BasisNumber, MonotoneInN) {
  for (double g : {0.0, 1e-5, 0.2, 1.5}) {
    const auto d = DeformationParameter::from_gamma(g);
    double prev = basis_number(0, d);
    for (std::uint64_t n = 1; n < 400; ++n) {
      const double v = basis_number(n, d);
      ASSERT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(BasisNumber, LargeArgumentUsesScaledForm) {
  const auto d = DeformationParameter::from_gamma(1.0);
  // sinh(40)/sinh(1) evaluated directly is still in range.
  EXPECT_NEAR(basis_number(40, d), std::sinh(40.0) / std::sinh(1.0),
              1e-13 * basis_number(40, d));
  EXPECT_NEAR(log_basis_number(40, d), std::log(std::sinh(40.0) / std::sinh(1.0)), 1e-12);
}

TEST(BasisNumber, OverflowIsReported) {
  const auto d = DeformationParameter::from_gamma(2.0);
  EXPECT_THROW(basis_number(1000, d), overflow_error);
  EXPECT_TRUE(std::isfinite(log_basis_number(1000, d)));
  EXPECT_NEAR(log_basis_number(1000, d), 999.0 * 2.0 - std::log1p(-std::exp(-4.0)), 1e-10);
}

TEST(BasisNumber, TableMatchesPointwise) {
  const auto d = DeformationParameter::from_gamma(0.3);
  const auto table = basis_numbers(20, d);
  ASSERT_EQ(table.size(), 20u);
  for (const auto& b : table) EXPECT_EQ(b.value, basis_number(b.n, d));
}

}  // namespace
}  // namespace qdeform
