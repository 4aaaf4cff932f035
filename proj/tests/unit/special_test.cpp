// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "frozen_values.hpp"
#include "moe/core/errors.hpp"
#include "moe/wireless/special.hpp"

using moe::wireless::regularized_lower_gamma;
using moe::wireless::regularized_upper_gamma;

TEST(RegularizedGamma, MatchesPoissonTailOracle) {
  for (int m = 1; m <= 20; ++m) {
    for (std::size_t i = 0; i < moe::oracle::kPoissonX.size(); ++i) {
      const double want = moe::oracle::kPoissonTail[m - 1][i];
      const double got = regularized_lower_gamma(m, moe::oracle::kPoissonX[i]);
      EXPECT_LE(std::abs(got - want), 1e-12 * want) << "M=" << m << " x=" << moe::oracle::kPoissonX[i];
    }
  }
}

TEST(RegularizedGamma, AgreesWithBoostOffGrid) {
  for (double a : {0.5, 1.0, 2.5, 7.0, 10.0, 33.0}) {
    for (double x : {1e-6, 0.3, 2.0, 9.9, 10.0, 40.0, 200.0}) {
      EXPECT_NEAR(regularized_lower_gamma(a, x), boost::math::gamma_p(a, x), 1e-13) << a << ' ' << x;
      EXPECT_NEAR(regularized_upper_gamma(a, x), boost::math::gamma_q(a, x), 1e-13) << a << ' ' << x;
    }
  }
}

TEST(RegularizedGamma, Boundaries) {
  EXPECT_EQ(regularized_lower_gamma(3.0, 0.0), 0.0);
  EXPECT_EQ(regularized_upper_gamma(3.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(regularized_lower_gamma(1.0, 2.0), 1.0 - std::exp(-2.0));
}

TEST(RegularizedGamma, RejectsOutsideDomain) {
  EXPECT_THROW(regularized_lower_gamma(0.0, 1.0), moe::DomainError);
  EXPECT_THROW(regularized_lower_gamma(-1.0, 1.0), moe::DomainError);
  EXPECT_THROW(regularized_lower_gamma(2.0, -0.1), moe::DomainError);
  EXPECT_THROW(regularized_lower_gamma(2.0, std::nan("")), moe::DomainError);
}

TEST(RegularizedGamma, LowerAndUpperSumToOne) {
  for (double a : {1.0, 4.0, 10.0}) {
    for (double x : {0.5, 4.0, 12.0}) {
      EXPECT_NEAR(regularized_lower_gamma(a, x) + regularized_upper_gamma(a, x), 1.0, 1e-15);
    }
  }
}
