#include "icatopsis/core.hpp"

#include <gtest/gtest.h>

using namespace icatopsis;

namespace {

DecisionMatrix small_matrix() {
  Matrix v(2, 3);
  v << 1, 2, 3, 4, 5, 6;
  return DecisionMatrix::from_values(v);
}

TEST(ValidateProblem, AcceptsWellFormedInput) {
  EXPECT_NO_THROW(validate_problem(small_matrix(), WeightVector{{0.5, 0.5}}));
}

TEST(ValidateProblem, RejectsWeightCountMismatch) {
  try {
    validate_problem(small_matrix(), WeightVector{{0.5, 0.5, 0.0}});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("weight count 3"), std::string::npos);
  }
}

TEST(ValidateProblem, NamesNonFiniteEntryLocation) {
  DecisionMatrix d = small_matrix();
  d.values(0, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    validate_problem(d, WeightVector{{0.5, 0.5}});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("(1,2)"), std::string::npos);
  }
}

TEST(ValidateProblem, RejectsWeightSumViolation) {
  EXPECT_THROW(validate_problem(small_matrix(), WeightVector{{0.5, 0.6}}), ValidationError);
  EXPECT_THROW(validate_problem(small_matrix(), WeightVector{{-0.5, 1.5}}), ValidationError);
}

TEST(ValidateProblem, RejectsTooFewAlternatives) {
  Matrix v(2, 1);
  v << 1, 2;
  EXPECT_THROW(validate_problem(DecisionMatrix::from_values(v), WeightVector{{0.5, 0.5}}),
               ValidationError);
}

TEST(ValidateProblem, RejectsLabelCountMismatch) {
  DecisionMatrix d = small_matrix();
  d.criterion_ids.push_back("extra");
  EXPECT_THROW(validate_problem(d, WeightVector{{0.5, 0.5}}), ValidationError);
}

TEST(WeightVector, EqualWeightsSumToOne) {
  for (std::size_t m : {1u, 2u, 3u, 7u}) {
    const WeightVector w = WeightVector::equal(m);
    double sum = 0;
    for (double x : w.w) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-9);
    EXPECT_TRUE(w.all_equal());
  }
}

TEST(RankingOrder, SortsDescendingWithStableTies) {
  Vector r(4);
  r << 0.5, 0.7, 0.5, 0.2;
  const std::vector<int> order = ranking_order(r);
  EXPECT_EQ(order, (std::vector<int>{1, 0, 2, 3}));
}

TEST(RankingOrder, ClosenessNonIncreasingAlongOrder) {
  RandomEngine rng(91);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Vector r(20);
    for (int i = 0; i < 20; ++i) r[i] = u(rng);
    const std::vector<int> order = ranking_order(r);
    for (std::size_t i = 1; i < order.size(); ++i)
      EXPECT_GE(r[order[i - 1]], r[order[i]]);
  }
}

TEST(FromValues, GeneratesLabels) {
  const DecisionMatrix d = small_matrix();
  EXPECT_EQ(d.criterion_ids, (std::vector<std::string>{"C1", "C2"}));
  EXPECT_EQ(d.alternative_ids, (std::vector<std::string>{"A1", "A2", "A3"}));
}

}  // namespace
