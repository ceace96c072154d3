// Copyright 2026 The fraclab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "fraclab/cs_extension.h"
#include "fraclab/errors.h"
#include "fraclab/stability_lab.h"
#include "test_support.h"

namespace fraclab {
namespace {

nlohmann::json Fixture() {
  std::ifstream in(std::string(FRACLAB_FIXTURE_DIR) + "/regression.json");
  return nlohmann::json::parse(in);
}

std::string Csv(const ExperimentRecord& rec) {
  std::ostringstream out;
  rec.WriteCsv(out);
  return out.str();
}

class LabTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const Grid grid = testing::DefaultGrid();
    const Domains d = testing::DefaultDomains(grid);
    forward_ = new ForwardOperator(AssembleForward(
        AssembleOperator(grid, 0.5, Potential::Zero(grid)), d.omega, d.w));
    gsvd_ = new GsvdResult(Gsvd(*forward_));
  }
  static void TearDownTestSuite() {
    delete gsvd_;
    delete forward_;
  }
  static const ForwardOperator& F() { return *forward_; }
  static const GsvdResult& G() { return *gsvd_; }
  static const Grid& grid() { return forward_->omega.grid(); }

  static ForwardOperator* forward_;
  static GsvdResult* gsvd_;
};

ForwardOperator* LabTest::forward_ = nullptr;
GsvdResult* LabTest::gsvd_ = nullptr;

TEST(FitTest, ExactLineAndWeightedIncrease) {
  const FitSummary fit = FitLine("line", {0, 1, 2, 3}, {1, 3, 5, 7});
  EXPECT_NEAR(fit.slope, 2.0, 1e-14);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-14);
  EXPECT_NEAR(fit.residual, 0.0, 1e-14);
  // sigma_j = 1/j^2: sigma_j j^1 decreases everywhere; j^3 increases.
  Eigen::VectorXd sigma(6);
  for (int j = 0; j < 6; ++j) sigma[j] = 1.0 / ((j + 1.0) * (j + 1.0));
  EXPECT_EQ(LastWeightedIncrease(sigma, 6, 1.0), 0);
  EXPECT_GE(LastWeightedIncrease(sigma, 6, 3.0), 4);
}

TEST_F(LabTest, SvDecayDefaultConfiguration) {
  const nlohmann::json fx = Fixture()["sv_decay"];
  const ExperimentRecord rec = SvDecayExperiment(F());
  EXPECT_EQ(rec.name, "sv-decay");
  EXPECT_FALSE(rec.inconclusive);
  EXPECT_TRUE(rec.Assertion("sigma_strictly_decreasing"));
  EXPECT_TRUE(rec.Assertion("sigma_positive_within_rank"));
  for (int p : {1, 2, 3}) {
    EXPECT_TRUE(rec.Assertion("sigma_j_times_j^" + std::to_string(p) +
                              "_eventually_decreasing"));
  }
  EXPECT_EQ(rec.Measurement("rank"), fx["rank"].get<double>());
  EXPECT_NEAR(rec.Measurement("sigma_1"), fx["sigma_1"].get<double>(),
              fx["sigma_1_relative_tolerance"].get<double>() *
                  fx["sigma_1"].get<double>());
  EXPECT_LE(rec.Measurement("sigma_20_over_sigma_1"),
            fx["sigma_20_over_sigma_1_bound"].get<double>());
  EXPECT_EQ(rec.rows.size(), static_cast<size_t>(G().sigma.size()));
  ASSERT_EQ(rec.fits.size(), 2u);
  EXPECT_LT(rec.fits[0].slope, 0.0);
}

TEST_F(LabTest, SvDecayWeylCheck) {
  const Potential dq = Potential::Bump(grid(), 0.5, 0.2, 0.6);
  const ExperimentRecord rec = SvDecayExperiment(F(), dq);
  EXPECT_TRUE(rec.Assertion("weyl_bound"));
  EXPECT_LE(rec.Measurement("weyl_max_sigma_shift"),
            rec.Measurement("weyl_operator_difference") * (1 + 1e-9));
  EXPECT_GT(rec.Measurement("weyl_max_sigma_shift"), 0.0);
}

TEST(SvDecayTest, TinyGeometryIsInconclusive) {
  const Grid grid = MakeGrid(1, 16, 6.0);
  const Domains d = MakeDomains(grid, 1.0, 1.0, 1.0);
  const ForwardOperator f = AssembleForward(
      AssembleOperator(grid, 0.5, Potential::Zero(grid)), d.omega, d.w);
  const ExperimentRecord rec = SvDecayExperiment(f);
  EXPECT_TRUE(rec.inconclusive);
  EXPECT_FALSE(rec.notes.empty());
}

TEST_F(LabTest, CostCurveBasics) {
  const nlohmann::json fx = Fixture()["cost_curve"];
  const GridFunction v = testing::CosSquaredOn(F().omega);
  const std::vector<double> eps = {2.0, 1.0, 0.1, 0.05, 0.025, 0.01, 1e-3, 1e-9};
  const ExperimentRecord rec = CostCurveExperiment(F(), G(), v, eps);
  EXPECT_TRUE(rec.Assertion("cost_nonincreasing_in_epsilon"));
  EXPECT_TRUE(rec.Assertion("zero_cost_when_epsilon_exceeds_target"));
  ASSERT_EQ(rec.rows.size(), eps.size());
  // Rows: eps, l, error, cost, saturated. The target is normalised in H^s,
  // so its L2 norm is below 1 and eps = 1, 2 need no control.
  EXPECT_EQ(rec.rows[0][3], 0.0);
  EXPECT_EQ(rec.rows[1][3], 0.0);
  // Truncation levels are discrete, so cost is piecewise constant in eps;
  // it must still grow strictly across each decade before the floor.
  for (size_t i = 2; i < rec.rows.size(); ++i) {
    EXPECT_GE(rec.rows[i][3], rec.rows[i - 1][3]) << "eps=" << rec.rows[i][0];
  }
  EXPECT_GT(rec.rows[5][3], rec.rows[2][3]);  // 0.01 vs 0.1
  EXPECT_GT(rec.rows[6][3], rec.rows[5][3]);  // 1e-3 vs 0.01
  EXPECT_EQ(rec.rows.back()[4], 1.0);  // below the floor
  EXPECT_NEAR(rec.Measurement("error_floor"), fx["error_floor"].get<double>(),
              fx["error_floor_relative_tolerance"].get<double>() *
                  fx["error_floor"].get<double>());
  bool has_mu_fit = false;
  for (const FitSummary& fit : rec.fits) {
    has_mu_fit = has_mu_fit || fit.name == "log_cost_vs_epsilon^-mu";
  }
  EXPECT_TRUE(has_mu_fit);
  EXPECT_GT(rec.Measurement("best_fit_mu"), 0.0);
}

TEST_F(LabTest, QucMeasureTrivialAndTail) {
  const QucPoint zero = QucMeasure(F(), GridFunction::Zeros(grid()));
  EXPECT_EQ(zero.eta, 0.0);
  EXPECT_EQ(zero.distance, 0.0);
  // Discarded tail r_alpha: eta <= alpha ||r_alpha||.
  for (int k : {3, 6, 10}) {
    const double alpha = G().sigma[k];
    Eigen::VectorXd c = Eigen::VectorXd::Zero(G().sigma.size());
    for (Eigen::Index j = k; j < c.size(); ++j) c[j] = 1.0 / (1.0 + j - k);
    const Eigen::VectorXd tail = G().w * c;
    const double tail_l2 = std::sqrt(F().mass_omega) * tail.norm();
    const QucPoint p = QucMeasure(F(), F().omega.ExtendByZero(tail));
    EXPECT_LE(p.eta, alpha * tail_l2 * (1 + 1e-9)) << "k=" << k;
  }
  // Highest resolved singular vector: eta collapses while d stays O(1).
  const int top = G().rank - 1;
  const QucPoint hf = QucMeasure(F(), F().omega.ExtendByZero(G().w.col(top)));
  EXPECT_LT(hf.eta, 1e-10);
  EXPECT_GT(hf.distance, 1e-2);
  EXPECT_LE(hf.distance, 1.0);
}

TEST_F(LabTest, QucExperimentAssertions) {
  const nlohmann::json fx = Fixture()["quc"];
  const std::vector<GridFunction> samples = QucSamples(F(), G(), 10, 42);
  EXPECT_EQ(samples.size(), static_cast<size_t>(G().w.cols() + 10));
  const ExperimentRecord rec = QucExperiment(F(), samples);
  EXPECT_TRUE(rec.Assertion("eta_positive_for_nonzero_v"));
  EXPECT_TRUE(rec.Assertion("distance_at_most_l2_norm"));
  EXPECT_TRUE(rec.Assertion("eta_spans_three_decades"));
  EXPECT_GE(rec.Measurement("eta_decades"), fx["eta_decades_min"].get<double>());
  for (const auto& row : rec.rows) EXPECT_LE(row[2], 1.0 + 1e-12);
  EXPECT_EQ(Csv(rec), Csv(QucExperiment(F(), QucSamples(F(), G(), 10, 42))));
  EXPECT_NE(Csv(rec), Csv(QucExperiment(F(), QucSamples(F(), G(), 10, 43))));
}

class DnLabTest : public ::testing::Test {
 protected:
  DnLabTest()
      : grid_(testing::DefaultGrid()),
        d_(MakeTwoWindowDomains(grid_, 1.0, 1.0, 1.0)) {}
  Grid grid_;
  TwoWindowDomains d_;
};

TEST_F(DnLabTest, OscillatoryFamilyHasConstantDistance) {
  const auto family = OscillatoryFamily(d_.omega, 1.0, Potential::Zero(grid_),
                                        0.3, {1, 2, 4, 6, 8, 10});
  ASSERT_EQ(family.size(), 6u);
  for (const PotentialPair& pair : family) {
    const GridFunction dq = (pair.q2 - pair.q1).values;
    EXPECT_NEAR(std::sqrt(grid_.spacing()) * dq.values.norm(), 0.3, 1e-13);
    EXPECT_TRUE(d_.omega.Supports(dq));
  }
}

TEST_F(DnLabTest, EqualPairGivesZeroRow) {
  const Potential q = Potential::Bump(grid_, 1.0, 0.0, 0.5);
  const ExperimentRecord rec =
      DnModulusExperiment(grid_, 0.5, d_, {PotentialPair{1.0, q, q}});
  ASSERT_EQ(rec.rows.size(), 1u);
  EXPECT_EQ(rec.rows[0][1], 0.0);
  EXPECT_EQ(rec.rows[0][3], 0.0);
  EXPECT_EQ(rec.rows[0][4], 0.0);
}

TEST_F(DnLabTest, OscillatoryCollapse) {
  const nlohmann::json fx = Fixture()["dn_modulus"];
  const auto family =
      OscillatoryFamily(d_.omega, 1.0, Potential::Zero(grid_),
                        fx["distance"].get<double>(), {1, 2, 4, 6, 8, 10});
  const ExperimentRecord rec = DnModulusExperiment(grid_, 0.5, d_, family);
  EXPECT_TRUE(rec.Assertion("dn_norm_symmetric"));
  EXPECT_TRUE(rec.Assertion("dn_norm_monotone_decreasing"));
  EXPECT_TRUE(rec.Assertion("l2_distance_constant"));
  EXPECT_GE(rec.Measurement("dn_decades"), fx["dn_decades_min"].get<double>());
}

TEST_F(DnLabTest, DegeneratePairSkipped) {
  const double lambda1 = DirichletSpectrum(
      AssembleOperator(grid_, 0.5, Potential::Zero(grid_)), d_.omega, 1)[0];
  const Potential bad = Potential::Constant(grid_, -lambda1, d_.omega);
  const Potential good = Potential::Zero(grid_);
  const ExperimentRecord rec = DnModulusExperiment(
      grid_, 0.5, d_, {PotentialPair{1.0, good, bad}, PotentialPair{2.0, good, good}});
  EXPECT_EQ(rec.rows.size(), 1u);
  EXPECT_FALSE(rec.notes.empty());
}

TEST_F(DnLabTest, RecoveryOfKnownDifference) {
  const nlohmann::json fx = Fixture()["recover"];
  const GridFunction phi = testing::CosSquaredOn(d_.omega);
  const IndexSet ball = MakeOmega(grid_, 0.125);
  const double c = 0.01;
  const Potential q1 = Potential::Zero(grid_);
  const Potential q2 = Potential::Constant(grid_, c, ball);
  double oracle = 0.0;  // c * int_B phi by direct quadrature
  for (int a : ball.indices()) oracle += c * grid_.spacing() * phi.values[a];

  const RecoveryResult same = RecoverFunctional(grid_, 0.5, d_, q2, q2, phi, phi, 1e-2);
  EXPECT_EQ(same.value, 0.0);

  const RecoveryResult r = RecoverFunctional(grid_, 0.5, d_, q1, q2, phi, phi, 1e-3);
  EXPECT_LE(std::abs(r.value - oracle), fx["final_relative_error_bound"].get<double>() * oracle);
  EXPECT_LE(r.control1.approx_error, 1e-3);
  EXPECT_LE(r.control2.approx_error, 1e-3);

  const TwoWindowDomains swapped{d_.omega, d_.w2, d_.w1};
  const RecoveryResult rs =
      RecoverFunctional(grid_, 0.5, swapped, q1, q2, phi, phi, 1e-3);
  EXPECT_LE(std::abs(rs.value - r.value), 0.05 * oracle);

  try {
    RecoverFunctional(grid_, 0.5, d_, q1, q2, phi, phi, 1e-9);
    FAIL() << "expected the control floor to be reported";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("floor"), std::string::npos);
  }
}

TEST_F(DnLabTest, RecoverExperimentReachesFivePercent) {
  const GridFunction phi = testing::CosSquaredOn(d_.omega);
  const Potential q2 = Potential::Constant(grid_, 0.01, MakeOmega(grid_, 0.125));
  const ExperimentRecord rec = RecoverExperiment(
      grid_, 0.5, d_, Potential::Zero(grid_), q2, phi, phi, {1, 1e-1, 1e-2, 1e-3});
  EXPECT_FALSE(rec.inconclusive);
  EXPECT_TRUE(rec.Assertion("final_within_5_percent"));
  EXPECT_EQ(rec.rows.size(), 4u);
}

TEST(WeightedConstantFixture, FrozenValues) {
  const nlohmann::json fx = Fixture()["weighted_constants"];
  const double s = fx["s"], delta = fx["delta"], tol = fx["relative_tolerance"];
  EXPECT_NEAR(WeightedEnergyConstant(s, delta), fx["energy"].get<double>(),
              tol * fx["energy"].get<double>());
  EXPECT_NEAR(WeightedGradientConstant(s, delta), fx["gradient"].get<double>(),
              tol * fx["gradient"].get<double>());
}

TEST_F(LabTest, RecordCsvHasUnitsAndIsDeterministic) {
  const ExperimentRecord a = SvDecayExperiment(F());
  const ExperimentRecord b = SvDecayExperiment(F());
  const std::string csv = Csv(a);
  EXPECT_EQ(csv, Csv(b));
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_NE(header.find('['), std::string::npos);
  const nlohmann::json summary = a.Summary();
  EXPECT_TRUE(summary.contains("assertions"));
  EXPECT_TRUE(summary.contains("fits"));
  EXPECT_TRUE(summary.contains("wall_time_seconds"));
  EXPECT_THROW(a.Assertion("no_such_assertion"), std::out_of_range);
}

}  // namespace
}  // namespace fraclab
