#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "xbarsim/errors.hpp"
#include "xbarsim/mzi.hpp"
#include "xbarsim/rng.hpp"

using namespace xbarsim;

namespace {

LossModel node_loss(double il_db) { return LossModel::lossless().with_node_loss(il_db); }

double max_dev(const Mat2& a, const Eigen::Matrix2cd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(LossModel, Consistency) {
  const LossModel l{0.06, 0.2, 0.1, 0.02, 0.5};
  EXPECT_NEAR(l.il_node_db(), 0.52, 1e-15);
  EXPECT_NEAR(-10.0 * std::log10(l.t_node() * l.t_node()), l.il_node_db(), 1e-12);
  EXPECT_NEAR(l.l_coup(), std::pow(10.0, -0.003), 1e-15);
  EXPECT_NEAR(l.alpha(), std::pow(10.0, -0.025), 1e-15);
  EXPECT_THROW((LossModel{-0.1, 0, 0, 0, 0}.validate()), DomainError);
  EXPECT_THROW((LossModel{0, NAN, 0, 0, 0}.validate()), DomainError);
}

TEST(LossModel, WithNodeLoss) {
  const LossModel p = LossModel::silicon_passives().with_node_loss(1.5);
  EXPECT_DOUBLE_EQ(p.il_coup_db, 0.06);
  EXPECT_NEAR(p.il_node_db(), 1.5, 1e-12);
  EXPECT_DOUBLE_EQ(p.il_xi_db, 0.1);
  const LossModel low = LossModel::silicon_passives().with_node_loss(0.08);
  EXPECT_DOUBLE_EQ(low.il_ps_db, 0.0);
  EXPECT_NEAR(low.il_coup_db, 0.04, 1e-15);
  EXPECT_NEAR(low.il_node_db(), 0.08, 1e-15);
  EXPECT_THROW(LossModel::lossless().with_node_loss(-1.0), DomainError);
}

TEST(NodeSettings, AnglesReduced) {
  const NodeSettings s(-M_PI / 2, 5 * M_PI);
  EXPECT_NEAR(s.theta(), 1.5 * M_PI, 1e-12);
  EXPECT_NEAR(s.phi(), M_PI, 1e-12);
  EXPECT_GE(NodeSettings(-1e-18, 0).theta(), 0.0);
  EXPECT_LT(NodeSettings(-1e-18, 0).theta(), 2 * M_PI);
}

TEST(NodeTransfer, BarAndCross) {
  const Mat2 bar = node_transfer({M_PI, 0.0}, LossModel::lossless());
  EXPECT_NEAR(std::abs(bar(0, 0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(bar(1, 1)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(bar(0, 1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(bar(1, 0)), 0.0, 1e-12);
  const Mat2 cross = node_transfer({0.0, 0.0}, LossModel::lossless());
  EXPECT_NEAR(std::abs(cross(0, 1)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(cross(1, 0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(cross(0, 0)), 0.0, 1e-12);
}

TEST(NodeTransfer, MatchesFourMatrixProduct) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0.0, 2 * M_PI);
  const LossModel loss = node_loss(2.0);
  const double t2 = std::pow(10.0, -0.2);
  for (int k = 0; k < 50; ++k) {
    const double th = ang(rng);
    const double ph = ang(rng);
    const Mat2 m = node_transfer({th, ph}, loss);
    EXPECT_LT(max_dev(m, oracle::mzi(th, ph, std::sqrt(t2))), 1e-12);
    EXPECT_LT(max_dev(m.adjoint() * m, t2 * Eigen::Matrix2cd::Identity()), 1e-12);
  }
}

TEST(NodeTransfer, LosslessUnitary) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ang(-10.0, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const Mat2 m = node_transfer({ang(rng), ang(rng)}, LossModel::lossless());
    EXPECT_LT(max_dev(m.adjoint() * m, Eigen::Matrix2cd::Identity()), 1e-12);
  }
}

TEST(NodeTransfer, PhiEntersAsInputPhaseScreen) {
  const double th = 1.1;
  const Mat2 base = node_transfer({th, 0.0}, LossModel::lossless());
  const Mat2 with = node_transfer({th, 0.7}, LossModel::lossless());
  Eigen::Matrix2cd screen = Eigen::Matrix2cd::Identity();
  screen(0, 0) = std::polar(1.0, 0.7);
  EXPECT_LT(max_dev(with, base * screen), 1e-14);
}

TEST(Voa, Endpoints) {
  const VoaSetting full = voa_transfer(1.0, LossModel::lossless());
  EXPECT_NEAR(std::abs(full.transfer), 1.0, 1e-14);
  EXPECT_NEAR(full.settings.theta(), M_PI, 1e-14);
  const VoaSetting off = voa_transfer(0.0, LossModel::lossless());
  EXPECT_NEAR(std::abs(off.transfer), 0.0, 1e-14);
  EXPECT_NEAR(off.settings.theta(), 0.0, 1e-14);
  EXPECT_THROW(voa_transfer(1.01, LossModel::lossless()), DomainError);
  EXPECT_THROW(voa_transfer(-0.01, LossModel::lossless()), DomainError);
}

TEST(Voa, ConnectedPortOfNode) {
  const LossModel loss = node_loss(1.0);
  const VoaSetting v = voa_transfer(0.5, loss);
  EXPECT_NEAR(std::abs(v.transfer), std::pow(10.0, -0.05) * 0.5, 1e-14);
  const Eigen::Matrix2cd m =
      oracle::mzi(2 * std::asin(0.5), v.settings.phi(), std::pow(10.0, -0.05));
  EXPECT_NEAR(std::abs(v.transfer - m(0, 0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(voa_port_transfer(v.settings, loss) - v.transfer), 0.0, 1e-15);
  // Programmed transfer is real and positive.
  EXPECT_NEAR(v.transfer.imag(), 0.0, 1e-14);
  EXPECT_GT(v.transfer.real(), 0.0);
}

TEST(Voa, Monotone) {
  double last = -1.0;
  for (int k = 0; k <= 100; ++k) {
    const double a = std::abs(voa_transfer(k / 100.0, node_loss(0.7)).transfer);
    EXPECT_GT(a, last);
    last = a;
  }
}

TEST(XbarNode, Values) {
  EXPECT_NEAR(std::abs(xbar_node_transfer(1.0, 0.0, LossModel::lossless()) - Complex(1, 0)), 0.0,
              1e-15);
  EXPECT_NEAR(std::abs(xbar_node_transfer(0.7, M_PI / 2, LossModel::lossless()) - Complex(0, 0.7)),
              0.0, 1e-15);
  EXPECT_NEAR(xbar_node_transfer(1.0, 0.0, node_loss(2.0)).real(), 0.7943282347242815, 1e-12);
  EXPECT_THROW(xbar_node_transfer(1.5, 0.0, LossModel::lossless()), DomainError);
  EXPECT_THROW(xbar_node_transfer(-0.1, 0.0, LossModel::lossless()), DomainError);
}

TEST(PerturbPhases, ZeroSigmaIsIdentity) {
  RandomStream s(1);
  const NodeSettings in(1.2, 3.4);
  EXPECT_EQ(perturb_phases(in, 0.0, s), in);
  EXPECT_THROW(perturb_phases(in, -0.1, s), DomainError);
}

TEST(PerturbPhases, Reproducible) {
  RandomStream a(77);
  RandomStream b(77);
  const NodeSettings in(1.0, 2.0);
  EXPECT_EQ(perturb_phases(in, 0.1, a), perturb_phases(in, 0.1, b));
}

TEST(PerturbPhases, SampleStd) {
  RandomStream s(5);
  const int draws = 100000;
  double sum = 0.0;
  double sq = 0.0;
  const NodeSettings in(M_PI, M_PI);
  for (int k = 0; k < draws; ++k) {
    const double d = perturb_phases(in, 0.1, s).theta() - M_PI;
    sum += d;
    sq += d * d;
  }
  const double mean = sum / draws;
  const double sd = std::sqrt((sq - draws * mean * mean) / (draws - 1));
  EXPECT_GE(sd, 0.099);
  EXPECT_LE(sd, 0.101);
}

TEST(PerturbedXbarWeight, ConsistentWithMzi) {
  // Attenuator MZI at theta = 2 asin|w| with its phase compensated, then a
  // phase shifter: a theta error must act like the MZI's connected port.
  const Complex w = std::polar(0.6, 0.9);
  const PhaseOffset off{0.13, -0.05};
  const VoaSetting v = voa_transfer(std::abs(w), LossModel::lossless());
  const NodeSettings shifted(v.settings.theta() + off.dtheta, v.settings.phi());
  const Complex expected =
      voa_port_transfer(shifted, LossModel::lossless()) * std::polar(1.0, std::arg(w) + off.dphi);
  EXPECT_NEAR(std::abs(perturbed_xbar_weight(w, off) - expected), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(perturbed_xbar_weight(w, {}) - w), 0.0, 1e-15);
}
