#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "xbarsim/errors.hpp"
#include "xbarsim/rng.hpp"
#include "xbarsim/xbar.hpp"

using namespace xbarsim;

namespace {

const LossModel kPassives = LossModel::silicon_passives();

ComplexMatrix from(const Eigen::MatrixXcd& m) { return ComplexMatrix(ComplexMatrix::Storage(m)); }

oracle::XbarLosses oracle_losses(const LossModel& l) {
  return {l.il_coup_db, l.il_ps_db, l.il_xi_db, l.il_x_db, l.alpha_db};
}

double db(double field) { return -20.0 * std::log10(field); }

LossModel random_loss(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return LossModel{0.2 * u(rng), 0.5 * u(rng), 0.3 * u(rng), 0.1 * u(rng), 3.0 * u(rng)};
}

}  // namespace

TEST(Topology, PaddingAndCrossings) {
  EXPECT_EQ(build_topology(8, 8).n_f, 8);
  const XbarTopology t5 = build_topology(5, 5);
  EXPECT_EQ(t5.n_f, 8);
  EXPECT_NEAR(20.0 * std::log10(8.0 / 5.0), 4.0824, 1e-4);
  const XbarTopology t16 = build_topology(16, 16);
  EXPECT_EQ(t16.m_fwd, 2);
  EXPECT_EQ(t16.recomb_crossings, 7);
  const XbarTopology t4 = build_topology(4, 4);
  EXPECT_EQ(t4.m_fwd, 1);
  EXPECT_EQ(t4.recomb_crossings, 1);
  const XbarTopology t2 = build_topology(2, 3);
  EXPECT_EQ(t2.n_f, 2);
  EXPECT_EQ(t2.m_fwd, 0);
  EXPECT_EQ(t2.recomb_crossings, 0);
  EXPECT_THROW(build_topology(1, 4), DomainError);
  EXPECT_THROW(build_topology(4, 0), DomainError);
}

TEST(Topology, Invariants) {
  for (int n = 2; n <= 300; ++n) {
    const XbarTopology t = build_topology(n, 3);
    EXPECT_GE(t.n_f, n);
    EXPECT_LT(t.n_f, 2 * n);
    EXPECT_EQ(t.n_f & (t.n_f - 1), 0);
    EXPECT_LT(20.0 * std::log10(static_cast<double>(t.n_f) / n), 6.021);
    if (t.n_f >= 8) {
      int sum = 1;
      for (int s = 2; s <= t.log2_nf - 1; ++s) sum += 1 << (s - 1);
      EXPECT_EQ(t.recomb_crossings, sum);
      EXPECT_EQ(t.m_fwd, t.log2_nf - 2);
    }
  }
}

TEST(Splitters, LosslessEqualSplit) {
  const SplitterDesign d = design_splitters(build_topology(4, 4), LossModel::lossless());
  const double expected[] = {0.25, 1.0 / 3.0, 0.5, 1.0};
  for (int c = 0; c < 4; ++c) EXPECT_NEAR(d.xi[c] * d.xi[c], expected[c], 1e-15);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(d.xi[c] * d.xi[c] + d.t[c] * d.t[c], 1.0, 1e-15);
}

TEST(Splitters, FourRowBaseCaseIgnoresCrossings) {
  LossModel l = LossModel::lossless();
  l.il_x_db = 0.5;
  const SplitterDesign d = design_splitters(build_topology(4, 6), l);
  EXPECT_NEAR(d.xi[4] * d.xi[4], 0.5, 1e-15);
}

TEST(Splitters, EqualColumnTransmission) {
  for (int n_f : {2, 4, 8, 16}) {
    for (int m = 1; m <= 16; ++m) {
      const XbarTopology topo = build_topology(n_f, m);
      const XbarDevice dev =
          build_xbar(from(Eigen::MatrixXcd::Ones(n_f, m)), kPassives, XbarMode::balanced);
      std::vector<double> p;
      for (int c = 1; c <= m; ++c) {
        p.push_back(oracle::column_factor(c, m, topo.n_f, dev.xi, dev.t, oracle_losses(kPassives)));
      }
      for (int c = 0; c < m; ++c) EXPECT_LT(std::abs(p[c] / p[0] - 1.0), 1e-12) << n_f << " " << m;
      const TransmissionMatrix tm = transmission_matrix(dev);
      for (int c = 0; c < m; ++c) EXPECT_NEAR(tm.p[c], p[c], 1e-15);
    }
  }
}

TEST(PassiveLoss, Bookkeeping) {
  EXPECT_NEAR(passive_loss(3, build_topology(8, 8), LossModel::lossless()), 1.0, 1e-15);
  EXPECT_NEAR(db(passive_loss(1, build_topology(4, 4), kPassives)), 0.36, 1e-12);
  const XbarTopology t8 = build_topology(8, 8);
  const double step = db(passive_loss(8, t8, kPassives)) - db(passive_loss(7, t8, kPassives));
  EXPECT_NEAR(step, -(t8.recomb_crossings - t8.m_fwd) * 0.02, 1e-12);
  EXPECT_THROW(passive_loss(0, t8, kPassives), DomainError);
  EXPECT_THROW(passive_loss(9, t8, kPassives), DomainError);
}

TEST(PassiveLoss, TwoRowsHaveNoCrossings) {
  LossModel l = LossModel::lossless();
  l.il_x_db = 1.0;
  const XbarTopology t = build_topology(2, 4);
  for (int c = 1; c <= 4; ++c) EXPECT_NEAR(passive_loss(c, t, l), 1.0, 1e-15);
}

TEST(Transmission, LosslessFourByFour) {
  const XbarDevice dev = build_xbar(from(Eigen::MatrixXcd::Ones(4, 4)), LossModel::lossless(),
                                    XbarMode::balanced);
  for (double p : transmission_matrix(dev).p) EXPECT_NEAR(p, 0.125, 1e-15);
}

TEST(Transmission, ModulatorScalesAll) {
  LossModel l = kPassives;
  const XbarDevice a = build_xbar(random_target_matrix(5, 1), l, XbarMode::balanced);
  l.alpha_db = 3.0;
  const XbarDevice b = build_xbar(random_target_matrix(5, 1), l, XbarMode::balanced);
  const auto pa = transmission_matrix(a).p;
  const auto pb = transmission_matrix(b).p;
  for (std::size_t c = 0; c < pa.size(); ++c) EXPECT_NEAR(pb[c] / pa[c], std::pow(10.0, -0.15), 1e-14);
}

TEST(Transmission, UniformColumnRatio) {
  const XbarDevice dev = build_xbar(random_target_matrix(8, 2), kPassives, XbarMode::uniform);
  const auto p = transmission_matrix(dev).p;
  const double ratio = dev.t[0] * kPassives.l_xi() * std::pow(kPassives.l_x(), dev.topology.m_fwd);
  for (int c = 1; c < 7; ++c) EXPECT_NEAR(p[c] / p[c - 1], ratio, 1e-14);
  for (int c = 0; c < 7; ++c) EXPECT_DOUBLE_EQ(dev.xi[c], dev.xi[0]);
}

TEST(Evaluate, AllOnesLossless) {
  const XbarDevice dev = build_xbar(from(Eigen::MatrixXcd::Ones(4, 4)), LossModel::lossless(),
                                    XbarMode::balanced);
  const std::vector<Complex> x(4, 1.0);
  for (Complex y : evaluate_xbar(dev, x)) {
    EXPECT_NEAR(std::abs(y - Complex(0.5, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::norm(y), 0.25, 1e-15);
  }
}

TEST(Evaluate, SingleNode) {
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(4, 3);
  w(2, 1) = std::polar(0.8, 0.4);
  const XbarDevice dev = build_xbar(from(w), kPassives, XbarMode::uniform);
  const std::vector<Complex> x{0.3, Complex(0, 0.2), std::polar(0.9, 1.0), 0.5};
  const auto y = evaluate_xbar(dev, x);
  const auto p = transmission_matrix(dev).p;
  EXPECT_EQ(y[0], Complex{});
  EXPECT_EQ(y[2], Complex{});
  EXPECT_NEAR(std::abs(y[1] - p[1] * x[2] * dev.weights(2, 1)), 0.0, 1e-15);
}

TEST(Evaluate, DirectSummationOracle) {
  std::mt19937_64 rng(12);
  const LossModel loss = kPassives.with_node_loss(1.3);
  const Eigen::MatrixXcd y = oracle::ginibre(8, 6, rng);
  const XbarDevice dev = build_xbar(from(y), loss, XbarMode::uniform);
  const double peak = y.cwiseAbs().maxCoeff();
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int k = 0; k < 20; ++k) {
    std::vector<Complex> x(8);
    for (auto& v : x) v = Complex(u(rng), u(rng));
    const auto out = evaluate_xbar(dev, x);
    for (int c = 1; c <= 6; ++c) {
      Complex ref = 0.0;
      const double pc = oracle::column_factor(c, 6, 8, dev.xi, dev.t, oracle_losses(loss));
      for (int r = 0; r < 8; ++r) ref += x[r] * y(r, c - 1) / peak * pc;
      EXPECT_NEAR(std::abs(out[c - 1] - ref), 0.0, 1e-14);
    }
    // Matrix form P^T W^T x.
    const Eigen::Map<const Eigen::VectorXcd> xv(x.data(), 8);
    const Eigen::VectorXcd mf = realized_matrix(dev).data() * xv;
    for (int c = 0; c < 6; ++c) EXPECT_NEAR(std::abs(out[c] - mf(c)), 0.0, 1e-14);
  }
}

TEST(Evaluate, Errors) {
  const XbarDevice dev = build_xbar(ComplexMatrix::identity(4), kPassives, XbarMode::balanced);
  const std::vector<Complex> short_x(3, 0.5);
  EXPECT_THROW(evaluate_xbar(dev, short_x), DimensionError);
  const std::vector<Complex> big{1.5, 0, 0, 0};
  EXPECT_THROW(evaluate_xbar(dev, big), DomainError);
}

TEST(Build, IdentityAndScaling) {
  const XbarDevice dev = build_xbar(ComplexMatrix::identity(4), kPassives, XbarMode::balanced);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) EXPECT_EQ(dev.weights(r, c), r == c ? Complex(1.0) : Complex(0.0));
  EXPECT_EQ(dev.programming_steps, 1);
  const XbarDevice big = build_xbar(ComplexMatrix::identity(3).scaled(3.0), kPassives, XbarMode::balanced);
  EXPECT_NEAR(big.weights.max_abs(), 1.0, 1e-15);
  EXPECT_THROW(build_xbar(ComplexMatrix(3, 3), kPassives, XbarMode::balanced), DomainError);
}

TEST(InsertionLoss, LosslessAndPadding) {
  for (int n : {2, 4, 8, 16, 32})
    EXPECT_NEAR(xbar_insertion_loss(build_topology(n, n), LossModel::lossless()), 10.0 * std::log10(n), 1e-12);
  // Five rows padded to eight: the first coupler splits over the M columns.
  EXPECT_NEAR(xbar_insertion_loss(build_topology(5, 8), LossModel::lossless()),
              10.0 * std::log10(8.0) + 20.0 * std::log10(8.0 / 5.0), 1e-12);
  EXPECT_NEAR(xbar_insertion_loss(build_topology(5, 8), LossModel::lossless()), 13.11, 0.005);
  EXPECT_NEAR(xbar_insertion_loss(build_topology(5, 5), LossModel::lossless()),
              10.0 * std::log10(5.0) + 20.0 * std::log10(8.0 / 5.0), 1e-12);
  for (int m : {5, 8}) {
    EXPECT_NEAR(xbar_insertion_loss(build_topology(5, m), LossModel::lossless()),
                simulated_xbar_insertion_loss(build_topology(5, m), LossModel::lossless()), 1e-9);
  }
}

TEST(InsertionLoss, SiliconPassives) {
  EXPECT_NEAR(xbar_insertion_loss(build_topology(4, 4), kPassives.with_node_loss(2.0)), 8.5, 0.2);
  EXPECT_NEAR(xbar_insertion_loss(build_topology(8, 8), kPassives.with_node_loss(2.0)), 12.0, 0.3);
}

TEST(InsertionLoss, ClosedFormMatchesSimulation) {
  for (int n : {2, 4, 5, 8, 16}) {
    for (double il : {0.0, 0.7, 2.0}) {
      const XbarTopology topo = build_topology(n, n);
      const LossModel l = kPassives.with_node_loss(il);
      EXPECT_NEAR(xbar_insertion_loss(topo, l), simulated_xbar_insertion_loss(topo, l), 1e-9) << n;
    }
  }
}

TEST(InsertionLoss, UnitSlope) {
  for (int n : {4, 8, 13, 32}) {
    const XbarTopology topo = build_topology(n, n);
    for (int k = 0; k < 20; ++k) {
      const double a = xbar_insertion_loss(topo, kPassives, 0.1 * k);
      const double b = xbar_insertion_loss(topo, kPassives, 0.1 * (k + 1));
      EXPECT_NEAR((b - a) / 0.1, 1.0, 1e-9);
    }
  }
}

TEST(Fidelity, BalancedIsLossFree) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 9;
    const ComplexMatrix w = from(oracle::ginibre(n, n, rng));
    const XbarDevice dev = build_xbar(w, random_loss(rng), XbarMode::balanced);
    EXPECT_NEAR(fidelity(realized_matrix(dev), w.transpose()), 1.0, 1e-10);
    const auto r = restoration_matrix(dev);
    for (double v : r) EXPECT_NEAR(v / r[0], 1.0, 1e-12);
  }
}

TEST(Restoration, UniformModeClosedForm) {
  std::mt19937_64 rng(32);
  for (auto [n, m] : {std::pair{4, 3}, std::pair{8, 8}, std::pair{16, 5}, std::pair{3, 2}}) {
    const LossModel l = random_loss(rng);
    const XbarDevice dev = build_xbar(from(oracle::ginibre(n, m, rng)), l, XbarMode::uniform);
    const auto r = restoration_matrix(dev);
    for (int c = 1; c <= m; ++c) {
      const double expected = oracle::uniform_restoration_ratio(c, m, dev.topology.n_f, dev.t[0], oracle_losses(l));
      EXPECT_NEAR(r[c - 1] / r[0], expected, 1e-12 * expected) << n << "x" << m << " c=" << c;
    }
  }
}

TEST(Restoration, RecoversFidelity) {
  std::mt19937_64 rng(33);
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 12;
    const ComplexMatrix w = from(oracle::ginibre(n, n, rng));
    const XbarDevice dev = build_xbar(w, random_loss(rng), XbarMode::uniform);
    EXPECT_NEAR(fidelity(restored_matrix(dev), w.transpose()), 1.0, 1e-10);
  }
}

TEST(Restoration, DegenerateDevice) {
  XbarDevice dev = build_xbar(ComplexMatrix::identity(4), kPassives, XbarMode::balanced);
  dev.xi[1] = 0.0;
  EXPECT_THROW(restoration_matrix(dev), DegenerateDeviceError);
}

TEST(Perturbation, SingleNodeLocality) {
  const XbarDevice dev = build_xbar(random_target_matrix(6, 4), kPassives, XbarMode::balanced);
  const ComplexMatrix before = realized_matrix(dev);
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) {
      const ComplexMatrix after = realized_matrix(perturb_xbar_node(dev, r, c, {0.05, -0.03}));
      int changed = 0;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
          if (after(i, j) != before(i, j)) ++changed;
      EXPECT_EQ(changed, 1);
      EXPECT_NE(after(c, r), before(c, r));
    }
  }
  EXPECT_THROW(perturb_xbar_node(dev, 6, 0, {}), DomainError);
}

TEST(Perturbation, Models) {
  const XbarDevice dev = build_xbar(random_target_matrix(5, 4), LossModel::lossless(), XbarMode::balanced);
  RandomStream s0(0);
  EXPECT_EQ(realized_matrix(perturb_xbar(dev, PhaseErrorModel::independent_per_node, 0.0, s0))
                .max_abs_diff(realized_matrix(dev)),
            0.0);
  RandomStream a(9);
  RandomStream b(9);
  const auto pa = realized_matrix(perturb_xbar(dev, PhaseErrorModel::shared_per_trial, 0.1, a));
  const auto pb = realized_matrix(perturb_xbar(dev, PhaseErrorModel::shared_per_trial, 0.1, b));
  EXPECT_EQ(pa.max_abs_diff(pb), 0.0);
  RandomStream c(1);
  EXPECT_THROW(perturb_xbar(dev, PhaseErrorModel::shared_per_trial, -0.1, c), DomainError);
}
