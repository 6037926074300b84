#include "xbarsim/xbar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "xbarsim/errors.hpp"
#include "xbarsim/rng.hpp"

namespace xbarsim {
namespace {

using Storage = ComplexMatrix::Storage;

void check_device_shape(const XbarDevice& device) {
  const auto& topo = device.topology;
  if (device.weights.rows() != topo.n || device.weights.cols() != topo.m ||
      static_cast<int>(device.xi.size()) != topo.m ||
      static_cast<int>(device.t.size()) != topo.m - 1) {
    throw DimensionError("crossbar device fields disagree with its topology");
  }
}

}  // namespace

XbarTopology build_topology(int n, int m) {
  if (n < 2) throw DomainError("crossbar needs n >= 2, got " + std::to_string(n));
  if (m < 1) throw DomainError("crossbar needs m >= 1, got " + std::to_string(m));
  XbarTopology topo;
  topo.n = n;
  topo.m = m;
  topo.n_f = static_cast<int>(std::bit_ceil(static_cast<unsigned>(n)));
  topo.log2_nf = std::countr_zero(static_cast<unsigned>(topo.n_f));
  if (topo.n_f >= 4) {
    topo.m_fwd = std::max(1, topo.log2_nf - 2);
    topo.recomb_crossings = topo.n_f / 2 - 1;
  }
  return topo;
}

SplitterDesign design_splitters(const XbarTopology& topology, const LossModel& loss) {
  loss.validate();
  const int m = topology.m;
  SplitterDesign d;
  d.xi.assign(static_cast<size_t>(m), 1.0);
  d.t.assign(static_cast<size_t>(m - 1), 0.0);
  if (m == 1) return d;

  // Columns M-1 and M: the last column skips the recombination crossings.
  const double lx = loss.l_x();
  const double xi2_last =
      1.0 / (1.0 + std::pow(lx, 2.0 * (topology.recomb_crossings - topology.m_fwd)));
  d.xi[static_cast<size_t>(m - 2)] = std::sqrt(xi2_last);

  // Successive columns differ by one coupler and one forwarding section:
  // xi_c = t_c xi_{c+1} l_xi l_x^{m_fwd}.
  const double step = loss.l_xi() * std::pow(lx, topology.m_fwd);
  for (int c = m - 3; c >= 0; --c) {
    const double k = d.xi[static_cast<size_t>(c + 1)] * step;
    d.xi[static_cast<size_t>(c)] = std::sqrt(k * k / (1.0 + k * k));
  }
  for (int c = 0; c < m - 1; ++c) {
    const double xi = d.xi[static_cast<size_t>(c)];
    d.t[static_cast<size_t>(c)] = std::sqrt(1.0 - xi * xi);
  }
  return d;
}

SplitterDesign uniform_splitters(const XbarTopology& topology, const LossModel& loss) {
  SplitterDesign d = design_splitters(topology, loss);
  for (int c = 1; c < topology.m - 1; ++c) {
    d.xi[static_cast<size_t>(c)] = d.xi[0];
    d.t[static_cast<size_t>(c)] = d.t[0];
  }
  return d;
}

double passive_loss(int c, const XbarTopology& topology, const LossModel& loss) {
  if (c < 1 || c > topology.m) {
    throw DomainError("column index " + std::to_string(c) + " outside [1, " +
                      std::to_string(topology.m) + "]");
  }
  const double couplers = std::pow(loss.l_coup(), 2.0 * topology.log2_nf);
  if (c < topology.m) {
    return couplers * std::pow(loss.l_xi(), c) *
           std::pow(loss.l_x(), topology.recomb_crossings + (c - 1) * topology.m_fwd);
  }
  const int m = topology.m;
  return couplers * std::pow(loss.l_xi(), m - 1) *
         std::pow(loss.l_x(), (m - 1) * topology.m_fwd);
}

TransmissionMatrix transmission_matrix(const XbarDevice& device) {
  check_device_shape(device);
  const auto& topo = device.topology;
  const double common = device.loss.alpha() * device.loss.t_node() / topo.n_f;
  TransmissionMatrix tm;
  tm.p.reserve(static_cast<size_t>(topo.m));
  double through = 1.0;  // prod_{q<c} t_q, empty product = 1
  for (int c = 1; c <= topo.m; ++c) {
    tm.p.push_back(common * passive_loss(c, topo, device.loss) * through *
                   device.xi[static_cast<size_t>(c - 1)]);
    if (c < topo.m) through *= device.t[static_cast<size_t>(c - 1)];
  }
  return tm;
}

XbarDevice build_xbar(const ComplexMatrix& y, const LossModel& loss, XbarMode mode) {
  loss.validate();
  const double peak = y.max_abs();
  if (peak == 0.0) throw DomainError("cannot map the zero matrix onto a crossbar");
  XbarDevice dev;
  dev.topology = build_topology(static_cast<int>(y.rows()), static_cast<int>(y.cols()));
  dev.weights = y.scaled(1.0 / peak);
  SplitterDesign s = mode == XbarMode::balanced ? design_splitters(dev.topology, loss)
                                                : uniform_splitters(dev.topology, loss);
  dev.xi = std::move(s.xi);
  dev.t = std::move(s.t);
  dev.loss = loss;
  dev.mode = mode;
  dev.programming_steps = 1;
  return dev;
}

std::vector<Complex> evaluate_xbar(const XbarDevice& device, std::span<const Complex> x) {
  check_device_shape(device);
  const auto& topo = device.topology;
  if (static_cast<int>(x.size()) != topo.n) {
    throw DimensionError("crossbar expects " + std::to_string(topo.n) +
                         " inputs, got " + std::to_string(x.size()));
  }
  for (Complex v : x) {
    if (!(std::abs(v) <= 1.0 + 1e-12)) {
      throw DomainError("modulator input outside the unit disk");
    }
  }
  // Column field = alpha L_c (1/N_f) (prod t) xi_c sum_r x_r * node(r, c);
  // the node transfer carries T_node.
  const LossModel& loss = device.loss;
  std::vector<Complex> out(static_cast<size_t>(topo.m));
  double through = 1.0;
  for (int c = 0; c < topo.m; ++c) {
    Complex acc{};
    for (int r = 0; r < topo.n; ++r) {
      const Complex w = device.weights(r, c);
      acc += x[static_cast<size_t>(r)] *
             xbar_node_transfer(std::min(std::abs(w), 1.0), std::arg(w), loss);
    }
    const double column = loss.alpha() * passive_loss(c + 1, topo, loss) / topo.n_f *
                          through * device.xi[static_cast<size_t>(c)];
    out[static_cast<size_t>(c)] = column * acc;
    if (c + 1 < topo.m) through *= device.t[static_cast<size_t>(c)];
  }
  return out;
}

ComplexMatrix realized_matrix(const XbarDevice& device) {
  const TransmissionMatrix tm = transmission_matrix(device);
  const Eigen::Map<const Eigen::VectorXd> p(tm.p.data(), static_cast<Eigen::Index>(tm.p.size()));
  return ComplexMatrix(Storage(p.cast<Complex>().asDiagonal() * device.weights.data().transpose()));
}

double xbar_insertion_loss(const XbarTopology& topology, const LossModel& loss) {
  return xbar_insertion_loss(topology, loss, loss.il_node_db());
}

double xbar_insertion_loss(const XbarTopology& topology, const LossModel& loss,
                           double il_node_db) {
  if (!(il_node_db >= 0.0)) throw DomainError("node loss must be >= 0");
  const SplitterDesign s = design_splitters(topology, loss);
  const double padding = 20.0 * std::log10(static_cast<double>(topology.n_f) / topology.n);
  double il = il_node_db + 2.0 * topology.log2_nf * loss.il_coup_db + padding;
  if (topology.m > 1) {
    il += loss.il_xi_db + topology.recomb_crossings * loss.il_x_db -
          10.0 * std::log10(s.xi[0] * s.xi[0]);
  }
  return il;
}

double simulated_xbar_insertion_loss(const XbarTopology& topology, const LossModel& loss) {
  LossModel transparent_mod = loss;
  transparent_mod.alpha_db = 0.0;
  const ComplexMatrix ones(Storage::Ones(topology.n, topology.m));
  const XbarDevice dev = build_xbar(ones, transparent_mod, XbarMode::balanced);
  const std::vector<Complex> x(static_cast<size_t>(topology.n), Complex{1.0, 0.0});
  const std::vector<Complex> out = evaluate_xbar(dev, x);
  return -10.0 * std::log10(std::norm(out.front()));
}

std::vector<double> restoration_matrix(const XbarDevice& device) {
  const TransmissionMatrix tm = transmission_matrix(device);
  std::vector<double> diag;
  diag.reserve(tm.p.size());
  for (size_t c = 0; c < tm.p.size(); ++c) {
    if (!(tm.p[c] > 0.0)) {
      throw DegenerateDeviceError("column " + std::to_string(c + 1) +
                                  " has zero transmission; cannot restore");
    }
    diag.push_back(1.0 / tm.p[c]);
  }
  return diag;
}

ComplexMatrix restored_matrix(const XbarDevice& device) {
  const std::vector<double> r = restoration_matrix(device);
  const Eigen::Map<const Eigen::VectorXd> d(r.data(), static_cast<Eigen::Index>(r.size()));
  return ComplexMatrix(Storage(d.cast<Complex>().asDiagonal() * realized_matrix(device).data()));
}

XbarDevice perturb_xbar(const XbarDevice& device, PhaseErrorModel model, double sigma,
                        RandomStream& stream) {
  PhaseOffset shared;
  if (model == PhaseErrorModel::shared_per_trial) {
    shared = draw_phase_offset(sigma, stream);
  }
  Storage w = device.weights.data();
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      const PhaseOffset o = model == PhaseErrorModel::shared_per_trial
                                ? shared
                                : draw_phase_offset(sigma, stream);
      w(r, c) = perturbed_xbar_weight(w(r, c), o);
    }
  }
  XbarDevice out = device;
  out.weights = ComplexMatrix(std::move(w));
  return out;
}

XbarDevice perturb_xbar_node(const XbarDevice& device, int row, int col,
                             const PhaseOffset& offset) {
  if (row < 0 || row >= device.weights.rows() || col < 0 || col >= device.weights.cols()) {
    throw DomainError("crossbar node index out of range");
  }
  Storage w = device.weights.data();
  w(row, col) = perturbed_xbar_weight(w(row, col), offset);
  XbarDevice out = device;
  out.weights = ComplexMatrix(std::move(w));
  return out;
}

}  // namespace xbarsim
