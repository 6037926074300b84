#include "xbarsim/clements.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "xbarsim/errors.hpp"
#include "xbarsim/rng.hpp"

namespace xbarsim {
namespace {

using Storage = ComplexMatrix::Storage;
constexpr Complex kI{0.0, 1.0};

struct RawNode {
  int row;
  double theta;
  double phi;
};

// Entries below this are treated as already nulled; unitary inputs have
// magnitudes <= 1, so the threshold is absolute.
constexpr double kNullTol = 1e-13;

// Mixing angle 2 atan2(y, x), or the bar state when both entries vanish so
// that idle nodes pass light straight through.
double mixing_angle(double y, double x) {
  if (y <= kNullTol && x <= kNullTol) return std::numbers::pi;
  return 2.0 * std::atan2(y, x);
}

double phase_of_ratio(Complex num, Complex den) {
  if (num == Complex{} || den == Complex{}) return 0.0;
  return std::arg(num / den);
}

void apply_node_rows(Storage& state, int row, const Mat2& m) {
  state.middleRows(row, 2) = (m * state.middleRows(row, 2)).eval();
}

void apply_mesh(const ClementsMesh& mesh, const LossModel& loss, Storage& state) {
  for (const MeshNode& node : mesh.nodes) {
    apply_node_rows(state, node.row, node_transfer(node.settings, loss));
  }
  for (int i = 0; i < mesh.n; ++i) {
    state.row(i) *= std::exp(kI * mesh.output_phases[static_cast<size_t>(i)]);
  }
}

void check_n(int n) {
  if (n < 2) throw DomainError("architecture size must be >= 2, got " + std::to_string(n));
}

}  // namespace

int ClementsMesh::depth() const {
  int d = 0;
  for (const MeshNode& node : nodes) d = std::max(d, node.layer + 1);
  return d;
}

ClementsMesh clements_decompose(const ComplexMatrix& u, double tol) {
  if (!u.is_square()) throw DimensionError("clements_decompose expects a square matrix");
  const double residual = unitarity_residual(u);
  if (residual > tol) {
    std::ostringstream msg;
    msg << "clements_decompose: input is not unitary (residual " << residual
        << " > " << tol << ")";
    throw DomainError(msg.str());
  }

  const int n = static_cast<int>(u.rows());
  Storage w = u.data();
  std::vector<RawNode> right;
  std::vector<RawNode> left;

  for (int i = 0; i < n - 1; ++i) {
    if (i % 2 == 0) {
      // Null w(n-1-j, i-j) by mixing columns (i-j, i-j+1) from the right.
      for (int j = 0; j <= i; ++j) {
        const int r = n - 1 - j;
        const int k = i - j;
        const Complex a = w(r, k);
        const Complex b = w(r, k + 1);
        const double theta = mixing_angle(std::abs(b), std::abs(a));
        const double phi = phase_of_ratio(-a, b);
        const Mat2 m = node_transfer(NodeSettings(theta, phi), LossModel::lossless());
        w.middleCols(k, 2) = (w.middleCols(k, 2) * m.adjoint()).eval();
        right.push_back({k, theta, phi});
      }
    } else {
      // Null w(n-1-i+j, j) by mixing rows (k, k+1) from the left.
      for (int j = 0; j <= i; ++j) {
        const int r = n - 1 - i + j;
        const int k = r - 1;
        const Complex a = w(k, j);
        const Complex b = w(r, j);
        const double theta = mixing_angle(std::abs(a), std::abs(b));
        const double phi = phase_of_ratio(b, a);
        const Mat2 m = node_transfer(NodeSettings(theta, phi), LossModel::lossless());
        apply_node_rows(w, k, m);
        left.push_back({k, theta, phi});
      }
    }
  }

  // w is now diagonal: u = L_1^-1 ... L_k^-1 D R_m ... R_1. Each
  // M(theta, phi)^dagger diag(d1, d2) equals diag(d1', d2') M(theta, phi').
  std::vector<Complex> diag(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) diag[static_cast<size_t>(i)] = w(i, i);

  std::vector<RawNode> ordered = right;
  for (auto it = left.rbegin(); it != left.rend(); ++it) {
    const auto k = static_cast<size_t>(it->row);
    const Complex d1 = diag[k];
    const Complex d2 = diag[k + 1];
    const Complex rot = -std::exp(-kI * it->theta);
    diag[k] = rot * std::exp(-kI * it->phi) * d2;
    diag[k + 1] = rot * d2;
    ordered.push_back({it->row, it->theta, phase_of_ratio(d1, d2)});
  }

  ClementsMesh mesh;
  mesh.n = n;
  mesh.nodes.reserve(ordered.size());
  std::vector<int> last(static_cast<size_t>(n), -1);
  for (const RawNode& raw : ordered) {
    const auto k = static_cast<size_t>(raw.row);
    const int layer = std::max(last[k], last[k + 1]) + 1;
    last[k] = last[k + 1] = layer;
    mesh.nodes.push_back({raw.row, layer, NodeSettings(raw.theta, raw.phi)});
  }
  mesh.output_phases.reserve(diag.size());
  for (Complex d : diag) mesh.output_phases.push_back(wrap_angle(std::arg(d)));
  return mesh;
}

ComplexMatrix reconstruct(const ClementsMesh& mesh, const LossModel& loss) {
  Storage state = Storage::Identity(mesh.n, mesh.n);
  apply_mesh(mesh, loss, state);
  return ComplexMatrix(std::move(state));
}

int ClementsDevice::node_count() const {
  return static_cast<int>(v_dagger_mesh.nodes.size() + sigma_settings.size() +
                          u_mesh.nodes.size());
}

ClementsDevice build_svd_clements(const ComplexMatrix& d, const LossModel& loss) {
  if (!d.is_square()) throw DimensionError("build_svd_clements expects a square matrix");
  const int n = static_cast<int>(d.rows());
  check_n(n);
  loss.validate();
  if (d.max_abs() == 0.0) throw DomainError("cannot compile the zero matrix");

  const SvdFactors f = svd_factorize(d);
  const double sigma_max = f.sigma.front();

  ClementsDevice dev;
  dev.n = n;
  dev.loss = loss;
  dev.v_dagger_mesh = clements_decompose(f.v_dagger);
  dev.u_mesh = clements_decompose(f.u);
  dev.sigma_settings.reserve(f.sigma.size());
  for (double s : f.sigma) {
    const double amplitude = std::clamp(s / sigma_max, 0.0, 1.0);
    dev.sigma_settings.push_back(voa_transfer(amplitude, loss).settings);
  }
  dev.programming_steps = n * (n - 1) / 2;
  return dev;
}

ComplexMatrix evaluate_svd_clements(const ClementsDevice& device) {
  const int n = device.n;
  Storage state = Storage::Identity(n, n);
  apply_mesh(device.v_dagger_mesh, device.loss, state);
  for (int i = 0; i < n; ++i) {
    state.row(i) *= voa_port_transfer(device.sigma_settings[static_cast<size_t>(i)],
                                      device.loss);
  }
  apply_mesh(device.u_mesh, device.loss, state);
  state *= 1.0 / std::sqrt(static_cast<double>(n));
  return ComplexMatrix(std::move(state));
}

ClementsDevice perturb_device(const ClementsDevice& device, PhaseErrorModel model,
                              double sigma, RandomStream& stream) {
  ClementsDevice out = device;
  PhaseOffset shared;
  if (model == PhaseErrorModel::shared_per_trial) {
    shared = draw_phase_offset(sigma, stream);
  } else if (!(sigma >= 0.0)) {
    throw DomainError("phase error sigma must be >= 0");
  }
  auto next = [&](const NodeSettings& s) {
    return model == PhaseErrorModel::shared_per_trial ? apply_offset(s, shared)
                                                       : perturb_phases(s, sigma, stream);
  };
  for (MeshNode& node : out.v_dagger_mesh.nodes) node.settings = next(node.settings);
  for (NodeSettings& s : out.sigma_settings) s = next(s);
  for (MeshNode& node : out.u_mesh.nodes) node.settings = next(node.settings);
  return out;
}

double svd_insertion_loss(int n, double il_node_db, PathCase path) {
  check_n(n);
  if (!(il_node_db >= 0.0)) throw DomainError("node loss must be >= 0");
  const SvdArchitectureStats stats = svd_architecture_stats(n);
  const int depth = path == PathCase::best ? stats.best_depth : stats.worst_depth;
  return 10.0 * std::log10(static_cast<double>(n)) + depth * il_node_db;
}

SvdArchitectureStats svd_architecture_stats(int n) {
  check_n(n);
  return SvdArchitectureStats{n * n, 2 * (n / 2) + 1, 2 * n + 1, n * (n - 1) / 2};
}

}  // namespace xbarsim
