#pragma once

#include <vector>

#include "xbarsim/linalg.hpp"
#include "xbarsim/mzi.hpp"

namespace xbarsim {

class RandomStream;

/// One MZI of a rectangular mesh acting on modes (row, row + 1).
struct MeshNode {
  int row = 0;    ///< upper mode index, 0-based
  int layer = 0;  ///< optical column, 0-based
  NodeSettings settings;
};

/// Clements rectangular mesh: nodes in propagation order followed by an
/// output phase screen.
struct ClementsMesh {
  int n = 0;
  std::vector<MeshNode> nodes;
  std::vector<double> output_phases;

  /// Number of occupied layers (max layer + 1).
  int depth() const;
};

/// Decomposes a unitary into a rectangular mesh of N(N-1)/2 MZIs.
///
/// Nulls the below-antidiagonal entries alternately from the right and from
/// the left, then commutes the left-hand inverses through the residual phase
/// screen. Layers are assigned as-soon-as-possible, which gives the
/// alternating even/odd pattern of depth <= N. Throws DomainError when the
/// unitarity residual of `u` exceeds `tol`.
ClementsMesh clements_decompose(const ComplexMatrix& u, double tol = 1e-8);

/// Transfer matrix of the mesh; every node carries the scalar T_node of `loss`.
ComplexMatrix reconstruct(const ClementsMesh& mesh,
                          const LossModel& loss = LossModel::lossless());

/// V^dagger mesh -> attenuator column -> U mesh, fed by a 1:N splitter.
struct ClementsDevice {
  int n = 0;
  ClementsMesh v_dagger_mesh;
  std::vector<NodeSettings> sigma_settings;
  ClementsMesh u_mesh;
  LossModel loss;
  int programming_steps = 0;

  /// N^2 MZIs: two meshes plus the attenuator column.
  int node_count() const;
};

/// SVD-factorizes `d`, normalizes the singular values by sigma_max and
/// compiles both unitaries and the attenuator column.
ClementsDevice build_svd_clements(const ComplexMatrix& d, const LossModel& loss);

/// Effective N x N transfer matrix including the 1/sqrt(N) input splitter.
ComplexMatrix evaluate_svd_clements(const ClementsDevice& device);

enum class PhaseErrorModel {
  /// One (dtheta, dphi) pair per trial, applied to every node.
  shared_per_trial,
  /// Independent (dtheta, dphi) per node.
  independent_per_node,
};

/// Copy of `device` with phase errors on every MZI (both meshes and the
/// attenuator column). Output phase screens are left untouched.
ClementsDevice perturb_device(const ClementsDevice& device, PhaseErrorModel model,
                              double sigma, RandomStream& stream);

enum class PathCase { best, worst };

/// Closed-form insertion loss 10 log10(N) + depth * IL_node in dB, with depth
/// 2 floor(N/2) + 1 (best path) or 2N + 1 (worst path).
double svd_insertion_loss(int n, double il_node_db, PathCase path);

struct SvdArchitectureStats {
  int nodes = 0;
  int best_depth = 0;
  int worst_depth = 0;
  int programming_steps = 0;
};

SvdArchitectureStats svd_architecture_stats(int n);

}  // namespace xbarsim
