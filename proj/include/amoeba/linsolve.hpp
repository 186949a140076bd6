#ifndef AMOEBA_LINSOLVE_HPP
#define AMOEBA_LINSOLVE_HPP

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "amoeba/errors.hpp"
#include "amoeba/graph.hpp"

namespace amoeba {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Weighted graph Laplacian with conductance D_ij / L_ij + D_ji / L_ji on
// every node pair, restricted to the nodes that share a conducting
// component with `ground`, with the ground row and column removed.
//
//   sum_j (D_ij / L_ij + D_ji / L_ji) (p_i - p_j) = rhs_i
template <typename Scalar = double>
struct GroundedSystem {
  using Matrix = Eigen::SparseMatrix<Scalar, Eigen::ColMajor, int>;

  Eigen::Index dimension = 0;  // node count of the full system
  NodeId ground = 0;
  Matrix matrix;               // reduced, symmetric, both triangles stored
  Vector<Scalar> rhs;          // reduced
  Vector<Scalar> full_rhs;
  std::vector<Eigen::Index> reduced_index;  // full id -> reduced row, -1 if eliminated
  std::vector<NodeId> floating;             // zero-demand nodes cut off from the ground

  Eigen::Index reduced_size() const { return matrix.rows(); }
};

template <typename Scalar = double>
struct AssemblyOptions {
  Scalar zero_threshold = Scalar(1e-12);  // conductivities below this are not assembled
};

template <typename Scalar = double>
struct SolveOptions {
  Scalar tolerance = Scalar(1e-10);  // relative residual ||Ax - b|| / ||b||
  Eigen::Index direct_limit = 2000;  // largest reduced size factorized directly
  int max_iterations = 0;            // iterative route; 0 means 10 * size
  int refinement_steps = 4;
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

template <typename Scalar>
Scalar relative_residual(const typename GroundedSystem<Scalar>::Matrix& a, const Vector<Scalar>& x,
                         const Vector<Scalar>& b) {
  const Scalar bn = b.norm();
  const Scalar rn = (a * x - b).norm();
  return bn > Scalar(0) ? rn / bn : rn;
}

}  // namespace detail

template <typename Scalar>
GroundedSystem<Scalar> assemble(const DirectedGraph& graph, const Vector<Scalar>& conductivity,
                                const Vector<Scalar>& rhs, NodeId ground,
                                const AssemblyOptions<Scalar>& options = {}) {
  const auto n = static_cast<std::size_t>(graph.node_count());
  if (static_cast<std::size_t>(conductivity.size()) != graph.edge_count()) {
    throw ParameterError("assemble: conductivity must have one entry per edge");
  }
  if (static_cast<std::size_t>(rhs.size()) != n) throw ParameterError("assemble: rhs must have one entry per node");
  if (ground < 0 || static_cast<std::size_t>(ground) >= n) throw ParameterError("assemble: ground is not a node");

  auto conducts = [&](std::size_t e) {
    const Scalar d = conductivity[static_cast<Eigen::Index>(e)];
    if (d < Scalar(0)) throw ParameterError("assemble: negative conductivity on edge " + std::to_string(e));
    return d >= options.zero_threshold && d > Scalar(0);
  };

  detail::DisjointSets sets(n);
  const auto& edges = graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (conducts(e)) sets.unite(static_cast<std::size_t>(edges[e].tail), static_cast<std::size_t>(edges[e].head));
  }

  GroundedSystem<Scalar> sys;
  sys.dimension = static_cast<Eigen::Index>(n);
  sys.ground = ground;
  sys.full_rhs = rhs;
  sys.reduced_index.assign(n, -1);

  const std::size_t ground_root = sets.find(static_cast<std::size_t>(ground));
  std::vector<NodeId> stranded;
  Eigen::Index next = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (sets.find(v) != ground_root) {
      if (rhs[static_cast<Eigen::Index>(v)] != Scalar(0)) {
        stranded.push_back(static_cast<NodeId>(v));
      } else {
        sys.floating.push_back(static_cast<NodeId>(v));
      }
      continue;
    }
    if (v != static_cast<std::size_t>(ground)) sys.reduced_index[v] = next++;
  }
  if (!stranded.empty()) {
    // Report the whole component around the first stranded node.
    const std::size_t root = sets.find(static_cast<std::size_t>(stranded.front()));
    std::vector<NodeId> component;
    for (std::size_t v = 0; v < n; ++v) {
      if (sets.find(v) == root) component.push_back(static_cast<NodeId>(v));
    }
    throw DisconnectedSystemError("pressure system is disconnected: component {" + format_node_list(component) +
                                      "} carries demand but has no conducting path to ground node " +
                                      std::to_string(ground),
                                  std::move(component));
  }

  std::vector<Eigen::Triplet<Scalar, int>> triplets;
  triplets.reserve(edges.size() * 4);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!conducts(e)) continue;
    const Scalar w = conductivity[static_cast<Eigen::Index>(e)] / static_cast<Scalar>(edges[e].length);
    const auto a = sys.reduced_index[static_cast<std::size_t>(edges[e].tail)];
    const auto b = sys.reduced_index[static_cast<std::size_t>(edges[e].head)];
    if (a >= 0) triplets.emplace_back(static_cast<int>(a), static_cast<int>(a), w);
    if (b >= 0) triplets.emplace_back(static_cast<int>(b), static_cast<int>(b), w);
    if (a >= 0 && b >= 0) {
      triplets.emplace_back(static_cast<int>(a), static_cast<int>(b), -w);
      triplets.emplace_back(static_cast<int>(b), static_cast<int>(a), -w);
    }
  }
  sys.matrix.resize(next, next);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();

  sys.rhs.resize(next);
  for (std::size_t v = 0; v < n; ++v) {
    if (sys.reduced_index[v] >= 0) sys.rhs[sys.reduced_index[v]] = rhs[static_cast<Eigen::Index>(v)];
  }
  return sys;
}

// Reusable solver for a sequence of systems; the symbolic analysis is kept
// while the sparsity pattern does not change.
template <typename Scalar = double>
class LaplacianSolver {
 public:
  using Matrix = typename GroundedSystem<Scalar>::Matrix;

  explicit LaplacianSolver(SolveOptions<Scalar> options = {}) : options_(options) {}

  // Full-length pressure vector; ground and floating nodes are 0.
  Vector<Scalar> solve(const GroundedSystem<Scalar>& sys) {
    Vector<Scalar> full = Vector<Scalar>::Zero(sys.dimension);
    const Eigen::Index size = sys.reduced_size();
    last_residual_ = Scalar(0);
    if (size == 0 || sys.rhs.isZero(Scalar(0))) return full;

    const Vector<Scalar> x = size <= options_.direct_limit ? solve_direct(sys) : solve_iterative(sys);
    for (std::size_t v = 0; v < sys.reduced_index.size(); ++v) {
      if (sys.reduced_index[v] >= 0) full[static_cast<Eigen::Index>(v)] = x[sys.reduced_index[v]];
    }
    return full;
  }

  Scalar last_residual() const { return last_residual_; }

 private:
  bool same_pattern(const Matrix& a) const {
    if (!pattern_ || pattern_outer_.size() != static_cast<std::size_t>(a.outerSize() + 1)) return false;
    if (!std::equal(pattern_outer_.begin(), pattern_outer_.end(), a.outerIndexPtr())) return false;
    return pattern_inner_.size() == static_cast<std::size_t>(a.nonZeros()) &&
           std::equal(pattern_inner_.begin(), pattern_inner_.end(), a.innerIndexPtr());
  }

  Vector<Scalar> solve_direct(const GroundedSystem<Scalar>& sys) {
    const Matrix& a = sys.matrix;
    if (!same_pattern(a)) {
      ldlt_.analyzePattern(a);
      pattern_outer_.assign(a.outerIndexPtr(), a.outerIndexPtr() + a.outerSize() + 1);
      pattern_inner_.assign(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros());
      pattern_ = true;
    }
    ldlt_.factorize(a);
    if (ldlt_.info() != Eigen::Success) {
      pattern_ = false;
      throw SolverFailure("sparse factorization of the pressure system failed", -1.0);
    }
    Vector<Scalar> x = ldlt_.solve(sys.rhs);
    last_residual_ = detail::relative_residual<Scalar>(a, x, sys.rhs);
    for (int k = 0; k < options_.refinement_steps && !(last_residual_ <= options_.tolerance); ++k) {
      x += ldlt_.solve(sys.rhs - a * x);
      last_residual_ = detail::relative_residual<Scalar>(a, x, sys.rhs);
    }
    if (!(last_residual_ <= options_.tolerance)) {
      throw SolverFailure("direct solve reached relative residual " + std::to_string(double(last_residual_)) +
                              " above tolerance " + std::to_string(double(options_.tolerance)),
                          double(last_residual_));
    }
    return x;
  }

  Vector<Scalar> solve_iterative(const GroundedSystem<Scalar>& sys) {
    Eigen::ConjugateGradient<Matrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<Scalar>> cg;
    cg.setTolerance(options_.tolerance / Scalar(2));
    cg.setMaxIterations(options_.max_iterations > 0 ? options_.max_iterations
                                                    : static_cast<int>(10 * sys.reduced_size()));
    cg.compute(sys.matrix);
    Vector<Scalar> x = cg.solve(sys.rhs);
    last_residual_ = detail::relative_residual<Scalar>(sys.matrix, x, sys.rhs);
    if (!(last_residual_ <= options_.tolerance)) {
      throw SolverFailure("conjugate gradient stopped after " + std::to_string(cg.iterations()) +
                              " iterations at relative residual " + std::to_string(double(last_residual_)),
                          double(last_residual_));
    }
    return x;
  }

  SolveOptions<Scalar> options_;
  Eigen::SimplicialLDLT<Matrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
  bool pattern_ = false;
  std::vector<int> pattern_outer_;
  std::vector<int> pattern_inner_;
  Scalar last_residual_ = Scalar(0);
};

template <typename Scalar>
Vector<Scalar> solve(const GroundedSystem<Scalar>& sys, const SolveOptions<Scalar>& options = {}) {
  LaplacianSolver<Scalar> solver(options);
  return solver.solve(sys);
}

// MatrixMarket coordinate dump of the reduced matrix (lower triangle) with
// the reduced right-hand side appended as comment lines.
template <typename Scalar>
void write_matrix_market(std::ostream& out, const GroundedSystem<Scalar>& sys) {
  using Matrix = typename GroundedSystem<Scalar>::Matrix;
  const Matrix& a = sys.matrix;
  Eigen::Index lower = 0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (typename Matrix::InnerIterator it(a, k); it; ++it) lower += it.row() >= it.col();
  }
  const auto old_precision = out.precision(17);
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << "% dimension " << sys.dimension << " ground " << sys.ground << '\n';
  out << a.rows() << ' ' << a.cols() << ' ' << lower << '\n';
  for (int k = 0; k < a.outerSize(); ++k) {
    for (typename Matrix::InnerIterator it(a, k); it; ++it) {
      if (it.row() >= it.col()) out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
  for (Eigen::Index i = 0; i < sys.rhs.size(); ++i) out << "% rhs " << i + 1 << ' ' << sys.rhs[i] << '\n';
  out.precision(old_precision);
}

}  // namespace amoeba

#endif  // AMOEBA_LINSOLVE_HPP
