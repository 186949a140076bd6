#ifndef AMOEBA_SRC_STEPPER_HPP
#define AMOEBA_SRC_STEPPER_HPP

#include "amoeba/linsolve.hpp"
#include "amoeba/physarum.hpp"

namespace amoeba::detail {

// Throws UnreachableError unless every node with demand is reachable from
// the source.
void require_reachable(const DirectedGraph& graph, const SolveMode& mode);

// In-place iteration that keeps the sparse factorization's symbolic
// analysis across steps.
class Stepper {
 public:
  explicit Stepper(const SolverConfig& config);

  void advance(const DirectedGraph& graph, PhysarumState& state, const Eigen::VectorXd& rhs, NodeId ground);

 private:
  SolverConfig config_;
  LaplacianSolver<double> solver_;
};

}  // namespace amoeba::detail

#endif  // AMOEBA_SRC_STEPPER_HPP
