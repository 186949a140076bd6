#ifndef AMOEBA_ERRORS_HPP
#define AMOEBA_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace amoeba {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;

// Bad argument: out-of-range parameter, unknown edge id, malformed file.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The grounded system has nodes with nonzero demand that no conducting
// path links to the ground.
class DisconnectedSystemError : public std::runtime_error {
 public:
  DisconnectedSystemError(const std::string& what, std::vector<NodeId> nodes)
      : std::runtime_error(what), nodes_(std::move(nodes)) {}
  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }

 private:
  std::vector<NodeId> nodes_;
};

// The linear solver could not reach the requested residual.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Nodes that must receive flow are not reachable from the source.
class UnreachableError : public std::runtime_error {
 public:
  UnreachableError(const std::string& what, std::vector<NodeId> nodes)
      : std::runtime_error(what), nodes_(std::move(nodes)) {}
  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }

 private:
  std::vector<NodeId> nodes_;
};

// Renders up to `limit` ids as "a, b, c, ...".
std::string format_node_list(const std::vector<NodeId>& nodes, std::size_t limit = 10);

}  // namespace amoeba

#endif  // AMOEBA_ERRORS_HPP
