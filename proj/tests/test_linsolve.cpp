#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "amoeba/linsolve.hpp"
#include "oracles.hpp"

using namespace amoeba;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> xs) {
  VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

std::vector<double> to_std(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// Random connected graph (ring plus extra chords) with random conductivities.
struct RandomSystem {
  DirectedGraph graph;
  VectorXd conductivity;
  VectorXd rhs;
};

RandomSystem random_system(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> length(1.0, 1000.0), cond(1e-3, 1.0), demand(-1.0, 1.0);
  std::vector<Edge> edges;
  std::set<std::pair<NodeId, NodeId>> used;
  for (NodeId v = 0; v < static_cast<NodeId>(n); ++v) {
    const NodeId w = (v + 1) % static_cast<NodeId>(n);
    edges.push_back({v, w, length(rng)});
    used.insert({v, w});
  }
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n) - 1);
  for (std::size_t k = 0; k < 2 * n; ++k) {
    const NodeId a = node(rng), b = node(rng);
    if (a == b || !used.insert({a, b}).second) continue;
    edges.push_back({a, b, length(rng)});
  }
  RandomSystem s{DirectedGraph(n, std::move(edges)), {}, {}};
  s.conductivity.resize(static_cast<Eigen::Index>(s.graph.edge_count()));
  for (Eigen::Index e = 0; e < s.conductivity.size(); ++e) s.conductivity[e] = cond(rng);
  s.rhs.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index v = 0; v < s.rhs.size(); ++v) s.rhs[v] = demand(rng);
  s.rhs.array() -= s.rhs.mean();
  return s;
}

double max_rel_error(const VectorXd& x, const std::vector<double>& ref) {
  double scale = 0.0, err = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    scale = std::max(scale, std::abs(ref[i]));
    err = std::max(err, std::abs(x[static_cast<Eigen::Index>(i)] - ref[i]));
  }
  return err / std::max(scale, 1e-300);
}

}  // namespace

TEST_SUITE("linsolve") {
  TEST_CASE("hand-assembled path system") {
    const DirectedGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    const auto sys = assemble<double>(g, vec({1, 1}), vec({1, 0, -1}), 2);
    REQUIRE(sys.reduced_size() == 2);
    const Eigen::MatrixXd dense(sys.matrix);
    Eigen::MatrixXd expected(2, 2);
    expected << 1, -1, -1, 2;
    CHECK(dense.isApprox(expected));
    CHECK(sys.rhs.isApprox(vec({1, 0})));

    const auto p = solve(sys);
    CHECK(p[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p[2] == 0.0);
  }

  TEST_CASE("zero conductance everywhere is a disconnected system") {
    const DirectedGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK_THROWS_AS(assemble<double>(g, vec({0, 0}), vec({1, 0, -1}), 2), DisconnectedSystemError);
    try {
      assemble<double>(g, vec({0, 1}), vec({1, 0, -1}), 2);
      FAIL("expected DisconnectedSystemError");
    } catch (const DisconnectedSystemError& e) {
      CHECK(e.nodes() == std::vector<NodeId>{0});
    }
  }

  TEST_CASE("antiparallel edges add their conductances") {
    const DirectedGraph g(3, {{0, 1, 2.0}, {1, 0, 2.0}, {1, 2, 1.0}});
    const auto sys = assemble<double>(g, vec({1, 1, 1}), vec({1, 0, -1}), 2);
    const Eigen::MatrixXd dense(sys.matrix);
    CHECK(dense(0, 1) == doctest::Approx(-1.0));
    CHECK(dense(1, 0) == doctest::Approx(-1.0));
  }

  TEST_CASE("homogeneous system") {
    const auto s = random_system(20, 4);
    const auto sys = assemble<double>(s.graph, s.conductivity, VectorXd::Zero(20), 0);
    CHECK(solve(sys).isZero(0.0));
  }

  TEST_CASE("assembled matrices are symmetric Laplacian minors") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto s = random_system(30, seed);
      const auto sys = assemble<double>(s.graph, s.conductivity, s.rhs, 3);
      const Eigen::MatrixXd a(sys.matrix);
      CHECK(a == a.transpose());
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
          if (i != j) CHECK(a(i, j) <= 0.0);
        }
        // Dropping the ground column leaves each row sum >= 0.
        CHECK(a.row(i).sum() >= -1e-12);
      }
    }
  }

  TEST_CASE("agreement with a dense elimination oracle") {
    for (std::size_t n : {5u, 50u, 120u, 200u}) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto s = random_system(n, 100 * n + seed);
        const NodeId ground = static_cast<NodeId>(seed % n);
        const auto sys = assemble<double>(s.graph, s.conductivity, s.rhs, ground);
        const auto p = solve(sys);
        const auto ref = oracle::dense_pressures(s.graph, to_std(s.conductivity), to_std(s.rhs), ground);
        CHECK(max_rel_error(p, ref) <= 1e-8);
        CHECK(p[ground] == 0.0);
      }
    }
  }

  TEST_CASE("residual contract") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto s = random_system(80, seed);
      const auto sys = assemble<double>(s.graph, s.conductivity, s.rhs, 0);
      LaplacianSolver<double> solver;
      const auto p = solver.solve(sys);
      VectorXd x(sys.reduced_size());
      for (std::size_t v = 0; v < sys.reduced_index.size(); ++v) {
        if (sys.reduced_index[v] >= 0) x[sys.reduced_index[v]] = p[static_cast<Eigen::Index>(v)];
      }
      CHECK((sys.matrix * x - sys.rhs).norm() / sys.rhs.norm() <= 1e-10);
      CHECK(solver.last_residual() <= 1e-10);
    }
  }

  TEST_CASE("iterative route agrees with the direct route") {
    const auto s = random_system(150, 77);
    const auto sys = assemble<double>(s.graph, s.conductivity, s.rhs, 0);
    SolveOptions<double> cg;
    cg.direct_limit = 0;
    const auto a = solve(sys);
    const auto b = solve(sys, cg);
    CHECK((a - b).norm() / a.norm() <= 1e-8);
  }

  TEST_CASE("iterative route reports failure with the achieved residual") {
    const auto s = random_system(150, 78);
    const auto sys = assemble<double>(s.graph, s.conductivity, s.rhs, 0);
    SolveOptions<double> cg;
    cg.direct_limit = 0;
    cg.max_iterations = 1;
    try {
      solve(sys, cg);
      FAIL("expected SolverFailure");
    } catch (const SolverFailure& e) {
      CHECK(e.residual() > 1e-10);
    }
  }

  TEST_CASE("choice of ground leaves pressure differences unchanged") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto s = random_system(40, seed + 50);
      const auto p0 = solve(assemble<double>(s.graph, s.conductivity, s.rhs, 0));
      const auto p7 = solve(assemble<double>(s.graph, s.conductivity, s.rhs, 7));
      const VectorXd shifted = p7.array() - p7[0];
      CHECK((shifted - p0).cwiseAbs().maxCoeff() <= 1e-8 * p0.cwiseAbs().maxCoeff());
    }
  }

  TEST_CASE("zero-demand components cut off from ground float at zero") {
    // Nodes 3 and 4 only touch each other.
    const DirectedGraph g(5, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}});
    const auto sys = assemble<double>(g, vec({1, 1, 1}), vec({1, 0, -1, 0, 0}), 2);
    CHECK(sys.floating == std::vector<NodeId>{3, 4});
    const auto p = solve(sys);
    CHECK(p[0] == doctest::Approx(2.0));
    CHECK(p[3] == 0.0);
    CHECK(p[4] == 0.0);
  }

  TEST_CASE("conductivities below the threshold are not assembled") {
    const DirectedGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
    const auto sys = assemble<double>(g, vec({1, 1, 1e-13}), vec({1, 0, -1}), 2);
    const Eigen::MatrixXd a(sys.matrix);
    CHECK(a(0, 0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(assemble<double>(g, vec({1, -1, 1}), vec({1, 0, -1}), 2), ParameterError);
  }

  TEST_CASE("long double instantiation") {
    const DirectedGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    Vector<long double> d(2), rhs(3);
    d << 1, 1;
    rhs << 1, 0, -1;
    const auto p = solve(assemble<long double>(g, d, rhs, 2));
    CHECK(static_cast<double>(p[0]) == doctest::Approx(2.0));
  }

  TEST_CASE("matrix market dump") {
    const DirectedGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    std::ostringstream os;
    write_matrix_market(os, assemble<double>(g, vec({1, 1}), vec({1, 0, -1}), 2));
    CHECK(os.str() ==
          "%%MatrixMarket matrix coordinate real symmetric\n"
          "% dimension 3 ground 2\n"
          "2 2 3\n"
          "1 1 1\n"
          "2 1 -1\n"
          "2 2 2\n"
          "% rhs 1 1\n"
          "% rhs 2 0\n");
  }
}
