#include <gtest/gtest.h>

#include "octnag/graph.hpp"
#include "oracles.hpp"

using namespace octnag;

namespace {

Matrix dense_kron(const Matrix& L, int block) {
  const Eigen::Index n = L.rows();
  Matrix K = Matrix::Zero(n * block, n * block);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) K.block(i * block, j * block, block, block) = L(i, j) * Matrix::Identity(block, block);
  }
  return K;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidParameter;
}

Vector ring6_initial() {
  const double x0[] = {2, 1, 0, 3, 0, 1, 1, 1, 0, 3, 0, 4, 2, 1, 0, 1, 0, 1,
                       2, 1, 0, 3, 0, 2, 2, 1, 0, 3, 0, 1, 2, 1, 0, 0, 0, 1};
  return Eigen::Map<const Vector>(x0, 36);
}

}  // namespace

TEST(Network, PathLaplacian) {
  const auto net = Network::from_edges(3, {{1, 2, 1}, {2, 3, 1}});
  Matrix expected(3, 3);
  expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  EXPECT_EQ(net.laplacian(), expected);
  EXPECT_EQ(net.w_min(), 1.0);
}

TEST(Network, RingSix) {
  const auto net = Network::ring(6);
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(net.laplacian()(i, i), 2.0);
    EXPECT_EQ(net.laplacian().row(i).sum(), 0.0);
    EXPECT_EQ(net.adjacency()(i, i), 0.0);
  }
  EXPECT_EQ(net.adjacency(), net.adjacency().transpose());
}

TEST(Network, WeightsAndMinimum) {
  const auto net = Network::from_edges(3, {{1, 2, 0.5}, {2, 3, 2.0}, {1, 3, 1.0}});
  EXPECT_EQ(net.w_min(), 0.5);
  EXPECT_EQ(net.laplacian()(1, 1), 2.5);
}

TEST(Network, Errors) {
  EXPECT_EQ(kind_of([] { Network::from_edges(4, {{1, 2, 1}}); }), ErrorKind::Disconnected);
  EXPECT_EQ(kind_of([] { Network::from_edges(3, {{1, 1, 1}, {1, 2, 1}, {2, 3, 1}}); }), ErrorKind::SelfLoop);
  EXPECT_EQ(kind_of([] { Network::from_edges(2, {{1, 2, 0}}); }), ErrorKind::NonPositiveWeight);
  EXPECT_EQ(kind_of([] { Network::from_edges(2, {{1, 2, -1}}); }), ErrorKind::NonPositiveWeight);
  EXPECT_EQ(kind_of([] { Network::from_edges(2, {{1, 3, 1}}); }), ErrorKind::IndexOutOfRange);
  EXPECT_EQ(kind_of([] { Network::from_edges(2, {{0, 1, 1}}); }), ErrorKind::IndexOutOfRange);
}

TEST(Network, DisconnectedMessageNamesComponents) {
  try {
    Network::from_edges(4, {{1, 2, 1}});
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("{1,2}"), std::string::npos) << msg;
    EXPECT_NE(msg.find("{3}"), std::string::npos) << msg;
    EXPECT_NE(msg.find("{4}"), std::string::npos) << msg;
  }
}

TEST(Network, SingleAgentIsConnected) {
  const auto net = Network::path(1);
  EXPECT_EQ(net.n(), 1);
  EXPECT_EQ(net.kron_laplacian_apply(Vector::Ones(3)).norm(), 0.0);
}

TEST(KronApply, HandCases) {
  const auto path = Network::path(3);
  const Vector out = path.kron_laplacian_apply((Vector(3) << 1, 0, 0).finished());
  EXPECT_EQ(out, (Vector(3) << 1, -1, 0).finished());

  const Vector consensus = Vector::Constant(4, 2.5).replicate(6, 1);
  EXPECT_EQ(Network::ring(6).kron_laplacian_apply(consensus).norm(), 0.0);
}

TEST(KronApply, MatchesDenseKroneckerOnRingInitialState) {
  const auto ring = Network::ring(6);
  const Vector x = ring6_initial();
  const Vector dense = dense_kron(ring.laplacian(), 6) * x;
  EXPECT_LE((ring.kron_laplacian_apply(x) - dense).norm(), 1e-13);
}

TEST(KronApply, DimensionMismatch) {
  try {
    Network::ring(6).kron_laplacian_apply(Vector::Zero(7));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(NetworkProperty, LaplacianQuadraticFormIsPsdAndMatchesEdgeSum) {
  oracle::Rng rng(42);
  const std::vector<Network> nets{Network::ring(6), Network::path(5), Network::complete(4),
                                  Network::from_edges(4, {{1, 2, 0.3}, {2, 3, 2.0}, {3, 4, 1.1}, {1, 4, 0.7}})};
  for (int trial = 0; trial < 1000; ++trial) {
    const Network& net = nets[std::size_t(trial) % nets.size()];
    const int block = rng.integer(1, 4);
    Vector x(net.n() * block);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.uniform(-3, 3);
    const double q = x.dot(net.kron_laplacian_apply(x));
    EXPECT_GE(q, -1e-12);
    double edge_sum = 0.0;
    for (int i = 0; i < net.n(); ++i) {
      for (int j = i + 1; j < net.n(); ++j) {
        edge_sum += net.adjacency()(i, j) * (x.segment(i * block, block) - x.segment(j * block, block)).squaredNorm();
      }
    }
    EXPECT_NEAR(q, edge_sum, 1e-10 * std::max(1.0, edge_sum));
    EXPECT_NEAR(net.disagreement_energy(x), edge_sum, 1e-10 * std::max(1.0, edge_sum));
  }
}

TEST(NetworkProperty, QuadraticFormZeroExactlyOnConsensus) {
  oracle::Rng rng(7);
  const auto net = Network::ring(6);
  for (int trial = 0; trial < 200; ++trial) {
    Vector c(3);
    for (int i = 0; i < 3; ++i) c(i) = rng.uniform(-5, 5);
    Vector x = c.replicate(6, 1);
    EXPECT_NEAR(x.dot(net.kron_laplacian_apply(x)), 0.0, 1e-12);
    x(rng.integer(0, 17)) += rng.uniform(0.1, 1.0);
    EXPECT_GT(x.dot(net.kron_laplacian_apply(x)), 1e-6);
  }
}
