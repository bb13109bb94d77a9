#pragma once

#include <limits>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "octnag/objective.hpp"

namespace octnag {

struct Edge {
  int i;  // 1-based
  int j;  // 1-based
  double weight;
};

// Weighted undirected connected communication graph with its Laplacian L = D - A.
class Network {
 public:
  static Network from_edges(int n, const std::vector<Edge>& edges) {
    if (n <= 0) throw Error(ErrorKind::InvalidParameter, "network needs at least one agent");
    Matrix adjacency = Matrix::Zero(n, n);
    for (const Edge& e : edges) {
      if (e.i < 1 || e.i > n || e.j < 1 || e.j > n) {
        throw Error(ErrorKind::IndexOutOfRange, "edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                                                    ") outside 1.." + std::to_string(n));
      }
      if (e.i == e.j) throw Error(ErrorKind::SelfLoop, "self loop at agent " + std::to_string(e.i));
      if (!(e.weight > 0.0)) {
        throw Error(ErrorKind::NonPositiveWeight, "edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                                                      ") has non-positive weight");
      }
      // repeated edges accumulate
      adjacency(e.i - 1, e.j - 1) += e.weight;
      adjacency(e.j - 1, e.i - 1) += e.weight;
    }
    return Network(std::move(adjacency));
  }

  static Network ring(int n, double weight = 1.0) {
    if (n < 3) throw Error(ErrorKind::InvalidParameter, "ring needs at least 3 agents");
    std::vector<Edge> edges;
    for (int i = 1; i <= n; ++i) edges.push_back({i, i % n + 1, weight});
    return from_edges(n, edges);
  }

  static Network path(int n, double weight = 1.0) {
    std::vector<Edge> edges;
    for (int i = 1; i < n; ++i) edges.push_back({i, i + 1, weight});
    return from_edges(n, edges);
  }

  static Network complete(int n, double weight = 1.0) {
    std::vector<Edge> edges;
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) edges.push_back({i, j, weight});
    }
    return from_edges(n, edges);
  }

  int n() const { return static_cast<int>(adjacency_.rows()); }
  const Matrix& adjacency() const { return adjacency_; }
  const Matrix& laplacian() const { return laplacian_; }
  double w_min() const { return w_min_; }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (int i = 0; i < n(); ++i) {
      for (int j = i + 1; j < n(); ++j) {
        if (adjacency_(i, j) > 0.0) out.push_back({i + 1, j + 1, adjacency_(i, j)});
      }
    }
    return out;
  }

  // out = (L kron I_block) x, where x stacks n() blocks of equal length.
  void kron_laplacian_apply(ConstVectorRef x, VectorRef out) const {
    const Eigen::Index block = block_size(x.size());
    if (out.size() != x.size()) throw Error(ErrorKind::DimensionMismatch, "output length differs from input");
    for (int i = 0; i < n(); ++i) {
      auto oi = out.segment(i * block, block);
      oi.setZero();
      for (int j = 0; j < n(); ++j) {
        const double lij = laplacian_(i, j);
        if (lij != 0.0) oi.noalias() += lij * x.segment(j * block, block);
      }
    }
  }

  Vector kron_laplacian_apply(ConstVectorRef x) const {
    Vector out(x.size());
    kron_laplacian_apply(x, out);
    return out;
  }

  // x^T (L kron I) x evaluated edge-wise as sum_{i<j} a_ij ||x_i - x_j||^2.
  double disagreement_energy(ConstVectorRef x) const {
    const Eigen::Index block = block_size(x.size());
    double total = 0.0;
    for (int i = 0; i < n(); ++i) {
      for (int j = i + 1; j < n(); ++j) {
        if (adjacency_(i, j) > 0.0) {
          total += adjacency_(i, j) * (x.segment(i * block, block) - x.segment(j * block, block)).squaredNorm();
        }
      }
    }
    return total;
  }

 private:
  explicit Network(Matrix adjacency) : adjacency_(std::move(adjacency)) {
    const int size = static_cast<int>(adjacency_.rows());
    laplacian_ = -adjacency_;
    for (int i = 0; i < size; ++i) laplacian_(i, i) = adjacency_.row(i).sum();
    w_min_ = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) {
        if (adjacency_(i, j) > 0.0) w_min_ = std::min(w_min_, adjacency_(i, j));
      }
    }
    if (size == 1) w_min_ = 0.0;
    check_connected();
  }

  void check_connected() const {
    const int size = n();
    std::vector<int> component(size, -1);
    int count = 0;
    for (int root = 0; root < size; ++root) {
      if (component[root] >= 0) continue;
      std::vector<int> stack{root};
      component[root] = count;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v = 0; v < size; ++v) {
          if (adjacency_(u, v) > 0.0 && component[v] < 0) {
            component[v] = count;
            stack.push_back(v);
          }
        }
      }
      ++count;
    }
    if (count > 1) {
      std::ostringstream msg;
      msg << "graph has " << count << " components:";
      for (int c = 0; c < count; ++c) {
        msg << " {";
        bool first = true;
        for (int v = 0; v < size; ++v) {
          if (component[v] != c) continue;
          msg << (first ? "" : ",") << v + 1;
          first = false;
        }
        msg << "}";
      }
      throw Error(ErrorKind::Disconnected, msg.str());
    }
  }

  Eigen::Index block_size(Eigen::Index length) const {
    if (length % n() != 0) {
      throw Error(ErrorKind::DimensionMismatch, "stacked vector length " + std::to_string(length) +
                                                    " not divisible by N=" + std::to_string(n()));
    }
    return length / n();
  }

  Matrix adjacency_;
  Matrix laplacian_;
  double w_min_ = 0.0;
};

}  // namespace octnag
