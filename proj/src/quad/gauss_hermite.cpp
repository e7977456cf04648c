#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lsi/quad.hpp"

namespace lsi::quad {

namespace {

// Orthonormal probabilists' Hermite values h_{m-1}(x), h_m(x) and sum_{k<m} h_k(x)^2.
void hermite_tail(int m, double x, double& hm1, double& hm, double& sumsq) {
  double prev = 0.0, cur = 1.0;
  sumsq = 0.0;
  for (int k = 0; k < m; ++k) {
    sumsq += cur * cur;
    const double next = (x * cur - std::sqrt(double(k)) * prev) / std::sqrt(double(k + 1));
    prev = cur;
    cur = next;
  }
  hm1 = prev;
  hm = cur;
}

}  // namespace

void gauss_hermite_nodes(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1) throw std::invalid_argument("gauss_hermite_nodes: order must be >= 1");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(std::max(order - 1, 0));
  for (int k = 1; k < order; ++k) sub(k - 1) = std::sqrt(double(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  nodes.assign(es.eigenvalues().data(), es.eigenvalues().data() + order);
  weights.assign(order, 0.0);
  const double sm = std::sqrt(double(order));
  for (int i = 0; i < order; ++i) {
    double x = nodes[i];
    double hm1, hm, s;
    for (int it = 0; it < 3; ++it) {
      hermite_tail(order, x, hm1, hm, s);
      if (hm1 == 0.0) break;
      x -= hm / (sm * hm1);
    }
    hermite_tail(order, x, hm1, hm, s);
    nodes[i] = x;
    weights[i] = 1.0 / s;
  }
  // Enforce exact symmetry.
  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double x = 0.5 * (nodes[j] - nodes[i]);
    const double w = 0.5 * (weights[i] + weights[j]);
    nodes[i] = -x;
    nodes[j] = x;
    weights[i] = weights[j] = w;
  }
  if (order % 2 == 1) nodes[order / 2] = 0.0;
}

QuadratureRule QuadratureRule::gauss_hermite(int order, double tolerance) {
  QuadratureRule r;
  r.kind = RuleKind::gauss_hermite;
  r.tolerance = tolerance;
  gauss_hermite_nodes(order, r.nodes, r.weights);
  r.validate();
  return r;
}

QuadratureRule QuadratureRule::adaptive(double tolerance, int max_depth) {
  QuadratureRule r;
  r.kind = RuleKind::adaptive_piecewise;
  r.tolerance = tolerance;
  r.max_depth = max_depth;
  r.validate();
  return r;
}

QuadratureRule QuadratureRule::radial(double tolerance, int max_depth) {
  QuadratureRule r = adaptive(tolerance, max_depth);
  r.kind = RuleKind::radial;
  return r;
}

void QuadratureRule::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("QuadratureRule: tolerance must be > 0");
  if (relative_tolerance < 0.0)
    throw std::invalid_argument("QuadratureRule: relative tolerance must be >= 0");
  if (max_depth < 1 || max_panels < 1)
    throw std::invalid_argument("QuadratureRule: depth and panel limits must be positive");
  if (kind == RuleKind::gauss_hermite) {
    if (nodes.empty() || nodes.size() != weights.size())
      throw std::invalid_argument("QuadratureRule: Gauss-Hermite rule needs nodes and weights");
    if (!std::is_sorted(nodes.begin(), nodes.end()))
      throw std::invalid_argument("QuadratureRule: nodes must be sorted");
    for (double w : weights)
      if (!(w > 0.0)) throw std::invalid_argument("QuadratureRule: weights must be positive");
  }
}

}  // namespace lsi::quad
