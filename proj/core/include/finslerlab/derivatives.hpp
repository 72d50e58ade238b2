#pragma once

// Exact derivatives of jet-generic callables. `f` must accept
// std::span<const Jet...> for the nesting depth each routine uses.

#include <cmath>
#include <span>
#include <vector>

#include "finslerlab/jet.hpp"
#include "finslerlab/linalg.hpp"

namespace finslerlab {

template <class Fn>
std::vector<double> gradient(Fn&& f, std::span<const double> point) {
  const auto xs = lift_all<double>(point);
  const Jet1 r = f(std::span<const Jet1>(xs));
  std::vector<double> g(point.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = r.partial(i);
  return g;
}

/// Hessian by one level of nesting. Entries (i, j) and (j, i) come from
/// different arithmetic paths; they must agree to rounding and the returned
/// matrix is their mean.
template <class Fn>
Matrix<double> hessian(Fn&& f, std::span<const double> point) {
  const int n = static_cast<int>(point.size());
  const auto inner = lift_all<double>(point);
  const auto xs = lift_all<Jet1>(inner);
  const Jet2 r = f(std::span<const Jet2>(xs));
  Matrix<double> h(n, n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      h(i, j) = r.partial(static_cast<std::size_t>(i)).partial(static_cast<std::size_t>(j));
      scale = std::max(scale, std::abs(h(i, j)));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(h(i, j) - h(j, i)) > 1e-10 * (1.0 + scale)) {
        throw Error("hessian is not symmetric; the function is not smooth at the point");
      }
      const double m = 0.5 * (h(i, j) + h(j, i));
      h(i, j) = m;
      h(j, i) = m;
    }
  }
  return h;
}

/// Single third partial d^3 f / dx_i dx_j dx_k via two extra nesting levels,
/// each seeded along one direction only.
template <class Fn>
double third_order(Fn&& f, std::span<const double> point, int i, int j, int k) {
  const int n = static_cast<int>(point.size());
  for (int idx : {i, j, k}) {
    if (idx < 0 || idx >= n) throw std::out_of_range("third_order index outside dimension");
  }
  const int di[] = {i};
  const int dj[] = {j};
  const int dk[] = {k};
  const auto l1 = lift<double>(point, dk);
  const auto l2 = lift<Jet1>(l1, dj);
  const auto l3 = lift<Jet2>(l2, di);
  const Jet3 r = f(std::span<const Jet3>(l3));
  return r.partial(0).partial(0).partial(0);
}

}  // namespace finslerlab
