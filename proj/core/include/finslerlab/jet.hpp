#pragma once

// Forward-mode jets: a value plus first partials along a set of seeded
// directions. The scalar type is itself a template parameter, so jets nest:
// Jet<Jet<double>> carries exact second mixed partials, Jet<Jet<Jet<double>>>
// third partials, and so on.
//
// An empty partial vector means "all partials zero at this level"; constants
// and variables that are not seeded at a level never allocate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace finslerlab {

template <class T>
struct Jet;

template <class T>
struct is_jet : std::false_type {};
template <class T>
struct is_jet<Jet<T>> : std::true_type {};
template <class T>
inline constexpr bool is_jet_v = is_jet<T>::value;

template <class T>
struct Jet {
  T value{};
  std::vector<T> d;

  Jet() = default;
  Jet(double c) : value(c) {}  // NOLINT(google-explicit-constructor): constants mix freely
  Jet(T v, std::vector<T> partials) : value(std::move(v)), d(std::move(partials)) {}

  /// Partial along slot k (zero if the slot was never populated).
  T partial(std::size_t k) const { return k < d.size() ? d[k] : T(0.0); }

  static Jet constant(T v) { return Jet(std::move(v), {}); }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
};

using Jet1 = Jet<double>;
using Jet2 = Jet<Jet1>;
using Jet3 = Jet<Jet2>;
using Jet4 = Jet<Jet3>;

inline double primal(double x) { return x; }
template <class T>
double primal(const Jet<T>& x) {
  return primal(x.value);
}

namespace detail {

template <class T, class S>
std::vector<T> scaled(const std::vector<T>& a, const S& s) {
  std::vector<T> out;
  out.reserve(a.size());
  for (const auto& e : a) out.push_back(e * s);
  return out;
}

template <class T>
std::vector<T> negated(const std::vector<T>& a) {
  std::vector<T> out;
  out.reserve(a.size());
  for (const auto& e : a) out.push_back(-e);
  return out;
}

template <class T>
std::vector<T> plus(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<T> out(std::max(a.size(), b.size()));
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k < a.size() && k < b.size()) {
      out[k] = a[k] + b[k];
    } else {
      out[k] = k < a.size() ? a[k] : b[k];
    }
  }
  return out;
}

template <class T>
std::vector<T> minus(const std::vector<T>& a, const std::vector<T>& b) {
  if (b.empty()) return a;
  if (a.empty()) return negated(b);
  std::vector<T> out(std::max(a.size(), b.size()));
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k < a.size() && k < b.size()) {
      out[k] = a[k] - b[k];
    } else {
      out[k] = k < a.size() ? a[k] : -b[k];
    }
  }
  return out;
}

// sa * a + sb * b
template <class T>
std::vector<T> combine(const T& sa, const std::vector<T>& a, const T& sb, const std::vector<T>& b) {
  if (a.empty()) return scaled(b, sb);
  if (b.empty()) return scaled(a, sa);
  std::vector<T> out(std::max(a.size(), b.size()));
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k < a.size() && k < b.size()) {
      out[k] = a[k] * sa + b[k] * sb;
    } else {
      out[k] = k < a.size() ? a[k] * sa : b[k] * sb;
    }
  }
  return out;
}

}  // namespace detail

template <class T>
Jet<T> operator-(const Jet<T>& a) {
  return {-a.value, detail::negated(a.d)};
}

template <class T>
Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) {
  return {a.value + b.value, detail::plus(a.d, b.d)};
}
template <class T>
Jet<T> operator+(const Jet<T>& a, double b) {
  return {a.value + b, a.d};
}
template <class T>
Jet<T> operator+(double a, const Jet<T>& b) {
  return {a + b.value, b.d};
}

template <class T>
Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) {
  return {a.value - b.value, detail::minus(a.d, b.d)};
}
template <class T>
Jet<T> operator-(const Jet<T>& a, double b) {
  return {a.value - b, a.d};
}
template <class T>
Jet<T> operator-(double a, const Jet<T>& b) {
  return {a - b.value, detail::negated(b.d)};
}

template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  return {a.value * b.value, detail::combine(b.value, a.d, a.value, b.d)};
}
template <class T>
Jet<T> operator*(const Jet<T>& a, double b) {
  return {a.value * b, detail::scaled(a.d, b)};
}
template <class T>
Jet<T> operator*(double a, const Jet<T>& b) {
  return {a * b.value, detail::scaled(b.d, a)};
}

template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
  T q = a.value / b.value;
  if (a.d.empty() && b.d.empty()) return {std::move(q), {}};
  const T inv = 1.0 / b.value;
  // (a' - q b') / b
  auto d = detail::combine(inv, a.d, -(q * inv), b.d);
  return {std::move(q), std::move(d)};
}
template <class T>
Jet<T> operator/(const Jet<T>& a, double b) {
  return {a.value / b, detail::scaled(a.d, 1.0 / b)};
}
template <class T>
Jet<T> operator/(double a, const Jet<T>& b) {
  T q = a / b.value;
  if (b.d.empty()) return {std::move(q), {}};
  const T factor = -(q / b.value);
  return {std::move(q), detail::scaled(b.d, factor)};
}

template <class T>
Jet<T>& Jet<T>::operator+=(const Jet& o) {
  return *this = *this + o;
}
template <class T>
Jet<T>& Jet<T>::operator-=(const Jet& o) {
  return *this = *this - o;
}
template <class T>
Jet<T>& Jet<T>::operator*=(const Jet& o) {
  return *this = *this * o;
}
template <class T>
Jet<T>& Jet<T>::operator/=(const Jet& o) {
  return *this = *this / o;
}

namespace detail {
template <class T>
Jet<T> chain(const Jet<T>& x, T f, const T& fprime) {
  if (x.d.empty()) return {std::move(f), {}};
  return {std::move(f), scaled(x.d, fprime)};
}
}  // namespace detail

template <class T>
Jet<T> sin(const Jet<T>& x) {
  using std::cos;
  using std::sin;
  return detail::chain(x, sin(x.value), cos(x.value));
}
template <class T>
Jet<T> cos(const Jet<T>& x) {
  using std::cos;
  using std::sin;
  return detail::chain(x, cos(x.value), -sin(x.value));
}
template <class T>
Jet<T> tan(const Jet<T>& x) {
  using std::tan;
  T t = tan(x.value);
  const T fp = 1.0 + t * t;
  return detail::chain(x, std::move(t), fp);
}
template <class T>
Jet<T> exp(const Jet<T>& x) {
  using std::exp;
  T e = exp(x.value);
  const T fp = e;
  return detail::chain(x, std::move(e), fp);
}
template <class T>
Jet<T> log(const Jet<T>& x) {
  using std::log;
  return detail::chain(x, log(x.value), 1.0 / x.value);
}
template <class T>
Jet<T> sqrt(const Jet<T>& x) {
  using std::sqrt;
  T s = sqrt(x.value);
  const T fp = 0.5 / s;
  return detail::chain(x, std::move(s), fp);
}
template <class T>
Jet<T> sinh(const Jet<T>& x) {
  using std::cosh;
  using std::sinh;
  return detail::chain(x, sinh(x.value), cosh(x.value));
}
template <class T>
Jet<T> cosh(const Jet<T>& x) {
  using std::cosh;
  using std::sinh;
  return detail::chain(x, cosh(x.value), sinh(x.value));
}
template <class T>
Jet<T> tanh(const Jet<T>& x) {
  using std::tanh;
  T t = tanh(x.value);
  const T fp = 1.0 - t * t;
  return detail::chain(x, std::move(t), fp);
}

/// x^k by binary powering. Shared by plain doubles and jets so the value slot
/// of a jet matches the plain evaluation bit for bit.
template <class T>
T ipow(const T& x, int k) {
  if (k < 0) return 1.0 / ipow(x, -k);
  T result(1.0);
  T base = x;
  bool first = true;
  while (k > 0) {
    if (k & 1) {
      if (first) {
        result = base;
        first = false;
      } else {
        result = result * base;
      }
    }
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

/// Jets for `point`, with slot s of the result seeded along directions[s].
/// Components not listed carry no partials.
inline std::vector<Jet1> seed(std::span<const double> point, std::span<const int> directions) {
  std::vector<Jet1> out;
  out.reserve(point.size());
  for (double p : point) out.push_back(Jet1::constant(p));
  for (std::size_t s = 0; s < directions.size(); ++s) {
    const int i = directions[s];
    if (i < 0 || static_cast<std::size_t>(i) >= point.size()) {
      throw std::out_of_range("seed direction " + std::to_string(i) + " outside dimension " +
                              std::to_string(point.size()));
    }
    for (std::size_t t = 0; t < s; ++t) {
      if (directions[t] == i) throw std::invalid_argument("seed directions must be distinct");
    }
    out[static_cast<std::size_t>(i)].d.assign(directions.size(), 0.0);
    out[static_cast<std::size_t>(i)].d[s] = 1.0;
  }
  return out;
}

/// Lift values one nesting level up, seeding `directions` (same slot
/// convention as `seed`). Works for any inner scalar.
template <class T>
std::vector<Jet<T>> lift(std::span<const T> point, std::span<const int> directions = {}) {
  std::vector<Jet<T>> out;
  out.reserve(point.size());
  for (const auto& p : point) out.push_back(Jet<T>::constant(p));
  for (std::size_t s = 0; s < directions.size(); ++s) {
    auto& d = out[static_cast<std::size_t>(directions[s])].d;
    d.assign(directions.size(), T(0.0));
    d[s] = T(1.0);
  }
  return out;
}

/// Lift with every coordinate seeded in its own slot.
template <class T>
std::vector<Jet<T>> lift_all(std::span<const T> point) {
  std::vector<Jet<T>> out;
  out.reserve(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    std::vector<T> d(point.size(), T(0.0));
    d[i] = T(1.0);
    out.emplace_back(point[i], std::move(d));
  }
  return out;
}

}  // namespace finslerlab
