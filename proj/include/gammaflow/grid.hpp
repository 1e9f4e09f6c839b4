#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "gammaflow/errors.hpp"

namespace gammaflow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class BoundaryPolicy { Exact, Clamped };

/// Rectangular grid discretization of a graphical hypersurface u: box -> R.
/// Row-major storage, last axis fastest. The optional analytic source feeds
/// the Exact boundary policy (flow pinning, ground-truth comparisons).
struct GraphPatch {
  int n = 1;
  std::vector<int> dims;
  Vector origin;
  Vector spacing;
  std::vector<double> u;
  BoundaryPolicy policy = BoundaryPolicy::Clamped;
  std::function<double(const Vector&)> exact_u;

  std::size_t size() const {
    std::size_t s = 1;
    for (int d : dims) s *= static_cast<std::size_t>(d);
    return s;
  }

  std::size_t flat(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (int a = 0; a < n; ++a) f = f * dims[a] + idx[a];
    return f;
  }

  Vector coord(const std::vector<int>& idx) const {
    Vector x(n);
    for (int a = 0; a < n; ++a) x[a] = origin[a] + idx[a] * spacing[a];
    return x;
  }

  void validate() const {
    if (n < 1 || static_cast<int>(dims.size()) != n)
      throw DegenerateGrid("patch dimension metadata inconsistent");
    for (int d : dims)
      if (d < 5) throw DegenerateGrid("each axis needs at least 5 grid points");
    if (u.size() != size()) throw DegenerateGrid("u storage does not match grid shape");
    for (int a = 0; a < n; ++a)
      if (!(spacing[a] > 0.0)) throw DegenerateGrid("grid spacing must be positive");
  }
};

/// Samples f on a uniform grid over [lo, hi] with the given point counts.
inline GraphPatch make_patch(int n, const Vector& lo, const Vector& hi,
                             const std::vector<int>& dims,
                             const std::function<double(const Vector&)>& f,
                             BoundaryPolicy policy = BoundaryPolicy::Clamped) {
  GraphPatch p;
  p.n = n;
  p.dims = dims;
  p.origin = lo;
  p.spacing = Vector(n);
  for (int a = 0; a < n; ++a) p.spacing[a] = (hi[a] - lo[a]) / (dims[a] - 1);
  p.policy = policy;
  p.u.resize(p.size());
  std::vector<int> idx(n, 0);
  for (std::size_t fl = 0; fl < p.size(); ++fl) {
    p.u[fl] = f(p.coord(idx));
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[a] < dims[a]) break;
      idx[a] = 0;
    }
  }
  if (policy == BoundaryPolicy::Exact) p.exact_u = f;
  p.validate();
  return p;
}

/// A scalar grid function valid on the interior shrunk by `margin` cells;
/// NaN elsewhere.
struct ScalarField {
  std::vector<int> dims;
  Vector origin, spacing;
  int margin = 0;
  std::vector<double> v;

  static ScalarField like(const GraphPatch& p, int margin) {
    ScalarField f;
    f.dims = p.dims;
    f.origin = p.origin;
    f.spacing = p.spacing;
    f.margin = margin;
    f.v.assign(p.size(), std::numeric_limits<double>::quiet_NaN());
    return f;
  }

  int n() const { return static_cast<int>(dims.size()); }

  std::size_t flat(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (std::size_t a = 0; a < dims.size(); ++a) f = f * dims[a] + idx[a];
    return f;
  }

  bool interior(const std::vector<int>& idx, int m) const {
    for (std::size_t a = 0; a < dims.size(); ++a)
      if (idx[a] < m || idx[a] >= dims[a] - m) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : v)
      if (std::isfinite(x)) m = std::max(m, std::abs(x));
    return m;
  }

  double mean_abs() const {
    double s = 0.0;
    std::size_t c = 0;
    for (double x : v)
      if (std::isfinite(x)) { s += std::abs(x); ++c; }
    return c ? s / c : 0.0;
  }
};

/// Calls fn(idx, flat) for every index with all coordinates in
/// [margin, dims[a] - margin).
template <class F>
void for_each_interior(const std::vector<int>& dims, int margin, F&& fn) {
  const int n = static_cast<int>(dims.size());
  std::vector<int> idx(n, margin);
  for (int a = 0; a < n; ++a)
    if (dims[a] - 2 * margin <= 0) return;
  bool done = false;
  std::vector<std::size_t> stride(n);
  stride[n - 1] = 1;
  for (int a = n - 2; a >= 0; --a) stride[a] = stride[a + 1] * dims[a + 1];
  while (!done) {
    std::size_t fl = 0;
    for (int a = 0; a < n; ++a) fl += idx[a] * stride[a];
    fn(idx, fl);
    done = true;
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[a] < dims[a] - margin) { done = false; break; }
      idx[a] = margin;
    }
  }
}

// Second-order central differences on a flat row-major array.
namespace fd {

inline std::size_t shift(std::size_t fl, int axis, int by, const std::vector<int>& dims) {
  std::size_t stride = 1;
  for (int a = static_cast<int>(dims.size()) - 1; a > axis; --a) stride *= dims[a];
  return fl + static_cast<std::size_t>(by) * stride;  // by may be negative; wraps are caller bugs
}

inline double d1(const std::vector<double>& u, std::size_t fl, int axis, double h,
                 const std::vector<int>& dims) {
  return (u[shift(fl, axis, 1, dims)] - u[shift(fl, axis, -1, dims)]) / (2.0 * h);
}

inline double d2(const std::vector<double>& u, std::size_t fl, int a, int b, double ha,
                 double hb, const std::vector<int>& dims) {
  if (a == b)
    return (u[shift(fl, a, 1, dims)] - 2.0 * u[fl] + u[shift(fl, a, -1, dims)]) / (ha * ha);
  const std::size_t pp = shift(shift(fl, a, 1, dims), b, 1, dims);
  const std::size_t pm = shift(shift(fl, a, 1, dims), b, -1, dims);
  const std::size_t mp = shift(shift(fl, a, -1, dims), b, 1, dims);
  const std::size_t mm = shift(shift(fl, a, -1, dims), b, -1, dims);
  return (u[pp] - u[pm] - u[mp] + u[mm]) / (4.0 * ha * hb);
}

}  // namespace fd

}  // namespace gammaflow
