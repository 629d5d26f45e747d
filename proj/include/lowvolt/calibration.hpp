#pragma once

// Least-squares fits of the model constants from measured samples.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lowvolt/error.hpp"

namespace lowvolt {

template <typename Scalar = double>
struct VFSample {
  Scalar v;
  Scalar f_max;
};

template <typename Scalar = double>
struct PowerSample {
  Scalar v;
  Scalar f;
  Scalar p_w;
};

template <typename Scalar = double>
struct VFFit {
  Scalar k2{0};
  Scalar v_th{0};
  Scalar h{1.5};
  Scalar rms_residual{0};  // Hz
  int sample_count{0};
};

template <typename Scalar = double>
struct PowerFit {
  Scalar dyn_const{0};
  Scalar i_leak{0};
  Scalar rms_residual{0};  // W
  int sample_count{0};
  bool clamped{false};  // a negative coefficient was forced to zero
};

struct VFFitOptions {
  int grid_points = 256;
  int golden_iterations = 200;
};

namespace detail {

template <typename Scalar>
struct VFObjective {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  Array v;
  Array y;
  Scalar h;

  // Best k2 for a fixed threshold, and the resulting sum of squares.
  std::pair<Scalar, Scalar> operator()(Scalar v_th) const {
    const Array g = (v - v_th).pow(h) / v;
    const Scalar gg = g.square().sum();
    const Scalar k2 = gg > 0 ? (g * y).sum() / gg : Scalar(0);
    return {k2, (y - k2 * g).square().sum()};
  }
};

}  // namespace detail

/// Fit (k2, v_th) of the maximum-frequency curve for a fixed exponent `h`.
///
/// The curve is linear in k2 once v_th is fixed, so the outer problem is a
/// one-dimensional search over v_th in (0, min v): a uniform grid scan to
/// bracket the minimum, then golden-section refinement inside the bracket.
/// The best point seen so far is kept, so more refinement never raises the
/// residual.
template <typename Scalar>
VFFit<Scalar> fit_vf(const std::vector<VFSample<Scalar>>& samples, Scalar h = Scalar(1.5),
                     const VFFitOptions& opt = {}) {
  if (samples.size() < 2) throw Error(ErrorKind::InsufficientData, "fit_vf: need at least 2 samples");
  if (!(h >= 1)) throw Error(ErrorKind::InvalidParams, "fit_vf: exponent h must be >= 1");

  detail::VFObjective<Scalar> obj;
  obj.h = h;
  obj.v.resize(static_cast<Eigen::Index>(samples.size()));
  obj.y.resize(obj.v.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].v > 0) || !(samples[i].f_max >= 0))
      throw Error(ErrorKind::DegenerateData, "fit_vf: samples need v > 0 and f_max >= 0");
    obj.v(static_cast<Eigen::Index>(i)) = samples[i].v;
    obj.y(static_cast<Eigen::Index>(i)) = samples[i].f_max;
  }
  const Scalar v_lo = obj.v.minCoeff();
  if (v_lo == obj.v.maxCoeff())
    throw Error(ErrorKind::DegenerateData, "fit_vf: all samples share one voltage");

  Scalar best_vth = 0;
  Scalar best_k2 = 0;
  Scalar best_sse = std::numeric_limits<Scalar>::infinity();
  auto consider = [&](Scalar vth) {
    const auto [k2, sse] = obj(vth);
    if (sse < best_sse) {
      best_sse = sse;
      best_vth = vth;
      best_k2 = k2;
    }
    return sse;
  };

  const int n = std::max(opt.grid_points, 3);
  const Scalar step = v_lo / Scalar(n + 1);
  int best_i = 1;
  for (int i = 1; i <= n; ++i) {
    const Scalar before = best_sse;
    consider(step * Scalar(i));
    if (best_sse < before) best_i = i;
  }

  // Bracket around the best grid node, staying strictly inside (0, v_lo).
  Scalar a = step * Scalar(best_i - 1);
  Scalar b = std::min(step * Scalar(best_i + 1), v_lo);
  const Scalar inv_phi = (std::sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
  Scalar c = b - inv_phi * (b - a);
  Scalar d = a + inv_phi * (b - a);
  Scalar fc = consider(c);
  Scalar fd = consider(d);
  for (int it = 0; it < opt.golden_iterations; ++it) {
    if (!(b - a > std::numeric_limits<Scalar>::epsilon() * v_lo)) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = consider(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = consider(d);
    }
  }

  if (!(best_k2 > 0))
    throw Error(ErrorKind::DegenerateData, "fit_vf: data does not support a positive k2");

  VFFit<Scalar> fit;
  fit.k2 = best_k2;
  fit.v_th = best_vth;
  fit.h = h;
  fit.sample_count = static_cast<int>(samples.size());
  fit.rms_residual = std::sqrt(best_sse / Scalar(samples.size()));
  return fit;
}

/// Ordinary least squares of measured power on (v^2 f, v).
template <typename Scalar>
PowerFit<Scalar> fit_power(const std::vector<PowerSample<Scalar>>& samples) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (samples.size() < 2) throw Error(ErrorKind::Underdetermined, "fit_power: need at least 2 samples");

  const auto n = static_cast<Eigen::Index>(samples.size());
  Matrix A(n, 2);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    if (!(s.v >= 0) || !(s.f >= 0) || !(s.p_w >= 0))
      throw Error(ErrorKind::DegenerateData, "fit_power: samples must be non-negative");
    A(i, 0) = s.v * s.v * s.f;
    A(i, 1) = s.v;
    y(i) = s.p_w;
  }

  // Columns differ by ~1e9 in scale; normalise before the rank test.
  const Eigen::Matrix<Scalar, 2, 1> scale = A.colwise().norm().transpose();
  if (!(scale(0) > 0) || !(scale(1) > 0))
    throw Error(ErrorKind::Underdetermined, "fit_power: a regressor column is identically zero");
  const Matrix An = A * scale.cwiseInverse().asDiagonal();

  Eigen::ColPivHouseholderQR<Matrix> qr(An);
  qr.setThreshold(Scalar(1e-10));
  if (qr.rank() < 2)
    throw Error(ErrorKind::Underdetermined, "fit_power: regressors v^2*f and v are collinear");
  Eigen::Matrix<Scalar, 2, 1> coef = qr.solve(y).cwiseQuotient(scale);

  PowerFit<Scalar> fit;
  fit.sample_count = static_cast<int>(n);
  if (coef(0) < 0 || coef(1) < 0) {
    fit.clamped = true;
    if (coef(0) < 0 && coef(1) < 0) {
      coef.setZero();
    } else {
      const int keep = coef(0) < 0 ? 1 : 0;
      coef(1 - keep) = 0;
      coef(keep) = std::max(Scalar(0), A.col(keep).dot(y) / A.col(keep).squaredNorm());
    }
  }
  fit.dyn_const = coef(0);
  fit.i_leak = coef(1);
  fit.rms_residual = std::sqrt((A * coef - y).squaredNorm() / Scalar(n));
  return fit;
}

}  // namespace lowvolt
