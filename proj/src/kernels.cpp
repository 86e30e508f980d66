#include "mixcomp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mixcomp/error.hpp"

namespace mixcomp {

void validate(const KernelSpec& spec) {
  if (!(spec.h > 0.0) || !std::isfinite(spec.h)) {
    throw Error(ErrorCode::InvalidArgument, "bandwidth must be positive, got " + std::to_string(spec.h));
  }
  if (spec.dim < 1) {
    throw Error(ErrorCode::InvalidArgument, "kernel dimension must be >= 1");
  }
}

double kernel_value(KernelFamily family, double h, double u) {
  const double x = u / h;
  switch (family) {
    case KernelFamily::gaussian:
      return std::exp(-0.5 * x * x) / (std::sqrt(2.0 * std::numbers::pi) * h);
    case KernelFamily::uniform:
      return std::abs(x) <= 1.0 ? 0.5 / h : 0.0;
  }
  return 0.0;
}

double phi(const KernelSpec& spec, double a, double b) {
  const double h = spec.h;
  const double diff = std::abs(a - b);
  switch (spec.family) {
    case KernelFamily::gaussian:
      return std::exp(-diff * diff / (4.0 * h * h)) / (2.0 * h * std::sqrt(std::numbers::pi));
    case KernelFamily::uniform:
      // |a-b| == 2h lands on the zero of the linear ramp.
      return diff < 2.0 * h ? (2.0 * h - diff) / (4.0 * h * h) : 0.0;
  }
  return 0.0;
}

double phi_vec(const KernelSpec& spec, std::span<const double> a, std::span<const double> b) {
  const auto d = static_cast<std::size_t>(spec.dim);
  if (a.size() != d || b.size() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected vectors of length " + std::to_string(d) + ", got " +
                    std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  double prod = 1.0;
  for (std::size_t i = 0; i < d; ++i) prod *= phi(spec, a[i], b[i]);
  return prod;
}

double phi_diag(const KernelSpec& spec) {
  const double one = phi(spec, 0.0, 0.0);
  double prod = 1.0;
  for (int i = 0; i < spec.dim; ++i) prod *= one;
  return prod;
}

double hs_dist_sq(const KernelSpec& k1, const KernelSpec& k2, ObservationRef x, ObservationRef y) {
  const double xx = phi_vec(k1, x.left, x.left) * phi_vec(k2, x.right, x.right);
  const double yy = phi_vec(k1, y.left, y.left) * phi_vec(k2, y.right, y.right);
  const double xy = phi_vec(k1, x.left, y.left) * phi_vec(k2, x.right, y.right);
  return std::max(0.0, xx + yy - 2.0 * xy);
}

double analytic_L(const KernelSpec& k1, const KernelSpec& k2) {
  validate(k1);
  validate(k2);
  return std::sqrt(2.0 * phi_diag(k1) * phi_diag(k2));
}

double phi_quadrature(const KernelSpec& spec, double a, double b, double grid_step,
                      double grid_halfwidth) {
  if (!(grid_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid_step must be positive");
  const double lo = std::min(a, b) - grid_halfwidth;
  const double hi = std::max(a, b) + grid_halfwidth;
  const auto cells = static_cast<long>(std::ceil((hi - lo) / grid_step));
  const double step = (hi - lo) / static_cast<double>(cells);
  double sum = 0.0;
  for (long i = 0; i < cells; ++i) {
    const double u = lo + (static_cast<double>(i) + 0.5) * step;
    sum += kernel_value(spec.family, spec.h, a - u) * kernel_value(spec.family, spec.h, b - u);
  }
  return sum * step;
}

}  // namespace mixcomp
