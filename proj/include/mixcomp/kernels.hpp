#pragma once

#include <span>

namespace mixcomp {

enum class KernelFamily { gaussian, uniform };

// Product kernel K_h^d on R^d built from a one-dimensional smoothing kernel.
//   gaussian: K(x) = exp(-x^2/2) / sqrt(2 pi)
//   uniform:  K(x) = 1/2 on |x| <= 1
struct KernelSpec {
  KernelFamily family = KernelFamily::gaussian;
  double h = 1.0;
  int dim = 1;
};

// Throws InvalidArgument unless h > 0 (finite) and dim >= 1.
void validate(const KernelSpec& spec);

// Smoothed kernel K_h(u) = K(u/h)/h.
double kernel_value(KernelFamily family, double h, double u);

// phi_h(a, b) = \int K_h(a-u) K_h(b-u) du, closed form. Uses spec.h only.
double phi(const KernelSpec& spec, double a, double b);

// d-fold product of phi over coordinates. Throws DimensionMismatch.
double phi_vec(const KernelSpec& spec, std::span<const double> a, std::span<const double> b);

// phi^d(a, a); constant in a for both families.
double phi_diag(const KernelSpec& spec);

// One observation of a two-block sample: left block and right block.
struct ObservationRef {
  std::span<const double> left;
  std::span<const double> right;
};

// Squared Hilbert-Schmidt distance between the rank-one operators attached to x and y:
//   phi1(x1,x1) phi2(x2,x2) + phi1(y1,y1) phi2(y2,y2) - 2 phi1(x1,y1) phi2(x2,y2)
// Negative roundoff is clamped to zero.
double hs_dist_sq(const KernelSpec& k1, const KernelSpec& k2, ObservationRef x, ObservationRef y);

// Supremum of the HS distance over all pairs of observations: sqrt(2 phi1(a,a) phi2(a,a)).
double analytic_L(const KernelSpec& k1, const KernelSpec& k2);

// Midpoint-rule approximation of phi over [min(a,b)-halfwidth, max(a,b)+halfwidth].
// Reference oracle for the closed forms; not used on the estimation path.
double phi_quadrature(const KernelSpec& spec, double a, double b, double grid_step,
                      double grid_halfwidth);

}  // namespace mixcomp
