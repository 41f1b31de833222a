#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "dlv/params.hpp"

namespace dlv {

using complex = std::complex<double>;

/// kappa1(l) + kappa2(l) e^{-l tau} with kappa1(l) = l^2 + r l + k and
/// kappa2(l) = -r l, where r = beta0 e^{-mu0 tau} and k = delta gamma0 y*.
struct QuasiPolynomial {
  double r;
  double k;
  double tau;

  /// Linearisation at E*; requires R0 > 1.
  static QuasiPolynomial from_model(const ModelParams& p);

  complex kappa1(complex l) const { return l * l + r * l + k; }
  complex kappa2(complex l) const { return -r * l; }
  complex derivative(complex l) const;
};

complex char_value(const QuasiPolynomial& qp, complex l);

struct Rectangle {
  double re_lo;
  double re_hi;
  double im_lo;
  double im_hi;
};

struct SpectralRoot {
  complex value;
  double residual;
};

struct SpectrumReport {
  Rectangle rectangle;  ///< the contour actually used (possibly dilated)
  int count;            ///< winding number of char_value along the contour
  std::vector<SpectralRoot> roots;
  std::optional<double> max_real_part;
};

/// Counts roots inside the rectangle by the argument principle and refines
/// them by Newton iteration from a grid x grid array of seeds. The contour is
/// dilated by 1e-6 (up to 3 times) when it passes within 1e-8 of a root.
/// Throws std::runtime_error if the refined roots never match the count.
SpectrumReport roots_in_rectangle(const QuasiPolynomial& qp, Rectangle rect, int grid);

/// Positive root of l + mu0 = beta0 e^{-mu0 tau} e^{-l tau}: the growth rate
/// of the predator-free system. Throws std::domain_error when R0 <= 1.
double malthusian_rate(const ModelParams& p);

/// det(B) of the PDE eigenvalue problem at E2 from its closed-form entries.
/// Vanishes exactly where char_value does. Throws std::domain_error at the
/// pole l = -(mu0 + gamma0 y*).
complex pde_det_b(const ModelParams& p, complex l);

/// Same determinant with b1..b4 and Gamma evaluated from their defining age
/// integrals by adaptive Gauss-Kronrod quadrature on [0, a_max]. For validation.
complex pde_det_b_quadrature(const ModelParams& p, complex l, double a_max);

}  // namespace dlv
