#pragma once

namespace dlv {

/// Cubic Hermite interpolant on one interval of width `h`, evaluated at the
/// fractional position `s` in [0, 1].
inline double hermite(double y0, double d0, double y1, double d1, double h, double s) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
}

/// Derivative with respect to time of the same interpolant.
inline double hermite_slope(double y0, double d0, double y1, double d1, double h, double s) {
  const double s2 = s * s;
  const double dh00 = 6.0 * s2 - 6.0 * s;
  const double dh10 = 3.0 * s2 - 4.0 * s + 1.0;
  const double dh01 = -6.0 * s2 + 6.0 * s;
  const double dh11 = 3.0 * s2 - 2.0 * s;
  return (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1;
}

}  // namespace dlv
