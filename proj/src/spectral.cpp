#include "dlv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dlv/model.hpp"

namespace dlv {

namespace {

constexpr int kPointsPerSide = 4096;
constexpr double kBoundaryClearance = 1e-8;
constexpr double kDilation = 1e-6;
constexpr int kDilationRetries = 3;
constexpr int kSeedRetries = 3;
constexpr double kMergeDistance = 1e-8;
constexpr double kPi = std::numbers::pi;

struct Contour {
  double winding = 0.0;
  double min_modulus = std::numeric_limits<double>::infinity();
};

// Phase change of f from a to b along the straight segment, splitting the
// segment while any sub-step turns by more than pi / 2.
double phase_change(const QuasiPolynomial& qp, complex a, complex fa, complex b, complex fb,
                    int depth, Contour& c) {
  const double step = std::arg(fb / fa);
  if (std::abs(step) <= kPi / 2.0 || depth == 0) return step;
  const complex mid = 0.5 * (a + b);
  const complex fm = char_value(qp, mid);
  c.min_modulus = std::min(c.min_modulus, std::abs(fm));
  return phase_change(qp, a, fa, mid, fm, depth - 1, c) +
         phase_change(qp, mid, fm, b, fb, depth - 1, c);
}

Contour trace(const QuasiPolynomial& qp, const Rectangle& r) {
  const complex corners[5] = {{r.re_lo, r.im_lo}, {r.re_hi, r.im_lo}, {r.re_hi, r.im_hi},
                              {r.re_lo, r.im_hi}, {r.re_lo, r.im_lo}};
  Contour c;
  complex z = corners[0];
  complex fz = char_value(qp, z);
  c.min_modulus = std::abs(fz);
  for (int side = 0; side < 4; ++side) {
    for (int i = 1; i <= kPointsPerSide; ++i) {
      const double s = static_cast<double>(i) / kPointsPerSide;
      const complex next = corners[side] + s * (corners[side + 1] - corners[side]);
      const complex fnext = char_value(qp, next);
      c.min_modulus = std::min(c.min_modulus, std::abs(fnext));
      c.winding += phase_change(qp, z, fz, next, fnext, 40, c);
      z = next;
      fz = fnext;
    }
  }
  c.winding /= 2.0 * kPi;
  return c;
}

bool inside(const Rectangle& r, complex z) {
  return z.real() >= r.re_lo && z.real() <= r.re_hi && z.imag() >= r.im_lo &&
         z.imag() <= r.im_hi;
}

double tolerance(complex z) { return 1e-10 * (1.0 + std::norm(z)); }

std::vector<SpectralRoot> refine(const QuasiPolynomial& qp, const Rectangle& r, int grid) {
  std::vector<SpectralRoot> roots;
  const double dre = (r.re_hi - r.re_lo) / grid;
  const double dim = (r.im_hi - r.im_lo) / grid;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      complex z{r.re_lo + (i + 0.5) * dre, r.im_lo + (j + 0.5) * dim};
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        const complex dz = char_value(qp, z) / qp.derivative(z);
        z -= dz;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) break;
        if (std::abs(dz) <= 1e-14 * (1.0 + std::abs(z))) {
          converged = true;
          break;
        }
      }
      if (!converged || !inside(r, z)) continue;
      const double res = std::abs(char_value(qp, z));
      if (res > tolerance(z)) continue;
      const bool seen = std::any_of(roots.begin(), roots.end(), [&](const SpectralRoot& o) {
        return std::abs(o.value - z) < kMergeDistance;
      });
      if (!seen) roots.push_back({z, res});
    }
  }
  std::sort(roots.begin(), roots.end(), [](const SpectralRoot& a, const SpectralRoot& b) {
    if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return roots;
}

using ComplexFn = std::function<complex(double)>;

complex integrate_adaptive(const ComplexFn& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol);
}

}  // namespace

QuasiPolynomial QuasiPolynomial::from_model(const ModelParams& p) {
  const Equilibrium e = require_coexistence(p);
  return {p.recruitment(), p.delta() * p.gamma0() * e.y, p.tau()};
}

complex QuasiPolynomial::derivative(complex l) const {
  const complex decay = std::exp(-l * tau);
  return 2.0 * l + r - r * decay + r * l * tau * decay;
}

complex char_value(const QuasiPolynomial& qp, complex l) {
  return qp.kappa1(l) + qp.kappa2(l) * std::exp(-l * qp.tau);
}

SpectrumReport roots_in_rectangle(const QuasiPolynomial& qp, Rectangle rect, int grid) {
  if (!(rect.re_hi > rect.re_lo) || !(rect.im_hi > rect.im_lo)) {
    throw std::invalid_argument("spectrum: empty rectangle");
  }
  if (grid < 1) throw std::invalid_argument("spectrum: grid must be >= 1");

  Contour contour = trace(qp, rect);
  for (int retry = 0; contour.min_modulus < kBoundaryClearance; ++retry) {
    if (retry == kDilationRetries) {
      throw std::runtime_error("spectrum: contour keeps passing through a root");
    }
    rect = {rect.re_lo - kDilation, rect.re_hi + kDilation, rect.im_lo - kDilation,
            rect.im_hi + kDilation};
    contour = trace(qp, rect);
  }
  const int count = static_cast<int>(std::lround(contour.winding));

  std::vector<SpectralRoot> roots;
  for (int attempt = 0; attempt <= kSeedRetries; ++attempt, grid *= 2) {
    roots = refine(qp, rect, grid);
    if (static_cast<int>(roots.size()) == count) break;
    if (attempt == kSeedRetries) {
      throw std::runtime_error("spectrum: winding number " + std::to_string(count) +
                               " but " + std::to_string(roots.size()) + " refined roots");
    }
  }

  SpectrumReport report{rect, count, std::move(roots), std::nullopt};
  for (const auto& root : report.roots) {
    const double re = root.value.real();
    if (!report.max_real_part || re > *report.max_real_part) report.max_real_part = re;
  }
  return report;
}

double malthusian_rate(const ModelParams& p) {
  if (!(thresholds(p).r0 > 1.0)) {
    throw std::domain_error("malthusian_rate: requires R0 > 1");
  }
  const double r = p.recruitment();
  auto h = [&](double l) { return l + p.mu0() - r * std::exp(-l * p.tau()); };
  // h is increasing, h(0) = mu0 - r < 0 and h(r) > 0.
  double lo = 0.0;
  double hi = r;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

complex pde_det_b(const ModelParams& p, complex l) {
  const Equilibrium e = require_coexistence(p);
  const double tau = p.tau();
  const double pressure = e.y * p.gamma0();
  const complex m = p.mu0() + l + pressure;
  if (std::abs(m) < 1e-300) throw std::domain_error("pde_det_b: pole at l = -(mu0 + gamma0 y*)");
  const complex survival = std::exp(-(p.mu0() + l) * tau);
  const complex b1 = 1.0 - p.beta0() * survival / m;
  const complex b2 = p.delta() * p.beta0() / (p.alpha() * m);
  const complex b3 = p.alpha() * pressure * survival / m;
  const complex b4 = -l - p.delta() * pressure / m;
  return b1 * b4 - b2 * b3;
}

complex pde_det_b_quadrature(const ModelParams& p, complex l, double a_max) {
  const Equilibrium e = require_coexistence(p);
  const double tau = p.tau();
  if (!(a_max > tau)) throw std::invalid_argument("pde_det_b_quadrature: a_max must exceed tau");
  const double mu0 = p.mu0();
  const double beta0 = p.beta0();
  const double gamma0 = p.gamma0();
  const double ys = e.y;
  constexpr double tol = 1e-12;  // relative

  // beta and gamma vanish below tau, so every age integral starts there.
  auto pressure_integral = [&](double a) { return ys * gamma0 * std::max(a - tau, 0.0); };
  auto exposure = [&](double a) {
    return integrate_adaptive([&](double u) { return gamma0 * std::exp(-l * (a - u)); }, tau, a,
                              tol);
  };
  auto integral = [&](const ComplexFn& f) { return integrate_adaptive(f, tau, a_max, tol); };

  const complex big_gamma = integral([&](double a) {
    return complex(gamma0 * std::exp(-mu0 * a - pressure_integral(a)));
  });
  const complex b1 = 1.0 - integral([&](double a) {
                       return beta0 * std::exp(-(mu0 + l) * a - pressure_integral(a));
                     });
  const complex b2 = p.delta() / (p.alpha() * big_gamma) * integral([&](double a) {
                       return beta0 * std::exp(-mu0 * a - pressure_integral(a)) * exposure(a);
                     });
  const complex b3 = p.alpha() * ys * integral([&](double a) {
                       return gamma0 * std::exp(-(mu0 + l) * a - pressure_integral(a));
                     });
  const complex b4 = -l - p.delta() * ys / big_gamma * integral([&](double a) {
                       return gamma0 * std::exp(-mu0 * a - pressure_integral(a)) * exposure(a);
                     });
  return b1 * b4 - b2 * b3;
}

}  // namespace dlv
