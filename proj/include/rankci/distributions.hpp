#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace rankci {

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------
// Normal distribution
// ---------------------------------------------------------------------

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Inverse standard normal CDF: Acklam's rational minimax approximation
// (|eps| < 1.2e-9) polished with one Newton step through normal_cdf,
// which brings the error to ~1e-15.
// http://home.online.no/~pjacklam/notes/invnorm/
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("normal_quantile: p must be in (0,1)");

  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double err = normal_cdf(x) - p;
  x -= err / normal_pdf(x);
  return x;
}

// Student's t with one degree of freedom and location zero.
inline double cauchy_pdf(double x) { return 1.0 / (kPi * (1.0 + x * x)); }

// ---------------------------------------------------------------------
// Regularized lower incomplete gamma P(a, x)
// (series + Lentz continued fraction, as in Numerical Recipes 6.2)
// ---------------------------------------------------------------------

namespace detail {

inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_contfrac(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double mult = d * c;
    h *= mult;
    if (std::fabs(mult - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

}  // namespace detail

// ---------------------------------------------------------------------
// Tracy-Widom beta=1
//
// Shifted-gamma fit of Chiani (2014): TW1 ~ Gamma(k, theta) - alpha with
// (k, theta, alpha) matched to the exact TW1 mean, variance and skewness.
// CDF error of the fit is ~1e-4, ample for thresholding a density
// against delta0 = 1e-2.
// ---------------------------------------------------------------------

namespace detail {
inline constexpr double kTw1Mean = -1.2065335745820;
inline constexpr double kTw1Var = 1.607781034581;
inline constexpr double kTw1Skew = 0.29346452408;
inline const double kTwShape = 4.0 / (kTw1Skew * kTw1Skew);
inline const double kTwScale = std::sqrt(kTw1Var) * kTw1Skew / 2.0;
inline const double kTwShift = kTwShape * kTwScale - kTw1Mean;
}  // namespace detail

inline double tw1_pdf(double x) {
  const double y = (x + detail::kTwShift) / detail::kTwScale;
  if (y <= 0.0) return 0.0;
  const double logp = (detail::kTwShape - 1.0) * std::log(y) - y -
                      std::lgamma(detail::kTwShape);
  return std::exp(logp) / detail::kTwScale;
}

inline double tw1_cdf(double x) {
  const double y = (x + detail::kTwShift) / detail::kTwScale;
  if (y <= 0.0) return 0.0;
  return detail::gamma_p(detail::kTwShape, y);
}

// ---------------------------------------------------------------------
// Adaptive Gauss7/Kronrod15 quadrature
// ---------------------------------------------------------------------

namespace detail {

// abscissae (positive half), G7 weights, K15 weights
inline constexpr double kGk15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529}};

template <class F>
double gk15(const F& f, double a, double b, double& err) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double y0 = f(mid);
  double g7 = kGk15[0][1] * y0;
  double k15 = kGk15[0][2] * y0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGk15[i][0];
    const double y = f(mid + dx) + f(mid - dx);
    g7 += kGk15[i][1] * y;
    k15 += kGk15[i][2] * y;
  }
  g7 *= half;
  k15 *= half;
  err = std::fabs(k15 - g7);
  return k15;
}

template <class F>
double adaptive_quad_impl(const F& f, double a, double b, double tol, int depth) {
  double err;
  const double whole = gk15(f, a, b, err);
  if (err <= tol || depth >= 48) return whole;
  const double mid = 0.5 * (a + b);
  return adaptive_quad_impl(f, a, mid, tol * 0.5, depth + 1) +
         adaptive_quad_impl(f, mid, b, tol * 0.5, depth + 1);
}

}  // namespace detail

template <class F>
double adaptive_quadrature(const F& f, double a, double b, double tol = 1e-10) {
  if (a == b) return 0.0;
  return detail::adaptive_quad_impl(f, a, b, tol, 0);
}

// ---------------------------------------------------------------------
// Marchenko-Pastur law, gamma in (0, 1]
// ---------------------------------------------------------------------

struct MpLaw {
  double gamma;
  double lower_edge;
  double upper_edge;

  static MpLaw with_gamma(double g) {
    if (!(g > 0.0 && g <= 1.0))
      throw std::domain_error("MpLaw: gamma must be in (0,1]");
    const double s = std::sqrt(g);
    return MpLaw{g, (1.0 - s) * (1.0 - s), (1.0 + s) * (1.0 + s)};
  }
};

inline double mp_pdf(double x, const MpLaw& law) {
  if (x <= law.lower_edge || x >= law.upper_edge) return 0.0;
  return std::sqrt((law.upper_edge - x) * (x - law.lower_edge)) /
         (2.0 * kPi * law.gamma * x);
}

namespace detail {

// Integrates f against the MP density using the substitution
// lambda = a + (b - a) sin^2 t, which removes the square-root edge
// singularities:
//   integral f dF = (b-a)^2/(pi*gamma) * int_0^{t_hi} f(l(t)) sin^2 cos^2 / l(t) dt
template <class F>
double mp_integrate(const F& f, const MpLaw& law, double upper, double tol) {
  const double a = law.lower_edge;
  const double width = law.upper_edge - a;
  const double t_hi =
      upper >= law.upper_edge
          ? kPi / 2.0
          : std::asin(std::sqrt(std::max(0.0, (upper - a) / width)));
  const double scale = width * width / (kPi * law.gamma);
  auto g = [&](double t) {
    const double s = std::sin(t);
    const double c = std::cos(t);
    const double lam = a + width * s * s;
    return f(lam) * s * s * c * c / lam;
  };
  return scale * adaptive_quadrature(g, 0.0, t_hi, tol);
}

}  // namespace detail

inline double mp_cdf(double x, const MpLaw& law) {
  if (x <= law.lower_edge) return 0.0;
  if (x >= law.upper_edge) return 1.0;
  return detail::mp_integrate([](double) { return 1.0; }, law, x, 1e-11);
}

// Quantile of the MP law by bisection on the CDF.
inline double mp_quantile(double q, const MpLaw& law) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::domain_error("mp_quantile: q must be in [0,1]");
  if (q <= 0.0) return law.lower_edge;
  if (q >= 1.0) return law.upper_edge;
  double lo = law.lower_edge, hi = law.upper_edge;
  for (int i = 0; i < 70; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mp_cdf(mid, law) < q ? lo : hi) = mid;
    if (hi - lo < 1e-13 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

// MP functional F_gamma(g^power) for g(lambda) = (rho - lambda)^{-1};
// rho must lie strictly above the upper support edge.
inline double mp_functional(int power, double rho, const MpLaw& law) {
  if (power != 2 && power != 3)
    throw std::invalid_argument("mp_functional: power must be 2 or 3");
  if (!(rho > law.upper_edge))
    throw std::domain_error("mp_functional: rho must exceed the MP upper edge");
  auto f = [&](double lam) {
    const double g = 1.0 / (rho - lam);
    return power == 2 ? g * g : g * g * g;
  };
  return detail::mp_integrate(f, law, law.upper_edge, 1e-12);
}

// ---------------------------------------------------------------------
// First-order Edgeworth polynomial
//   p1(x) = (1/6) k2^{-3/2} k3 (1 - x^2) - k2^{-1/2} mu
// ---------------------------------------------------------------------

struct EdgeworthCoefficients {
  double kappa2 = 0.0;
  double kappa3 = 0.0;
  // Bai-Silverstein CLT mean term; no closed form is available, so it
  // defaults to zero and can be overridden by the caller.
  double mu_term = 0.0;
  double rho_center = 0.0;
};

inline double edgeworth_p1(double x, const EdgeworthCoefficients& c) {
  if (!(c.kappa2 > 0.0))
    throw std::domain_error("edgeworth_p1: kappa2 must be positive");
  return c.kappa3 * (1.0 - x * x) / (6.0 * std::pow(c.kappa2, 1.5)) -
         c.mu_term / std::sqrt(c.kappa2);
}

// Edgeworth-corrected density phi(x) * (1 + n^{-1/2} p1(x)), clipped at
// zero since first-order expansions can dip negative in the tails.
inline double edgeworth_density(double x, double n, const EdgeworthCoefficients& c) {
  const double v = normal_pdf(x) * (1.0 + edgeworth_p1(x, c) / std::sqrt(n));
  return v > 0.0 ? v : 0.0;
}

}  // namespace rankci
