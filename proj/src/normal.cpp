#include "gridcop/normal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gridcop/errors.hpp"

namespace gridcop {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kTwoPi = 6.283185307179586;
}  // namespace

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("norm_quantile: p must lie in (0,1), got " + std::to_string(p));
  }
  // Solve on the lower tail, where erfc keeps full relative accuracy, and
  // reflect. Start from the tail expansion of q = phi(x)/|x|, then Newton
  // with a Halley correction; convergence is quadratic and 6 steps reach
  // machine precision everywhere in (0, 1/2].
  const double q = std::min(p, 1.0 - p);
  double x;
  if (q >= 0.25) {
    x = -2.5066282746310002 * (0.5 - q);  // linear start near the center
  } else {
    double t = std::sqrt(-2.0 * std::log(q));
    t -= (std::log(t) + 0.5 * std::log(kTwoPi)) / t;
    x = -t;
  }
  for (int it = 0; it < 8; ++it) {
    const double err = norm_cdf(x) - q;
    const double d = norm_pdf(x);
    if (d <= 0.0) break;
    double step = err / d;
    step /= std::max(0.5, 1.0 + 0.5 * step * x);
    x -= step;
    if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return p < 0.5 ? x : -x;
}

namespace {

// Gauss-Legendre half-rules used by the bivariate normal quadrature.
const double kGX6[3] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969};
const double kGW6[3] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910};
const double kGX12[6] = {-0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
                         -0.5873179542866175, -0.3678314989981802, -0.1252334085114689};
const double kGW12[6] = {0.04717533638651183, 0.1069393259953184, 0.1600783285433462,
                         0.2031674267230659, 0.2334925365383548, 0.2491470458134028};
const double kGX20[10] = {-0.9931285991850949,  -0.9639719272779138, -0.9122344282513259,
                          -0.8391169718222188,  -0.7463319064601508, -0.6360536807265150,
                          -0.5108670019508271,  -0.3737060887154195, -0.2277858511416451,
                          -0.07652652113349734};
const double kGW20[10] = {0.01761400713915212, 0.04060142980038694, 0.06267204833410907,
                          0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                          0.1316886384491766,  0.1420961093183820,  0.1491729864726037,
                          0.1527533871307258};

// Genz's rewrite of the Drezner-Wesolowsky algorithm: upper-tail probability
// P(X > h, Y > k) for standard bivariate normal with correlation r.
double bvnd_upper(double h, double k, double r) {
  const double* gx;
  const double* gw;
  int lg;
  const double ar = std::abs(r);
  if (ar < 0.3) {
    gx = kGX6, gw = kGW6, lg = 3;
  } else if (ar < 0.75) {
    gx = kGX12, gw = kGW12, lg = 6;
  } else {
    gx = kGX20, gw = kGW20, lg = 10;
  }

  double hk = h * k;
  double bvn = 0.0;
  if (ar < 0.925) {
    if (ar > 0.0) {
      const double hs = (h * h + k * k) / 2.0;
      const double asr = std::asin(r);
      for (int i = 0; i < lg; ++i) {
        for (int is = -1; is <= 1; is += 2) {
          const double sn = std::sin(asr * (is * gx[i] + 1.0) / 2.0);
          bvn += gw[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
      }
      bvn = bvn * asr / (2.0 * kTwoPi);
    }
    bvn += norm_cdf(-h) * norm_cdf(-k);
  } else {
    if (r < 0.0) {
      k = -k;
      hk = -hk;
    }
    if (ar < 1.0) {
      const double as = (1.0 - r) * (1.0 + r);
      double a = std::sqrt(as);
      const double bs = (h - k) * (h - k);
      const double c = (4.0 - hk) / 8.0;
      const double d = (12.0 - hk) / 16.0;
      double asr = -(bs / as + hk) / 2.0;
      if (asr > -100.0) {
        bvn = a * std::exp(asr) *
              (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
      }
      if (-hk < 100.0) {
        const double b = std::sqrt(bs);
        const double sp = std::sqrt(kTwoPi) * norm_cdf(-b / a);
        bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
      }
      a /= 2.0;
      for (int i = 0; i < lg; ++i) {
        for (int is = -1; is <= 1; is += 2) {
          const double xs = a * (is * gx[i] + 1.0) * (a * (is * gx[i] + 1.0));
          const double rs = std::sqrt(1.0 - xs);
          asr = -(bs / xs + hk) / 2.0;
          if (asr > -100.0) {
            const double sp = 1.0 + c * xs * (1.0 + d * xs);
            const double ep = std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs;
            bvn += a * gw[i] * std::exp(asr) * (ep - sp);
          }
        }
      }
      bvn = -bvn / kTwoPi;
    }
    if (r > 0.0) {
      bvn += norm_cdf(-std::max(h, k));
    } else {
      bvn = -bvn;
      if (k > h) bvn += norm_cdf(k) - norm_cdf(h);
    }
  }
  return bvn;
}

}  // namespace

double bivariate_normal_cdf(double x, double y, double rho) {
  if (!(std::abs(rho) < 1.0)) {
    throw DomainError("bivariate_normal_cdf: |rho| must be < 1, got " + std::to_string(rho));
  }
  if (std::isnan(x) || std::isnan(y)) {
    throw DomainError("bivariate_normal_cdf: NaN coordinate");
  }
  const double p = bvnd_upper(-x, -y, rho);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace gridcop
