#include "stats.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace coordlm {

namespace {

// modified Lentz evaluation of the incomplete-beta continued fraction
double betacf(double a, double b, double x) {
  const double eps = 1e-15, floor = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < floor) d = floor;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < floor) d = floor;
    c = 1.0 + aa / c;
    if (std::fabs(c) < floor) c = floor;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < floor) d = floor;
    c = 1.0 + aa / c;
    if (std::fabs(c) < floor) c = floor;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

double t_cdf(double t, int df) {
  double x = df / (df + t * t);
  double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double lead = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return lead * betacf(a, b, x) / a;
  return 1.0 - lead * betacf(b, a, 1.0 - x) / b;
}

double student_t_quantile(double p, int df) {
  if (df < 1) throw std::invalid_argument("student_t_quantile: df must be >= 1");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("student_t_quantile: p must be inside (0, 1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -student_t_quantile(1.0 - p, df);
  double hi = 1.0;
  while (t_cdf(hi, df) < p) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (t_cdf(mid, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

MeanCi t_interval(const std::vector<double>& xs, double level) {
  if (xs.empty()) throw std::invalid_argument("t_interval: empty sample");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("t_interval: level must be inside (0, 1)");
  MeanCi out;
  out.n = static_cast<int>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / out.n;
  if (out.n == 1) {
    out.lo = out.hi = out.mean;
    return out;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  double se = std::sqrt(ss / (out.n - 1)) / std::sqrt(static_cast<double>(out.n));
  double tq = student_t_quantile(1.0 - 0.5 * (1.0 - level), out.n - 1);
  out.lo = out.mean - tq * se;
  out.hi = out.mean + tq * se;
  return out;
}

}  // namespace coordlm
