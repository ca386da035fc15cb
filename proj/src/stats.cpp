#include <cmath>
#include <limits>

#include "malseq/error.hpp"
#include "malseq/eval.hpp"

namespace malseq {

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw EvalError("incomplete beta continued fraction did not converge");
}

TTestResult t_from_differences(const std::vector<double>& d) {
  const std::size_t n = d.size();
  if (n < 2) throw EvalError("a t test needs at least two observations");
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw EvalError("zero variance: the t statistic is undefined");
  TTestResult r;
  r.df = static_cast<double>(n - 1);
  r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  r.p_two_sided = t_two_sided_p(r.t, r.df);
  return r;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw EvalError("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw EvalError("incomplete beta needs 0 <= x <= 1");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw EvalError("degrees of freedom must be positive");
  if (std::isnan(t)) throw EvalError("t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw EvalError("paired samples differ in length");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return t_from_differences(d);
}

TTestResult one_sample_t_test(const std::vector<double>& xs, double mu) {
  std::vector<double> d(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) d[i] = xs[i] - mu;
  return t_from_differences(d);
}

}  // namespace malseq
