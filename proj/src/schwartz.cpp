#include "riggedframes/schwartz.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "riggedframes/errors.hpp"

namespace rigged {

namespace {

void require_same_truncation(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": truncation mismatch " + std::to_string(a) +
                         " vs " + std::to_string(b));
  }
}

}  // namespace

std::vector<double> hermite_table(int count, double x) {
  std::vector<double> h(static_cast<std::size_t>(std::max(count, 0)));
  if (count <= 0) return h;
  h[0] = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
  if (count == 1) return h;
  h[1] = std::numbers::sqrt2 * x * h[0];
  for (int n = 1; n + 1 < count; ++n) {
    const double np1 = n + 1.0;
    h[n + 1] = x * std::sqrt(2.0 / np1) * h[n] - std::sqrt(n / np1) * h[n - 1];
  }
  return h;
}

double hermite_eval(int n, double x) {
  if (n < 0) return 0.0;
  return hermite_table(n + 1, x)[static_cast<std::size_t>(n)];
}

TestFunction::TestFunction(CVector coeffs) : coeffs_(std::move(coeffs)) {}

TestFunction TestFunction::zero(int truncation) {
  return TestFunction(CVector::Zero(truncation));
}

TestFunction TestFunction::basis(int n, int truncation) {
  CVector c = CVector::Zero(truncation);
  if (n >= 0 && n < truncation) c[n] = 1.0;
  return TestFunction(std::move(c));
}

TestFunction TestFunction::random(int truncation, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector c(truncation);
  for (int n = 0; n < truncation; ++n) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    c[n] = cplx(re, im);
  }
  return TestFunction(std::move(c));
}

cplx TestFunction::value_at(double x) const {
  const auto h = hermite_table(truncation(), x);
  cplx sum = 0.0;
  for (int n = 0; n < truncation(); ++n) sum += coeffs_[n] * h[static_cast<std::size_t>(n)];
  return sum;
}

TestFunction TestFunction::operator+(const TestFunction& other) const {
  require_same_truncation(truncation(), other.truncation(), "TestFunction::operator+");
  return TestFunction(coeffs_ + other.coeffs_);
}

TestFunction TestFunction::operator-(const TestFunction& other) const {
  require_same_truncation(truncation(), other.truncation(), "TestFunction::operator-");
  return TestFunction(coeffs_ - other.coeffs_);
}

TestFunction TestFunction::operator*(cplx scale) const { return TestFunction(coeffs_ * scale); }

TemperedDistributionSample::TemperedDistributionSample(CVector pairings)
    : pairings_(std::move(pairings)) {}

TemperedDistributionSample TemperedDistributionSample::zero(int truncation) {
  return TemperedDistributionSample(CVector::Zero(truncation));
}

TemperedDistributionSample TemperedDistributionSample::embed(const TestFunction& g) {
  return TemperedDistributionSample(g.coeffs().conjugate());
}

TemperedDistributionSample TemperedDistributionSample::dirac(double x, int truncation) {
  const auto h = hermite_table(truncation, x);
  CVector p(truncation);
  for (int n = 0; n < truncation; ++n) p[n] = h[static_cast<std::size_t>(n)];
  return TemperedDistributionSample(std::move(p));
}

TestFunction TemperedDistributionSample::representer() const {
  return TestFunction(pairings_.conjugate());
}

DerivativeResult derivative_coeffs(const TestFunction& f) {
  const int N = f.truncation();
  CVector d = CVector::Zero(N);
  cplx spill = 0.0;
  for (int n = 0; n < N; ++n) {
    const cplx c = f[n];
    if (n > 0) d[n - 1] += std::sqrt(n / 2.0) * c;
    const cplx up = -std::sqrt((n + 1) / 2.0) * c;
    if (n + 1 < N) {
      d[n + 1] += up;
    } else {
      spill = up;
    }
  }
  return {TestFunction(std::move(d)), spill};
}

cplx minus_i_power(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

TestFunction fourier_coeffs(const TestFunction& f, FourierDirection direction) {
  CVector c = f.coeffs();
  for (int n = 0; n < f.truncation(); ++n) {
    const cplx phase =
        direction == FourierDirection::Forward ? minus_i_power(n) : std::conj(minus_i_power(n));
    c[n] *= phase;
  }
  return TestFunction(std::move(c));
}

cplx inner_product(const TestFunction& f, const TestFunction& g) {
  require_same_truncation(f.truncation(), g.truncation(), "inner_product");
  // Eigen's dot conjugates its first argument.
  return g.coeffs().dot(f.coeffs());
}

RVector seminorm_weights(int truncation, SeminormIndex k) {
  RVector w(truncation);
  for (int n = 0; n < truncation; ++n) w[n] = std::pow(1.0 + n, 0.5 * k.k);
  return w;
}

double seminorm(const TestFunction& f, SeminormIndex k) {
  const RVector w = seminorm_weights(f.truncation(), k);
  double sum = 0.0;
  for (int n = 0; n < f.truncation(); ++n) sum += w[n] * w[n] * std::norm(f[n]);
  return std::sqrt(sum);
}

cplx pair(const TestFunction& f, const TemperedDistributionSample& F) {
  require_same_truncation(f.truncation(), F.truncation(), "pair");
  return f.coeffs().cwiseProduct(F.pairings()).sum();
}

}  // namespace rigged
