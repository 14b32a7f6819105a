#pragma once

// Truncated Hermite model of the Gel'fand triple S(R) c L2(R) c S^x(R).
//
// A test function is represented by its coefficients c_n = <f, h_n> in the
// orthonormal Hermite basis, n < N. A tempered distribution F is represented
// by the pairings <h_n, F>. The pairing <f, F> is linear in f and
// conjugate-linear in F, extending the L2 inner product.

#include <cstddef>
#include <random>
#include <vector>

#include "riggedframes/types.hpp"

namespace rigged {

/// L2-orthonormal Hermite function h_n(x).
double hermite_eval(int n, double x);

/// h_0(x), ..., h_{count-1}(x) from one pass of the recurrence.
std::vector<double> hermite_table(int count, double x);

/// Index k of the seminorm p_k(f) = (sum (1+n)^k |c_n|^2)^{1/2}.
struct SeminormIndex {
  int k = 0;
};

class TestFunction {
 public:
  TestFunction() = default;
  explicit TestFunction(CVector coeffs);

  static TestFunction zero(int truncation);
  /// The Hermite function h_n inside a truncation of size `truncation`.
  static TestFunction basis(int n, int truncation);
  /// Coefficients drawn i.i.d. from a complex unit Gaussian.
  static TestFunction random(int truncation, std::mt19937_64& rng);

  int truncation() const { return static_cast<int>(coeffs_.size()); }
  const CVector& coeffs() const { return coeffs_; }
  cplx operator[](int n) const { return coeffs_[n]; }

  double norm() const { return coeffs_.norm(); }
  /// Pointwise value sum_n c_n h_n(x).
  cplx value_at(double x) const;

  TestFunction operator+(const TestFunction& other) const;
  TestFunction operator-(const TestFunction& other) const;
  TestFunction operator*(cplx scale) const;

 private:
  CVector coeffs_;
};

class TemperedDistributionSample {
 public:
  TemperedDistributionSample() = default;
  explicit TemperedDistributionSample(CVector pairings);

  static TemperedDistributionSample zero(int truncation);
  /// The L2 embedding of a test function: <h_n, g> = conj(c_n(g)).
  static TemperedDistributionSample embed(const TestFunction& g);
  /// Point evaluation delta_x: <h_n, delta_x> = h_n(x).
  static TemperedDistributionSample dirac(double x, int truncation);

  int truncation() const { return static_cast<int>(pairings_.size()); }
  /// Values <h_n, F>.
  const CVector& pairings() const { return pairings_; }

  /// The test function g with embed(g) equal to this sample.
  TestFunction representer() const;

 private:
  CVector pairings_;
};

struct DerivativeResult {
  TestFunction derivative;
  /// Coefficient of h_N dropped by the truncation.
  cplx spill{0.0, 0.0};

  double spill_magnitude() const { return std::abs(spill); }
};

/// f' via h_n' = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1}.
DerivativeResult derivative_coeffs(const TestFunction& f);

enum class FourierDirection { Forward, Inverse };

/// Fourier transform in coefficient space: c_n -> (-i)^n c_n (forward) or i^n c_n.
TestFunction fourier_coeffs(const TestFunction& f,
                            FourierDirection direction = FourierDirection::Forward);

/// (-i)^n, exact for every n.
cplx minus_i_power(int n);

/// <f, g> = sum_n c_n(f) conj(c_n(g)).
cplx inner_product(const TestFunction& f, const TestFunction& g);

double seminorm(const TestFunction& f, SeminormIndex k);

/// Diagonal (1+n)^{k/2}, so that seminorm(f, k) = |weights .* c|.
RVector seminorm_weights(int truncation, SeminormIndex k);

/// <f, F> = sum_n c_n(f) <h_n, F>.
cplx pair(const TestFunction& f, const TemperedDistributionSample& F);

}  // namespace rigged
