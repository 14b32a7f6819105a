#include "riggedframes/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "riggedframes/duality.hpp"
#include "riggedframes/frame_ops.hpp"
#include "riggedframes/riesz_fischer.hpp"

namespace rigged {

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      passed = false;
      detail << "FAILED: " << what << "; ";
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

KernelMatrix stage_kernel(const MapSpec& spec, int N) {
  return sample_kernel(spec, default_stage(N).grid(), N);
}

// 1. Dirac deltas form a Gel'fand basis.
void dirac_gelfand(Outcome& out) {
  const auto omega = stage_kernel(MapSpec::dirac(), 32);
  const auto S = frame_operator(omega);
  const double defect = max_abs(S.S - CMatrix::Identity(32, 32));
  out.detail << "|S-I|_max=" << fmt(defect) << " ";
  out.require(defect <= 1e-10, "|S-I|_max <= 1e-10");
  const auto report = classify(MapSpec::dirac(), default_ladder(32));
  for (Label l : {Label::Parseval, Label::GelfandBasis, Label::RieszBasis}) {
    out.require(report.has(l), "label " + std::string(to_string(l)));
  }
}

// 2. Fourier map is a Gel'fand basis by Plancherel.
void fourier_gelfand(Outcome& out) {
  const int N = 32;
  const auto stage = default_stage(N);
  const auto omega = sample_kernel(MapSpec::fourier(), stage.grid(), N);
  const double defect = max_abs(frame_operator(omega).S - CMatrix::Identity(N, N));
  out.detail << "L=" << fmt(stage.half_width) << " |S-I|_max=" << fmt(defect) << " ";
  out.require(defect <= 1e-8, "|S-I|_max <= 1e-8");
  double worst = 0.0;
  for (int n = 0; n < N; ++n) {
    const auto xi = analysis(omega, TestFunction::basis(n, N));
    for (int j = 0; j < omega.nodes(); ++j) {
      const double x = omega.grid().nodes[static_cast<std::size_t>(j)];
      worst = std::max(worst, std::abs(xi.values[j] - minus_i_power(n) * hermite_eval(n, x)));
    }
  }
  out.detail << "eigenrelation=" << fmt(worst);
  out.require(worst <= 1e-10, "analysis(h_n) = (-i)^n h_n to 1e-10");
}

// 3. The weight 2 + sin(x) gives a Riesz basis with bounds [1, 9].
void riesz_weight(Outcome& out) {
  const auto spec = MapSpec::weighted_dirac("2+sin(x)");
  const auto ladder = default_ladder(32);
  for (const auto& stage : ladder.stages) {
    const auto b = frame_bounds(frame_operator(sample_kernel(spec, stage.grid(), stage.truncation)));
    out.require(b.lower >= 1.0 - 1e-9 && b.upper <= 9.0 + 1e-9,
                "spectrum in [1,9] at N=" + std::to_string(stage.truncation));
  }
  const auto riesz = riesz_check(spec, ladder);
  out.detail << "sigma=[" << fmt(riesz.sigma_min) << "," << fmt(riesz.sigma_max) << "] ";
  out.require(riesz.riesz, "riesz_check");
  const auto pair = canonical_dual(stage_kernel(spec, 32));
  const auto db = dual_bounds(pair);
  out.detail << "dual=[" << fmt(db.lower_theta) << "," << fmt(db.upper_theta) << "]";
  out.require(db.lower_theta >= 1.0 / 9.0 - 1e-8 && db.upper_theta <= 1.0 + 1e-8,
              "dual bounds in [1/9, 1]");
}

// 4. Reconstruction through the canonical dual, both formula orders.
void reconstruction(Outcome& out) {
  const int N = 16;
  const auto pair = canonical_dual(stage_kernel(MapSpec::weighted_dirac("2+sin(x)"), N));
  std::mt19937_64 rng(kDefaultSeed);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto f = TestFunction::random(N, rng);
    worst = std::max(worst, reconstruct(pair, f, ReconstructionOrder::DualSynthesis).rel_error);
    worst = std::max(worst, reconstruct(pair, f, ReconstructionOrder::FrameSynthesis).rel_error);
  }
  out.detail << "worst rel error=" << fmt(worst);
  out.require(worst <= 1e-8, "reconstruction error <= 1e-8");
}

// 5. delta' is Bessel (seminorm p_1) but has no upper frame bound.
void derivative_delta(Outcome& out) {
  const auto spec = MapSpec::dirac_derivative();
  const auto ladder = ladder_from_truncations({8, 16, 32, 64});
  double prev_upper = 0.0;
  double oracle_defect = 0.0;
  for (const auto& stage : ladder.stages) {
    const int N = stage.truncation;
    const auto S = frame_operator(sample_kernel(spec, stage.grid(), N));
    const auto b = frame_bounds(S);
    if (prev_upper > 0.0) {
      out.require(b.upper > prev_upper, "B_N strictly increasing at N=" + std::to_string(N));
      out.require(b.upper / prev_upper >= 1.5, "B_2N/B_N >= 1.5 at N=" + std::to_string(N));
      out.detail << "B" << N << "/B" << N / 2 << "=" << fmt(b.upper / prev_upper) << " ";
    }
    prev_upper = b.upper;
    const auto oracle = derivative_gram_oracle(N);
    for (int m = 0; m < N; ++m) {
      for (int n = 0; n < N; ++n) {
        oracle_defect = std::max(
            oracle_defect, std::abs(S.S(m, n) - oracle[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)]));
      }
    }
  }
  out.detail << "oracle=" << fmt(oracle_defect) << " ";
  out.require(oracle_defect <= 1e-8, "S matches pentadiagonal oracle to 1e-8");
  const auto report = classify(spec, ladder);
  out.detail << "bessel_k=" << report.bessel_k;
  out.require(report.bessel_k == 1, "Bessel seminorm witness k = 1");
  out.require(!report.has(Label::UpperSemiFrame), "not an upper semi-frame");
}

// 6. The weight 1 + x^2 gives a lower semi-frame with A = 1.
void lower_semiframe(Outcome& out) {
  const auto spec = MapSpec::weighted_dirac("1+x^2");
  double prev_upper = 0.0;
  for (const auto& stage : default_ladder(64).stages) {
    const auto b = frame_bounds(frame_operator(sample_kernel(spec, stage.grid(), stage.truncation)));
    out.require(b.lower >= 1.0 - 1e-9, "A_N >= 1 at N=" + std::to_string(stage.truncation));
    if (prev_upper > 0.0) {
      out.detail << "ratio" << stage.truncation << "=" << fmt(b.upper / prev_upper) << " ";
      out.require(b.upper / prev_upper >= 3.0, "B ratio >= 3 at N=" + std::to_string(stage.truncation));
    }
    prev_upper = b.upper;
  }
}

// 7. A compactly supported bump is bounded Bessel but not total.
void bump_bessel(Outcome& out) {
  const auto spec = MapSpec::bump_dirac(-1.0, 1.0);
  const auto inside = build_grid(1.0, 8, 16);
  for (const auto& stage : default_ladder(64).stages) {
    const int N = stage.truncation;
    const auto omega = sample_kernel(spec, stage.grid(), N);
    const auto b = frame_bounds(frame_operator(omega));
    out.require(b.upper <= 1.0 + 1e-9, "B_N <= 1 at N=" + std::to_string(N));
    if (N < 32) continue;
    const auto tot = totality_test(omega, 1e-6);
    out.require(!tot.total, "not total at N=" + std::to_string(N));
    double mass_inside = 0.0;
    for (int j = 0; j < inside.size(); ++j) {
      mass_inside += inside.weights[static_cast<std::size_t>(j)] *
                     std::norm(tot.witness.value_at(inside.nodes[static_cast<std::size_t>(j)]));
    }
    const double outside = 1.0 - mass_inside / std::pow(tot.witness.norm(), 2);
    out.detail << "N=" << N << " outside=" << fmt(outside) << " ";
    out.require(outside >= 0.99, "witness mass outside support >= 0.99 at N=" + std::to_string(N));
  }
}

// 8. Moment problem on a coarse grid: consistent data is solved exactly,
// recovering f0 modulo the null space, and the envelope condition holds.
void moment_problem(Outcome& out) {
  const int N = 32;
  const auto omega = coarse_kernel(MapSpec::dirac(), N);
  out.require(omega.nodes() == N / 2, "coarse grid has N/2 nodes");
  std::mt19937_64 rng(kDefaultSeed);
  double worst_residual = 0.0;
  double worst_recovery = 0.0;
  double worst_coset = 0.0;
  bool envelope_ok = true;
  for (int t = 0; t < 50; ++t) {
    const auto f0 = TestFunction::random(N, rng);
    const auto h = analysis(omega, f0);
    const auto sol = solve_moment(omega, h);
    const CMatrix& Z = sol.null_basis;
    const CVector f0_rep = f0.coeffs() - Z * (Z.adjoint() * f0.coeffs());
    const CVector diff = sol.f.coeffs() - f0.coeffs();
    worst_residual = std::max(worst_residual, sol.residual);
    worst_recovery = std::max(worst_recovery, (sol.f.coeffs() - f0_rep).norm() / f0.norm());
    worst_coset = std::max(worst_coset, (diff - Z * (Z.adjoint() * diff)).norm() / f0.norm());
    for (int k = 0; k <= 2; ++k) {
      const auto env = envelope_condition_check(omega, h, SeminormIndex{k});
      envelope_ok = envelope_ok && env.satisfied &&
                    env.r <= seminorm(f0, SeminormIndex{k}) * (1.0 + 1e-6);
    }
  }
  out.detail << "residual=" << fmt(worst_residual) << " recovery=" << fmt(worst_recovery)
             << " coset=" << fmt(worst_coset);
  out.require(worst_residual <= 1e-10, "residual <= 1e-10");
  out.require(worst_recovery <= 1e-8, "f0 recovered (mod null space) to 1e-8");
  out.require(worst_coset <= 1e-8, "f - f0 lies in the null space");
  out.require(envelope_ok, "envelope necessity r <= p_k(f0)(1+1e-6)");
}

// 9. Adjoint identity and S = T T^x for every built-in map.
void adjoint_identities(Outcome& out) {
  const int N = 32;
  const std::vector<MapSpec> maps = {MapSpec::dirac(),
                                     MapSpec::fourier(),
                                     MapSpec::dirac_derivative(),
                                     MapSpec::weighted_dirac("2+sin(x)"),
                                     MapSpec::weighted_dirac("1+x^2"),
                                     MapSpec::bump_dirac(-1.0, 1.0)};
  std::mt19937_64 rng(kDefaultSeed);
  std::normal_distribution<double> gauss;
  double worst_adjoint = 0.0;
  double worst_factor = 0.0;
  for (const auto& spec : maps) {
    const auto omega = stage_kernel(spec, N);
    const int M = omega.nodes();
    for (int t = 0; t < 100; ++t) {
      CVector v(M);
      for (int j = 0; j < M; ++j) {
        const double re = gauss(rng);
        v[j] = cplx(re, gauss(rng));
      }
      const GridFunction xi(std::move(v));
      const auto g = TestFunction::random(N, rng);
      const auto xi_g = analysis(omega, g);
      const cplx lhs = std::conj(pair(g, synthesis(omega, xi)));
      const cplx rhs = l2x_inner(xi, xi_g, omega.grid());
      const double scale = l2x_norm(xi, omega.grid()) * l2x_norm(xi_g, omega.grid());
      worst_adjoint = std::max(worst_adjoint, std::abs(lhs - rhs) / (scale > 0.0 ? scale : 1.0));
    }
    const auto S = frame_operator(omega);
    CMatrix TTx(N, N);
    for (int n = 0; n < N; ++n) {
      TTx.col(n) = synthesis(omega, analysis(omega, TestFunction::basis(n, N))).representer().coeffs();
    }
    worst_factor = std::max(worst_factor, max_abs(S.S - TTx));
  }
  out.detail << "adjoint=" << fmt(worst_adjoint) << " |S-TT^x|=" << fmt(worst_factor);
  out.require(worst_adjoint <= 1e-10, "adjoint defect <= 1e-10");
  out.require(worst_factor <= 1e-12, "|S - T T^x|_max <= 1e-12");
}

// 10. Continuity constants of the moment problem.
void continuity(Outcome& out) {
  const double c_dirac = continuity_constant(stage_kernel(MapSpec::dirac(), 32), SeminormIndex{0});
  const double c_weight =
      continuity_constant(stage_kernel(MapSpec::weighted_dirac("2+sin(x)"), 32), SeminormIndex{0});
  out.detail << "C_dirac=" << fmt(c_dirac) << " C_2+sin=" << fmt(c_weight) << " ";
  out.require(std::abs(c_dirac - 1.0) <= 1e-8, "dirac C = 1 +- 1e-8");
  out.require(c_weight <= 1.0 + 1e-8, "2+sin(x) C <= 1 + 1e-8");
  double prev = 0.0;
  for (const auto& stage : default_ladder(64).stages) {
    const auto omega = sample_kernel(MapSpec::dirac_derivative(), stage.grid(), stage.truncation);
    const double c1 = continuity_constant(omega, SeminormIndex{1});
    const double c0 = continuity_constant(omega, SeminormIndex{0});
    out.require(std::isfinite(c1), "delta' C finite at k=1");
    if (prev > 0.0) {
      out.detail << "ratio" << stage.truncation << "=" << fmt(c0 / prev) << " ";
      out.require(c0 / prev >= 1.3, "delta' C grows >= 1.3x at k=0");
    }
    prev = c0;
  }
}

struct Criterion {
  const char* name;
  double budget;
  void (*fn)(Outcome&);
};

const std::vector<Criterion>& table() {
  static const std::vector<Criterion> t = {
      {"dirac deltas form a Gel'fand basis", 5.0, dirac_gelfand},
      {"fourier map is a Gel'fand basis", 5.0, fourier_gelfand},
      {"weight 2+sin(x) gives a Riesz basis", 10.0, riesz_weight},
      {"canonical dual reconstruction", 5.0, reconstruction},
      {"delta' is Bessel but not an upper semi-frame", 10.0, derivative_delta},
      {"weight 1+x^2 gives a lower semi-frame", 10.0, lower_semiframe},
      {"bump map is bounded Bessel, not total", 10.0, bump_bessel},
      {"moment problem on a coarse grid", 5.0, moment_problem},
      {"adjoint and factorization identities", 5.0, adjoint_identities},
      {"continuity constants", 5.0, continuity},
  };
  return t;
}

}  // namespace

std::vector<std::vector<double>> derivative_gram_oracle(int truncation) {
  const int N = truncation;
  std::vector<std::vector<double>> D(static_cast<std::size_t>(N + 1),
                                     std::vector<double>(static_cast<std::size_t>(N), 0.0));
  for (int n = 0; n < N; ++n) {
    if (n > 0) D[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(n)] = std::sqrt(n / 2.0);
    D[static_cast<std::size_t>(n + 1)][static_cast<std::size_t>(n)] = -std::sqrt((n + 1) / 2.0);
  }
  std::vector<std::vector<double>> G(static_cast<std::size_t>(N),
                                     std::vector<double>(static_cast<std::size_t>(N), 0.0));
  for (int m = 0; m < N; ++m) {
    for (int n = 0; n < N; ++n) {
      double s = 0.0;
      for (int r = 0; r <= N; ++r) {
        s += D[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)] *
             D[static_cast<std::size_t>(r)][static_cast<std::size_t>(n)];
      }
      G[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)] = s;
    }
  }
  return G;
}

int criterion_count() { return static_cast<int>(table().size()); }

CriterionResult run_criterion(int id) {
  const auto& c = table().at(static_cast<std::size_t>(id - 1));
  CriterionResult r;
  r.id = id;
  r.name = c.name;
  r.budget_seconds = c.budget;
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.fn(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.require(r.seconds <= c.budget, "within " + fmt(c.budget) + " s budget");
  r.passed = out.passed;
  r.detail = out.detail.str();
  return r;
}

std::vector<CriterionResult> run_acceptance() {
  std::vector<CriterionResult> results;
  for (int id = 1; id <= criterion_count(); ++id) results.push_back(run_criterion(id));
  return results;
}

}  // namespace rigged
