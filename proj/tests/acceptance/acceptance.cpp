// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cascade_lab/cascade/builders.hpp"
#include "cascade_lab/cascade/diagnostics.hpp"
#include "cascade_lab/cascade/integrator.hpp"
#include "cascade_lab/cascade/profiles.hpp"
#include "cascade_lab/regularity/analyze.hpp"
#include "cascade_lab/spectral/bump.hpp"
#include "cascade_lab/spectral/cascade_operator.hpp"
#include "cascade_lab/spectral/divergence_potential.hpp"
#include "cascade_lab/spectral/operators.hpp"
#include "cascade_lab/spectral/wavelet_basis.hpp"

using namespace cascade_lab;
using cascade::CascadeConfig;
using cascade::CascadeState;
using cascade::CascadeTrajectory;
using spectral::GridSpec;
using spectral::ScalarField;
using spectral::Vec3;
using spectral::VectorField;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

CascadeState random_state(std::mt19937_64& rng, cascade::ShellRange r, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  CascadeState x(r);
  for (double& v : x.values()) v = g(rng);
  return x;
}

double sum_sq(const CascadeState& x) {
  double s = 0.0;
  for (double v : x.values()) s += v * v;
  return s;
}

const GridSpec k64{64, 1.0};
const GridSpec k32{32, 1.0};

const spectral::WaveletBasis& basis64() {
  static const auto b = spectral::build_wavelet_basis(spectral::BasisSpec{});
  return b;
}

VectorField point_sources(const GridSpec& g, std::mt19937_64& rng, int count) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_int_distribution<int> pos(0, g.n - 1);
  VectorField u(g);
  for (int p = 0; p < count; ++p) {
    const auto k = g.flat(pos(rng), pos(rng), pos(rng));
    for (auto& c : u.comp) c[k] += n(rng);
  }
  return u;
}

// ---------------------------------------------------------------------------

Outcome cancellation() {
  Outcome o;
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double lambda = 1.1 + 0.9 * (trial % 10) / 9.0;
    CascadeConfig cfg{lambda, 1.0, {0, 11}, 0.0, cascade::random_valid_tensor(rng, 4 + trial % 9)};
    const auto x = random_state(rng, cfg.shells, std::exp2(-(trial % 5)));
    const double scale = std::pow(lambda, 2.5 * cfg.shells.last) * std::pow(sum_sq(x), 1.5);
    worst = std::max(worst, std::abs(cascade::nonlinear_energy_flux(x, cfg)) / scale);
  }
  o.ok = worst <= 1e-12;

  const auto b = spectral::build_wavelet_basis(spectral::BasisSpec{2.0, k32, {3, 6}});
  double grid_worst = 0.0;
  int used = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto t = cascade::random_valid_tensor(rng, 6);
    const auto u = spectral::synthesize_field(random_state(rng, b.shells), b);
    const auto c = spectral::apply_cascade_operator(u, u, t, b).field;
    const double scale = spectral::l2_norm(c) * spectral::l2_norm(u);
    if (scale == 0.0) continue;
    ++used;
    grid_worst = std::max(grid_worst, std::abs(spectral::inner(c, u)) / scale);
  }
  o.ok = o.ok && grid_worst <= 1e-10 && used >= 20;
  o.detail = fmt("flux max rel %.2e (100 tensors, 4x12); grid <C(u,u),u> max rel %.2e (%d fields, 32^3)", worst,
                 grid_worst, used);
  return o;
}

Outcome energy_law() {
  Outcome o;
  std::mt19937_64 rng(202);

  // kappa > 0: energy never increases between samples.
  std::size_t checked = 0, increases = 0;
  std::vector<std::pair<CascadeConfig, CascadeState>> viscous;
  for (double alpha : {1.0, 0.6}) {
    auto cfg = cascade::builtin_dyadic_config(2.0, alpha, {0, 11}, alpha == 1.0 ? 1.0 : 0.2);
    CascadeState x0(cfg.shells);
    x0.at(1, 0) = 1.0;
    viscous.emplace_back(cfg, x0);
  }
  for (int k = 0; k < 4; ++k) {
    CascadeConfig cfg{1.5, 1.0, {0, 8}, 0.5, cascade::random_valid_tensor(rng, 6)};
    viscous.emplace_back(cfg, random_state(rng, cfg.shells, 0.3));
  }
  for (const auto& [cfg, x0] : viscous) {
    cascade::IntegratorOptions opt;
    opt.rel_tol = 1e-10;
    const auto tr = cascade::integrate(cfg, x0, 1.0, opt);
    if (tr.status != cascade::TrajectoryStatus::completed) o.ok = false;
    for (std::size_t s = 1; s < tr.samples.size(); ++s, ++checked)
      increases += cascade::total_energy(tr.samples[s]) > cascade::total_energy(tr.samples[s - 1]);
  }
  o.ok = o.ok && increases == 0;

  // Energy balance residual on uniformly sampled, tightly integrated runs.
  const auto cfg = cascade::builtin_dyadic_config(2.0, 1.0, {0, 11}, 1.0);
  auto max_residual = [&](double dt) {
    CascadeState x(cfg.shells, 0.0);
    x.at(1, 0) = 1.0;
    CascadeTrajectory tr;
    tr.samples.push_back(x);
    cascade::IntegratorOptions opt;
    opt.rel_tol = 1e-13;
    const int steps = static_cast<int>(std::lround(0.2 / dt));
    for (int k = 1; k <= steps; ++k) {
      auto piece = cascade::integrate(cfg, tr.samples.back(), k * dt, opt);
      tr.samples.push_back(piece.samples.back());
    }
    double m = 0.0;
    for (double v : cascade::energy_balance_residual(tr, cfg)) m = std::max(m, std::abs(v));
    return m;
  };
  const double e1 = max_residual(0.004), e2 = max_residual(0.002), e3 = max_residual(0.001);
  const double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
  o.ok = o.ok && std::abs(p1 - 2.0) < 0.2 && std::abs(p2 - 2.0) < 0.2;

  // kappa = 0
  double drift = 0.0;
  const double rel_tol = 1e-9;
  for (int trial = 0; trial < 10; ++trial) {
    CascadeConfig c0{1.5, 1.0, {0, 8}, 0.0, cascade::random_valid_tensor(rng, 6)};
    const auto x0 = random_state(rng, c0.shells, 0.3);
    cascade::IntegratorOptions opt;
    opt.rel_tol = rel_tol;
    const auto tr = cascade::integrate(c0, x0, 0.5, opt);
    if (tr.status != cascade::TrajectoryStatus::completed) o.ok = false;
    const double e0 = cascade::total_energy(x0);
    for (const auto& s : tr.samples) drift = std::max(drift, std::abs(cascade::total_energy(s) - e0) / e0);
  }
  o.ok = o.ok && drift <= 10 * rel_tol;
  o.detail = fmt("kappa>0: %zu increases in %zu steps; balance residual orders %.3f, %.3f; kappa=0 drift %.2e "
                 "(limit %.0e)",
                 increases, checked, p1, p2, drift, 10 * rel_tol);
  return o;
}

double rk4_guard_crossing(const CascadeConfig& cfg, const CascadeState& x0, double h, double guard_factor,
                          double t_end) {
  const cascade::CascadeSystem sys(cfg);
  const std::size_t d = sys.size();
  std::vector<double> y(x0.values().begin(), x0.values().end()), k1(d), k2(d), k3(d), k4(d), tmp(d);
  auto weighted = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const int n = cfg.shells.first + static_cast<int>(k) % cfg.shells.count();
      s += std::pow(cfg.lambda, 2.0 * n) * v[k] * v[k];
    }
    return s;
  };
  const double guard = guard_factor * weighted(y);
  double t = x0.time();
  while (t < t_end) {
    sys.rhs(y, k1);
    for (std::size_t k = 0; k < d; ++k) tmp[k] = y[k] + 0.5 * h * k1[k];
    sys.rhs(tmp, k2);
    for (std::size_t k = 0; k < d; ++k) tmp[k] = y[k] + 0.5 * h * k2[k];
    sys.rhs(tmp, k3);
    for (std::size_t k = 0; k < d; ++k) tmp[k] = y[k] + h * k3[k];
    sys.rhs(tmp, k4);
    for (std::size_t k = 0; k < d; ++k) y[k] += h / 6.0 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
    t += h;
    if (weighted(y) > guard) return t;
  }
  return t_end;
}

Outcome blowup() {
  Outcome o;
  const auto cfg = cascade::builtin_dyadic_config(2.0, 1.0, {0, 11}, 0.0);
  CascadeState x0(cfg.shells);
  x0.at(1, 0) = 1.0;
  cascade::IntegratorOptions opt;
  opt.guard_factor = 1e2;
  opt.h_min = 1e-6;
  const auto tr = cascade::integrate(cfg, x0, 2.0, opt);
  bool monotone = true;
  int front = cascade::dominant_shell(tr.samples.front());
  for (const auto& s : tr.samples) {
    monotone = monotone && cascade::dominant_shell(s) >= front;
    front = cascade::dominant_shell(s);
  }
  const double oracle = rk4_guard_crossing(cfg, x0, 1e-6, 1e2, 2.0);
  const bool detected = tr.status == cascade::TrajectoryStatus::blowup_detected && tr.blowup_time_estimate;
  const double t_est = detected ? *tr.blowup_time_estimate : NAN;
  const double rel = std::abs(t_est - oracle) / oracle;
  o.ok = detected && monotone && rel < 0.05 && std::abs(oracle - 0.484477) < 2e-6;
  o.detail = fmt("status %s, t_est %.6f, RK4 oracle %.6f, rel err %.2e, dominant shell monotone %s (final %d)",
                 std::string(cascade::to_string(tr.status)).c_str(), t_est, oracle, rel, monotone ? "yes" : "no",
                 front);
  return o;
}

Outcome timescale() {
  Outcome o;
  int bad_one = 0, bad_mono = 0;
  for (double lambda : {1.5, 2.0, 3.0}) {
    for (int n = 0; n <= 40; ++n) bad_one += cascade::timescale_ratio(n, 1.25, lambda) != 1.0;
    for (int a = 0; a < 20; ++a) {
      const double alpha = 0.05 + a * (1.2 - 0.05) / 19.0;
      for (int n = 0; n < 40; ++n)
        bad_mono += !(cascade::timescale_ratio(n + 1, alpha, lambda) > cascade::timescale_ratio(n, alpha, lambda));
    }
  }
  o.ok = bad_one == 0 && bad_mono == 0;
  o.detail = fmt("alpha=5/4 deviations from 1: %d; non-increasing steps over 20 alpha < 5/4: %d", bad_one, bad_mono);
  return o;
}

Outcome scaling() {
  Outcome o;
  std::mt19937_64 rng(505);
  std::ostringstream ss;
  double worst = 0.0;
  auto run = [&](const CascadeConfig& cfg, const CascadeState& x0, double t_end) {
    cascade::IntegratorOptions opt;
    opt.rel_tol = 1e-12;
    opt.h_max = 4e-5;
    const auto tr = cascade::integrate(cfg, x0, t_end, opt);
    if (tr.status != cascade::TrajectoryStatus::completed) o.ok = false;
    worst = std::max(worst, cascade::ode_residual(tr, cfg));
    for (int m : {1, 2}) worst = std::max(worst, cascade::ode_residual(cascade::rescale_trajectory(tr, m, cfg), cfg));
  };
  {
    const auto cfg = cascade::builtin_dyadic_config(1.6, 1.1, {0, 10}, 1.0);
    CascadeState x0(cfg.shells);
    x0.at(1, 3) = 0.05;
    x0.at(1, 4) = 0.02;
    run(cfg, x0, 0.02);
  }
  for (int trial = 0; trial < 2; ++trial) {
    CascadeConfig cfg{1.5, 1.0, {0, 10}, 1.0, cascade::random_valid_tensor(rng, 4)};
    CascadeState x0(cfg.shells);
    std::normal_distribution<double> g(0.0, 0.02);
    for (int i = 1; i <= 4; ++i)
      for (int n = 3; n <= 5; ++n) x0.at(i, n) = g(rng);
    run(cfg, x0, 0.01);
  }
  o.ok = o.ok && worst < 1e-6;
  o.detail = fmt("max ODE residual over originals and m in {1,2}: %.2e (dyadic + 2 random tensors)", worst);
  return o;
}

Outcome basis_invariants() {
  Outcome o;
  const auto& b = basis64();
  double norm_err = 0, div_err = 0, mom = 0, outside = 0, ortho = 0;
  bool geometry = true;
  for (int i = 0; i < 4; ++i) {
    const double r = std::sqrt(b.centers[i][0] * b.centers[i][0] + b.centers[i][1] * b.centers[i][1] +
                               b.centers[i][2] * b.centers[i][2]);
    geometry = geometry && r - b.ball_radius > b.annulus_inner() && r + b.ball_radius <= b.annulus_outer();
    for (int k = 0; k < 4; ++k)
      for (double sgn : {1.0, -1.0}) {
        if (k == i && sgn > 0) continue;
        const Vec3 c{sgn * b.centers[k][0], sgn * b.centers[k][1], sgn * b.centers[k][2]};
        geometry = geometry && spectral::WaveletBasis::dist(b.centers[i], c) >= 2 * b.ball_radius;
      }
  }
  std::vector<VectorField> all;
  for (int i = 1; i <= 4; ++i)
    for (int n = b.shells.first; n <= b.shells.last; ++n) {
      auto psi = spectral::basis_profile(b, i, n);
      norm_err = std::max(norm_err, std::abs(spectral::l2_norm(psi) - 1.0));
      div_err = std::max(div_err, spectral::l2_norm(spectral::divergence(psi)) / spectral::gradient_norm(psi));
      for (double m : spectral::integral(psi)) mom = std::max(mom, std::abs(m));
      const auto s = spectral::to_spectrum(psi);
      const double scale = std::pow(b.lambda, n);
      const auto& c = b.centers[static_cast<std::size_t>(i - 1)];
      spectral::for_each_mode(b.grid, [&](std::size_t k, double x, double y, double z, bool) {
        const Vec3 xi{x / scale, y / scale, z / scale};
        const bool in = spectral::WaveletBasis::dist(xi, c) < b.ball_radius ||
                        spectral::WaveletBasis::dist(xi, Vec3{-c[0], -c[1], -c[2]}) < b.ball_radius;
        if (!in)
          for (const auto& comp : s) outside = std::max(outside, std::abs(comp[k]));
      });
      all.push_back(std::move(psi));
    }
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t c = a; c < all.size(); ++c)
      ortho = std::max(ortho, std::abs(spectral::inner(all[a], all[c]) - (a == c ? 1.0 : 0.0)));
  o.ok = geometry && norm_err < 1e-10 && div_err < 1e-10 && mom < 1e-10 && outside < 1e-14 && ortho < 1e-10;
  o.detail = fmt("balls in annulus and disjoint: %s; |norm-1| %.1e, div/grad %.1e, momentum %.1e, "
                 "off-support %.1e, orthonormality %.1e (%zu profiles, shells %d..%d, 64^3)",
                 geometry ? "yes" : "no", norm_err, div_err, mom, outside, ortho, all.size(), b.shells.first,
                 b.shells.last);
  return o;
}

// Fitted constants come from training fields; holdout fields must satisfy them.
Outcome inequality_suites() {
  Outcome o;
  std::mt19937_64 rng(707);
  constexpr double kMargin = 1.25;
  const int train = 24, holdout = 24;

  // Bernstein
  std::array<double, 2> k_fit{0, 0};
  std::array<double, 2> worst_holdout{0, 0};
  std::array<std::map<int, double>, 2> per_j;
  auto bernstein = [&](const VectorField& pj, int j) {
    const double l2 = spectral::l2_norm(pj);
    return std::array<double, 2>{spectral::lq_norm(pj, 4.0) / (std::exp2(0.75 * j) * l2),
                                 spectral::lq_norm(pj, INFINITY) / (std::exp2(1.5 * j) * l2)};
  };
  // Finite band, s = 1, 2
  std::array<double, 2> fb_lo{INFINITY, INFINITY}, fb_hi{0, 0};
  bool fb_holdout = true;
  std::array<double, 2> fb_hold_lo{INFINITY, INFINITY}, fb_hold_hi{0, 0};
  std::vector<std::pair<VectorField, int>> hold;
  for (int j = 2; j <= 5; ++j) {
    for (int s = 0; s < train + holdout; ++s) {
      auto pj = spectral::band_project(point_sources(k64, rng, 1 + s % 3), j);
      const auto r = bernstein(pj, j);
      std::array<double, 2> f{};
      for (int q = 0; q < 2; ++q)
        f[q] = spectral::hs_seminorm(pj, q + 1.0) / (std::exp2((q + 1.0) * j) * spectral::l2_norm(pj));
      for (int q = 0; q < 2; ++q) {
        per_j[q][j] = std::max(per_j[q][j], r[q]);
        if (s < train) {
          k_fit[q] = std::max(k_fit[q], r[q]);
          fb_lo[q] = std::min(fb_lo[q], f[q]);
          fb_hi[q] = std::max(fb_hi[q], f[q]);
        } else {
          worst_holdout[q] = std::max(worst_holdout[q], r[q]);
          fb_hold_lo[q] = std::min(fb_hold_lo[q], f[q]);
          fb_hold_hi[q] = std::max(fb_hold_hi[q], f[q]);
        }
      }
    }
  }
  bool bern_ok = true;
  double spread[2];
  for (int q = 0; q < 2; ++q) {
    bern_ok = bern_ok && worst_holdout[q] <= kMargin * k_fit[q];
    double lo = INFINITY, hi = 0;
    for (auto [j, v] : per_j[q]) lo = std::min(lo, v), hi = std::max(hi, v);
    spread[q] = hi / lo;
  }
  for (int q = 0; q < 2; ++q) {
    const double s = q + 1.0;
    // a-priori support constants of p_j: (2/3)^s .. 3^s
    fb_holdout = fb_holdout && fb_hold_lo[q] >= fb_lo[q] / kMargin && fb_hold_hi[q] <= kMargin * fb_hi[q] &&
                 fb_lo[q] >= std::pow(2.0 / 3.0, s) && fb_hi[q] <= std::pow(3.0, s);
  }

  // Commutator: ||phi P_k f - P~_k phi P_k f|| / ||P_k f|| for a type-j bump, k = j..6, on
  // sources placed in the bump support. Decay is measured on the envelope C_k = max over fields;
  // the certified factor sits halfway between the fitted one and 1.
  const regularity::CubeLattice lat{k64, 1.0 / 3.0, 0};
  std::map<std::pair<int, int>, double> env_train, env_hold;
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int j = 2; j <= 5; ++j) {
    const regularity::CubeId q{j, {0, 0, 0}};
    const auto bump = lat.bump(q);
    const auto phi = spectral::sample_bump(bump, k64);
    const auto c0 = lat.geometry(q).center();
    const double hw = bump.support_half_width();
    for (int s = 0; s < 2 * train; ++s) {
      VectorField f(k64);
      for (int p = 0; p < 1 + s % 3; ++p) {
        std::array<int, 3> idx{};
        for (int d = 0; d < 3; ++d) {
          const int v = static_cast<int>(std::lround((c0[d] + hw * uni(rng)) / k64.spacing()));
          idx[d] = ((v % k64.n) + k64.n) % k64.n;
        }
        for (auto& c : f.comp) c[k64.flat(idx[0], idx[1], idx[2])] += gauss(rng);
      }
      auto& env = s < train ? env_train : env_hold;
      for (int k = j; k <= 6; ++k) {
        const auto pk = spectral::band_project(f, k);
        const auto a = spectral::multiply(phi, pk);
        const double c = spectral::l2_norm(a - spectral::band_project(a, k, true)) / spectral::l2_norm(pk);
        env[{j, k}] = std::max(env[{j, k}], c);
      }
    }
  }
  double rho_fit = 0.0, rho_holdout = 0.0;
  int steps = 0;
  for (const auto& [jk, c] : env_train) {
    const std::pair<int, int> next{jk.first, jk.second + 1};
    if (!env_train.contains(next)) continue;
    rho_fit = std::max(rho_fit, env_train[next] / c);
    rho_holdout = std::max(rho_holdout, env_hold[next] / env_hold[jk]);
    ++steps;
  }
  const double rho = 0.5 * (1.0 + rho_fit);
  const bool comm_ok = rho_fit < 1.0 && rho_holdout <= rho;

  o.ok = bern_ok && fb_holdout && comm_ok;
  o.detail = fmt("Bernstein K_4 %.3f (holdout %.3f, j-spread %.2f), K_inf %.3f (holdout %.3f, j-spread %.2f); "
                 "finite band s=1 [%.3f, %.3f] s=2 [%.3f, %.3f] holdout %s; commutator fitted %.3f certified %.3f "
                 "(holdout max %.3f, %d steps); j=2..5, 64^3, margin %.2f",
                 kMargin * k_fit[0], worst_holdout[0], spread[0], kMargin * k_fit[1], worst_holdout[1], spread[1],
                 fb_lo[0] / kMargin, fb_hi[0] * kMargin, fb_lo[1] / kMargin, fb_hi[1] * kMargin,
                 fb_holdout ? "inside" : "OUTSIDE", rho_fit, rho, rho_holdout, steps, kMargin);
  return o;
}

Outcome covering() {
  Outcome o;
  std::ostringstream ss;
  for (double alpha : {0.8, 1.0, 1.2}) {
    cascade::ConcentratingProfile prof;
    prof.alpha = alpha;
    const auto tr = cascade::concentrating_sequence(prof);
    std::vector<VectorField> snaps;
    for (const auto& x : tr.samples) {
      snaps.push_back(spectral::synthesize_field(x, basis64()));
      snaps.back().time = x.time();
    }
    regularity::RegularityParams p;
    p.alpha = alpha;
    p.K = 0.05;
    p.workers = 4;
    const auto rep = regularity::analyze(snaps, p, 2, 6);
    const double limit = rep.paper_bound + 0.2;
    ss << fmt("alpha %.1f: ", alpha);
    if (rep.fit) {
      const bool ok = rep.fit->d_est <= limit;
      o.ok = o.ok && ok;
      ss << fmt("d_est %.3f vs %.3f %s; ", rep.fit->d_est, limit, ok ? "ok" : "EXCEEDS");
    } else {
      o.ok = false;
      ss << "no fit (" << rep.fit_note << "); ";
    }
  }
  double worst = 0.0;
  for (double d : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0})
    for (double C : {1.0, 2.5, 7.0}) {
      std::map<int, double> counts;
      for (int j = 2; j <= 8; ++j) counts[j] = std::round(C * std::exp2(d * j));
      worst = std::max(worst, std::abs(regularity::dimension_estimate(counts).d_est - d));
    }
  o.ok = o.ok && worst <= 0.05;
  ss << fmt("synthetic counts max |d_est - d| %.4f", worst);
  o.detail = ss.str();
  return o;
}

Outcome vitali() {
  Outcome o;
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t overlaps = 0, misses = 0, probes = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int count = 1 + static_cast<int>(u(rng) * 80);
    const bool clustered = trial % 2 == 0;
    const double smax = 0.02 + 0.3 * u(rng);
    std::vector<regularity::PeriodicCube> cubes;
    const Vec3 c0{u(rng), u(rng), u(rng)};
    for (int k = 0; k < count; ++k) {
      Vec3 c{u(rng), u(rng), u(rng)};
      if (clustered)
        for (int d = 0; d < 3; ++d) c[d] = c0[d] + 0.25 * (c[d] - 0.5);
      cubes.push_back({c, 0.01 + smax * u(rng)});
    }
    const auto sel = regularity::vitali_select(cubes, 1.0);
    for (std::size_t a = 0; a < sel.size(); ++a)
      for (std::size_t b = a + 1; b < sel.size(); ++b) overlaps += regularity::overlaps(cubes[sel[a]], cubes[sel[b]], 1.0);
    for (int p = 0; p < 10000; ++p, ++probes) {
      const auto& q = cubes[static_cast<std::size_t>(u(rng) * count) % cubes.size()];
      const Vec3 x{q.center[0] + q.side * (u(rng) - 0.5), q.center[1] + q.side * (u(rng) - 0.5),
                   q.center[2] + q.side * (u(rng) - 0.5)};
      bool covered = false;
      for (std::size_t s : sel)
        if (regularity::contains(cubes[s], x, 1.0, 5.0)) {
          covered = true;
          break;
        }
      misses += !covered;
    }
  }
  o.ok = overlaps == 0 && misses == 0;
  o.detail = fmt("1000 inputs: %zu overlapping selected pairs, %zu misses in %zu probes", overlaps, misses, probes);
  return o;
}

ScalarField gaussian(const GridSpec& g, double sigma, Vec3 c, std::function<double(double, double, double)> poly) {
  ScalarField f(g);
  const double h = g.spacing();
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b)
      for (int k = 0; k < g.n; ++k) {
        const double x = a * h - c[0], y = b * h - c[1], z = k * h - c[2];
        f.comp[0][g.flat(a, b, k)] = poly(x, y, z) * std::exp(-(x * x + y * y + z * z) / (2 * sigma * sigma));
      }
  return f;
}

Outcome divergence() {
  Outcome o;
  const auto prof = spectral::default_z_profile(1.0);
  std::vector<ScalarField> profiles;
  const double s1 = 0.06, s2 = 0.05;
  // Derivatives of Gaussians and their combinations: all have zero momentum.
  for (int axis = 0; axis < 3; ++axis)
    profiles.push_back(gaussian(k64, s1, {0.5, 0.5, 0.5}, [axis](double x, double y, double z) {
      return -(axis == 0 ? x : axis == 1 ? y : z) / (0.06 * 0.06);
    }));
  profiles.push_back(gaussian(k64, s2, {0.45, 0.55, 0.5}, [](double x, double, double) { return x; }));
  profiles.push_back(gaussian(k64, s2, {0.5, 0.5, 0.55}, [](double x, double y, double) { return x * y; }));
  profiles.push_back(gaussian(k64, s1, {0.5, 0.5, 0.5}, [](double x, double y, double z) {
    const double r2 = x * x + y * y + z * z;
    return r2 / (0.06 * 0.06) - 3.0;  // Laplacian of a Gaussian, up to scale
  }));
  profiles.push_back(gaussian(k64, s2, {0.52, 0.48, 0.5}, [](double, double, double z) { return z * z * z; }));
  profiles.push_back(gaussian(k64, s1, {0.5, 0.5, 0.5}, [](double x, double y, double z) { return x + 2 * y - z; }));
  profiles.push_back(gaussian(k64, s2, {0.5, 0.45, 0.5}, [](double x, double, double z) { return x * z; }));
  profiles.push_back(gaussian(k64, s2, {0.5, 0.5, 0.5}, [](double x, double y, double z) { return x * y * z; }));

  double worst = 0.0;
  int accepted = 0;
  for (const auto& psi : profiles) {
    try {
      auto err = spectral::box_divergence(spectral::divergence_potential(psi, prof));
      err -= psi;
      worst = std::max(worst, spectral::l2_norm(err) / spectral::l2_norm(psi));
      ++accepted;
    } catch (const DomainError&) {
    }
  }
  int rejected = 0;
  const std::vector<ScalarField> massive{
      gaussian(k64, s1, {0.5, 0.5, 0.5}, [](double, double, double) { return 1.0; }),
      gaussian(k64, s2, {0.5, 0.5, 0.5}, [](double x, double, double) { return 1.0 + x; }),
      gaussian(k64, s2, {0.4, 0.6, 0.5}, [](double x, double, double) { return x * x; })};
  for (const auto& psi : massive) {
    try {
      spectral::divergence_potential(psi, prof);
    } catch (const DomainError&) {
      ++rejected;
    }
  }
  o.ok = accepted == 10 && worst < 1e-6 && rejected == 3;
  o.detail = fmt("%d/10 zero-momentum profiles, max ||div Psi - psi||/||psi|| %.2e; nonzero momentum rejected %d/3",
                 accepted, worst, rejected);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "cancellation identity", 30, cancellation},
      {2, "energy dissipation law", 60, energy_law},
      {3, "blowup surrogate", 60, blowup},
      {4, "timescale threshold", 1, timescale},
      {5, "scaling law", 60, scaling},
      {6, "basis invariants", 120, basis_invariants},
      {7, "Bernstein / finite band / commutator", 180, inequality_suites},
      {8, "covering pipeline", 600, covering},
      {9, "Vitali property", 30, vitali},
      {10, "divergence potential", 30, divergence},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt < c.budget_s;
    const bool ok = r.ok && in_time;
    failed += !ok;
    std::printf("%s [%2d] %s: %s [%.2f s / %.0f s%s]\n", ok ? "PASS" : "FAIL", c.id, c.name, r.detail.c_str(), dt,
                c.budget_s, in_time ? "" : " OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
