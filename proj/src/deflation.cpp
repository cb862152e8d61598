#include <cmath>
#include <random>
#include <sstream>

#include "csvx/error.hpp"
#include "csvx/solver.hpp"
#include "internal/newton_system.hpp"

namespace csvx {

namespace {

constexpr double kPower = 2.0;
constexpr double kShift = 1.0;

// Deflation operator M(v) = prod_k (|v - v_k|^{-p} + shift) over known roots.
struct Deflation {
  const detail::NewtonSystem& sys;
  std::vector<std::vector<double>> roots;

  double factor(const std::vector<double>& v) const {
    double m = 1.0;
    std::vector<double> e(v.size());
    for (const auto& r : roots) {
      for (std::size_t i = 0; i < v.size(); ++i) e[i] = v[i] - r[i];
      m *= std::pow(sys.l2(e), -kPower) + kShift;
    }
    return m;
  }

  // Directional derivative of log M along dv.
  double log_derivative(const std::vector<double>& v, const std::vector<double>& dv) const {
    double s = 0.0;
    std::vector<double> e(v.size());
    for (const auto& r : roots) {
      for (std::size_t i = 0; i < v.size(); ++i) e[i] = v[i] - r[i];
      const double dist = sys.l2(e);
      const double mk = std::pow(dist, -kPower) + kShift;
      s += -kPower * std::pow(dist, -kPower - 2.0) * sys.inner(e, dv) / mk;
    }
    return s;
  }
};

struct DeflatedRun {
  bool converged = false;
  std::vector<double> v;
  double residual = 0;
  std::string reason;
};

DeflatedRun deflated_newton(const Model& m, detail::NewtonSystem& sys, const Deflation& defl,
                            std::vector<double> v, const SolveOptions& opts) {
  std::vector<double> f(sys.size()), ftrial(sys.size()), dv(sys.size()), trial(sys.size());
  const double tol = opts.newton_tol * m.lambda;
  DeflatedRun run;
  double fnorm;
  try {
    fnorm = sys.residual(v, f);
  } catch (const Error& e) {
    run.reason = e.what();
    return run;
  }
  for (int it = 0; it < 100; ++it) {
    if (fnorm <= tol) {
      run.converged = true;
      break;
    }
    sys.linearize(v);
    const detail::GmresResult gr =
        sys.newton_step(f, dv, opts.forcing, opts.gmres_restart, opts.gmres_max_iter);
    if (!(gr.relative_residual < 0.9)) {
      run.reason = "linear solve stalled";
      break;
    }
    const double tau = 1.0 / (1.0 - defl.log_derivative(v, dv));
    double dmax = 0.0;
    for (double& x : dv) {
      x *= tau;
      dmax = std::max(dmax, std::abs(x));
    }
    if (dmax > 10.0) {
      for (double& x : dv) x *= 10.0 / dmax;
    }
    const double merit = defl.factor(v) * fnorm;
    double t = 1.0;
    bool accepted = false;
    double fnew = 0.0;
    for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
      for (std::size_t i = 0; i < v.size(); ++i) trial[i] = v[i] + t * dv[i];
      try {
        fnew = sys.residual(trial, ftrial);
      } catch (const Error&) {
        continue;
      }
      if (std::isfinite(fnew) && defl.factor(trial) * fnew < (1.0 - 1e-4 * t) * merit) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      run.reason = "line search failed";
      break;
    }
    v.swap(trial);
    f.swap(ftrial);
    fnorm = fnew;
  }
  if (!run.converged && run.reason.empty()) run.reason = "iteration limit";
  run.v = std::move(v);
  run.residual = fnorm;
  return run;
}

// Smooth random field with a few low Fourier modes, zero mean.
std::vector<double> random_smooth(const TorusGrid& grid, std::mt19937_64& rng, double amplitude) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(grid.size(), 0.0);
  constexpr double two_pi = 2.0 * 3.14159265358979323846;
  for (int k1 = -2; k1 <= 2; ++k1) {
    for (int k2 = 0; k2 <= 2; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const double ca = normal(rng), sa = normal(rng);
      for (int i = 0; i < grid.n1(); ++i) {
        for (int j = 0; j < grid.n2(); ++j) {
          const double ph = two_pi * (k1 * grid.s1(i) + k2 * grid.s2(j));
          out[static_cast<std::size_t>(i) * grid.n2() + j] +=
              amplitude / 8.0 * (ca * std::cos(ph) + sa * std::sin(ph));
        }
      }
    }
  }
  return out;
}

}  // namespace

SecondSolutionResult find_second_solution(const Model& m, const SolutionState& first,
                                          const SolveOptions& opts) {
  opts.validate();
  SecondSolutionResult res;
  if (m.n().total() == 0) {
    res.report.log.push_back(
        "N = (0,0): the vacuum is the only candidate (Q >= 0 vanishes only there); search skipped");
    return res;
  }
  detail::NewtonSystem sys(m);
  const std::size_t n = sys.nodes();
  const std::vector<double> v_first = sys.pack(first.v1(), first.v2());
  Deflation defl{sys, {v_first}};
  res.first_energy = comparison_energy(m, first);

  // Starts: the far endpoint v+ - xi along both or one component, then
  // randomly perturbed copies.
  std::vector<std::pair<std::string, std::vector<double>>> starts;
  for (double xi : {2.0, 4.0, 8.0}) {
    for (int mask : {3, 1, 2}) {
      std::vector<double> s = v_first;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & 1) s[i] -= xi;
        if (mask & 2) s[n + i] -= xi;
      }
      std::ostringstream name;
      name << "shift xi=" << xi << " components=" << (mask == 3 ? "both" : mask == 1 ? "1" : "2");
      starts.emplace_back(name.str(), std::move(s));
    }
  }
  std::mt19937_64 rng(opts.seed);
  for (int r = 0; r < 4; ++r) {
    const std::vector<double> p1 = random_smooth(m.grid(), rng, 2.0);
    const std::vector<double> p2 = random_smooth(m.grid(), rng, 2.0);
    std::vector<double> s = v_first;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] += p1[i] - 3.0;
      s[n + i] += p2[i] - 3.0;
    }
    starts.emplace_back("perturbed start " + std::to_string(r), std::move(s));
  }

  for (auto& [name, start] : starts) {
    ++res.report.starts_tried;
    DeflatedRun run = deflated_newton(m, sys, defl, std::move(start), opts);
    if (!run.converged) {
      ++res.report.newton_failures;
      res.report.log.push_back(name + ": no convergence (" + run.reason + ")");
      continue;
    }
    std::vector<double> diff(run.v.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = run.v[i] - v_first[i];
    const double dist = sys.l2(diff);
    const FieldPair fields = sys.unpack(run.v);
    SolutionState cand = SolutionState::from_fields(fields.f1, fields.f2, m.lambda);
    cand.branch_tag = BranchTag::Secondary;
    cand.residual_norm = run.residual;
    cand.grad_norm =
        m.k.variational() ? l2_norm(gradient_i(m, fields.f1, fields.f2)) : run.residual;
    cand.converged = cand.grad_norm <= opts.grad_tol * m.lambda;
    const double energy = comparison_energy(m, cand);
    std::ostringstream msg;
    msg << name << ": converged, distance " << dist << ", energy " << energy << " vs "
        << res.first_energy;
    if (dist < 1e-3) {
      ++res.report.rejected;
      res.report.log.push_back(msg.str() + " (same solution)");
      defl.roots.push_back(run.v);
      continue;
    }
    if (!(energy > res.first_energy) || !cand.converged) {
      ++res.report.rejected;
      res.report.log.push_back(msg.str() + " (rejected: not above the first energy)");
      defl.roots.push_back(run.v);
      continue;
    }
    res.report.log.push_back(msg.str() + " (accepted)");
    res.second_energy = energy;
    res.distance = dist;
    res.state = std::move(cand);
    break;
  }
  return res;
}

}  // namespace csvx
