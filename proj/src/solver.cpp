#include "csvx/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

#include "csvx/error.hpp"
#include "internal/newton_system.hpp"

namespace csvx {

namespace {

constexpr double kPi = std::numbers::pi;

void emit(const ProgressSink& sink, std::string_view stage, int it, double obj, double norm) {
  if (sink) sink({stage, it, obj, norm});
}

// Components with N_i = 0 that no other component drives stay exactly at the
// vacuum; the strict bound p < 1 applies to the rest.
// The continuum bound e^u < 1 is strict, but at large lambda the true margin
// far from the vortices drops below the discretization error. States that
// overshoot by less than this are kept; diagnostics report the overshoot.
constexpr double kVacuumSlack = 1e-4;

bool below_vacuum(const Model& m, const SolutionState& s) {
  const FieldPair p = densities(*m.bg, s.v1(), s.v2());
  const VortexNumbers n = m.n();
  const bool trivial1 = n.n1 == 0 && (m.k.b() == 0.0 || n.n2 == 0);
  const bool trivial2 = n.n2 == 0 && (m.k.c() == 0.0 || n.n1 == 0);
  return (trivial1 || p.f1.max() < 1.0 + kVacuumSlack) && (trivial2 || p.f2.max() < 1.0 + kVacuumSlack);
}

}  // namespace

void SolveOptions::validate() const {
  const auto check = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
  };
  check(grad_tol > 0.0, "grad_tol must be positive");
  check(max_iter > 0, "max_iter must be positive");
  check(backoff > 0.0 && backoff < 1.0, "backoff must lie in (0,1)");
  check(max_backoffs > 0, "max_backoffs must be positive");
  check(newton_switch_tol > 0.0, "newton_switch_tol must be positive");
  check(lbfgs_memory > 0, "lbfgs_memory must be positive");
  check(newton_tol > 0.0, "newton_tol must be positive");
  check(newton_max_iter > 0, "newton_max_iter must be positive");
  check(forcing > 0.0 && forcing < 1.0, "forcing must lie in (0,1)");
  check(gmres_restart > 0 && gmres_max_iter > 0, "GMRES limits must be positive");
}

std::string_view to_string(BranchTag tag) {
  switch (tag) {
    case BranchTag::Minimizer: return "minimizer";
    case BranchTag::Secondary: return "secondary";
    case BranchTag::NewtonOnly: return "newton-only";
  }
  return "?";
}

std::optional<BranchTag> parse_branch_tag(std::string_view s) {
  for (BranchTag t : {BranchTag::Minimizer, BranchTag::Secondary, BranchTag::NewtonOnly}) {
    if (s == to_string(t)) return t;
  }
  return std::nullopt;
}

SolutionState SolutionState::from_fields(const ScalarField& v1, const ScalarField& v2,
                                         double lambda) {
  const double c1 = v1.mean(), c2 = v2.mean();
  SolutionState s{project_mean_zero(v1), project_mean_zero(v2)};
  s.c1 = c1;
  s.c2 = c2;
  s.lambda = lambda;
  return s;
}

std::optional<NonexistenceCertificate> nonexistence_gate(const CouplingMatrix& k, double lambda,
                                                         VortexNumbers n, double area) {
  if (n.total() == 0) return std::nullopt;
  const double star = nonexistence_threshold(k, n, area);
  if (lambda >= star) return std::nullopt;
  return NonexistenceCertificate{lambda, star, k.a(), k.b(), k.c(), k.d(), n, area};
}

// ---------------------------------------------------------------------------
// Newton-Krylov on the full system

SolutionState refine_newton(const Model& m, const SolutionState& state, const SolveOptions& opts,
                            const ProgressSink& sink) {
  opts.validate();
  detail::NewtonSystem sys(m);
  std::vector<double> v = sys.pack(state.v1(), state.v2());
  std::vector<double> f(sys.size()), trial(sys.size()), ftrial(sys.size()), dv(sys.size());
  double fnorm = sys.residual(v, f);
  const double tol = opts.newton_tol * m.lambda;

  const auto finish = [&](const std::vector<double>& vv, double fn, int its) {
    const FieldPair fields = sys.unpack(vv);
    SolutionState out = SolutionState::from_fields(fields.f1, fields.f2, m.lambda);
    out.branch_tag = state.branch_tag;
    out.objective_history = state.objective_history;
    out.notes = state.notes;
    out.iterations = state.iterations + its;
    out.residual_norm = fn;
    out.grad_norm = m.k.variational() ? l2_norm(gradient_i(m, fields.f1, fields.f2)) : fn;
    out.converged = fn <= tol && out.grad_norm <= opts.grad_tol * m.lambda;
    return out;
  };

  if (fnorm <= tol) {
    SolutionState out = state;
    out.lambda = m.lambda;
    out.residual_norm = fnorm;
    out.grad_norm = m.k.variational() ? l2_norm(gradient_i(m, state.v1(), state.v2())) : fnorm;
    out.converged = out.grad_norm <= opts.grad_tol * m.lambda;
    return out;
  }

  int it = 0;
  for (; it < opts.newton_max_iter; ++it) {
    emit(sink, "newton", it, 0.0, fnorm);
    sys.linearize(v);
    const detail::GmresResult gr =
        sys.newton_step(f, dv, opts.forcing, opts.gmres_restart, opts.gmres_max_iter);
    if (!(gr.relative_residual < 0.9)) {
      throw Error(ErrorCode::SingularLinearization, "GMRES made no progress on the Newton system");
    }
    double t = 1.0;
    bool accepted = false;
    double fnew = fnorm;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      for (std::size_t i = 0; i < v.size(); ++i) trial[i] = v[i] + t * dv[i];
      try {
        fnew = sys.residual(trial, ftrial);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::Overflow) continue;
        throw;
      }
      if (std::isfinite(fnew) && fnew <= (1.0 - 1e-4 * t) * fnorm) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (fnorm <= tol) break;
      throw Error(ErrorCode::Diverged, "Newton line search failed");
    }
    const double previous = fnorm;
    v.swap(trial);
    f.swap(ftrial);
    fnorm = fnew;
    // Stop once well inside the target, or when roundoff stalls progress.
    if (fnorm <= 0.1 * tol) {
      ++it;
      break;
    }
    if (fnorm <= tol && fnorm > 0.5 * previous) {
      ++it;
      break;
    }
  }
  emit(sink, "newton", it, 0.0, fnorm);
  if (fnorm > tol && it >= opts.newton_max_iter) {
    throw Error(ErrorCode::Diverged, "Newton iteration limit reached");
  }
  return finish(v, fnorm, it);
}

// ---------------------------------------------------------------------------
// Scalar problem

ScalarSolution solve_scalar_mu(const ScalarField& e, double mu, int n, const SolveOptions& opts) {
  const GridPtr& grid = e.grid_ptr();
  const double area = grid->area();
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "vortex count must be non-negative");
  if (n == 0) {
    return {ScalarField(grid), true, 0.0, 0};
  }
  if (mu < 16.0 * kPi * n / area) {
    throw Error(ErrorCode::BelowThreshold, "mu is below the scalar threshold 16 pi N / |Omega|");
  }

  // Monotone iteration (Laplacian - mu) v+ = f(v) - mu v from a start just
  // above the background's reciprocal: every iterate keeps E e^v <= 1.
  const std::size_t size = grid->size();
  std::vector<double> v(size), rhs(size);
  for (std::size_t i = 0; i < size; ++i) v[i] = -std::log(e[i] + 1e-2);
  const double source = 4.0 * kPi * n / area;
  const auto k2 = grid->wavenumber_sq();
  std::vector<double> symbol(k2.size());
  for (std::size_t q = 0; q < k2.size(); ++q) symbol[q] = -1.0 / (k2[q] + mu);
  std::vector<std::complex<double>> spec(grid->modes());
  int iterations = 0;
  for (; iterations < 5000; ++iterations) {
    for (std::size_t i = 0; i < size; ++i) {
      const double p = e[i] * std::exp(v[i]);
      rhs[i] = mu * p * (p - 1.0) + source - mu * v[i];
    }
    grid->forward(rhs, spec);
    kernels::active().scale_modes(symbol.data(), spec.data(), spec.size());
    std::vector<double> next(size);
    grid->backward(spec, next);
    double change = 0.0, vmax = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      change = std::max(change, std::abs(next[i] - v[i]));
      vmax = std::max(vmax, std::abs(next[i]));
    }
    v.swap(next);
    if (!std::isfinite(change) || grid->mean(v) < -200.0) {
      throw Error(ErrorCode::Diverged, "scalar iteration collapsed (no solution at this mu?)");
    }
    if (change <= 1e-6 * (1.0 + vmax)) break;
  }

  // Polish with Newton on the one-component system.
  auto bg = std::make_shared<Background>(Background{
      e, ScalarField(grid, std::vector<double>(size, 1.0)), ScalarField(grid),
      ScalarField(grid, std::vector<double>(size, 1.0)), e, n, 0, VortexSet(), VortexSet(), {}});
  kernels::active().multiply(e.values().data(), e.values().data(), bg->e1_sq.values().data(), size);
  const Model model{CouplingMatrix(2.0, 0.0, 0.0, 2.0), mu, bg};
  SolutionState s =
      SolutionState::from_fields(ScalarField(grid, std::move(v)), ScalarField(grid), mu);
  s.iterations = iterations;
  SolutionState out = refine_newton(model, s, opts);
  return {out.v1(), out.converged, out.residual_norm, out.iterations};
}

// ---------------------------------------------------------------------------
// Initial states

SolutionState default_initial_state(const Model& m, const SolveOptions& opts) {
  const auto [r1, r2] = rhs_coefficients(m.k);
  // Diagonal of the linearized right-hand side at the vacuum.
  const double area = m.grid().area();
  const VortexNumbers n = m.n();
  double mu1 = m.lambda * (r1.l1 + 2.0 * r1.q11 + r1.q12);
  double mu2 = m.lambda * (r2.l2 + r2.q12 + 2.0 * r2.q22);
  const auto above = [&](double mu, int ni) {
    return std::max(mu, 1.25 * 16.0 * kPi * ni / area);
  };
  mu1 = above(mu1, n.n1);
  mu2 = above(mu2, n.n2);
  for (int attempt = 0; attempt < 6; ++attempt, mu1 *= 2.0, mu2 *= 2.0) {
    ScalarField v1(m.grid_ptr()), v2(m.grid_ptr());
    try {
      v1 = solve_scalar_mu(m.bg->e1, mu1, n.n1, opts).v;
      v2 = solve_scalar_mu(m.bg->e2, mu2, n.n2, opts).v;
    } catch (const Error&) {
      continue;
    }
    SolutionState s = SolutionState::from_fields(v1, v2, m.lambda);
    const MomentSet mo = integrals(*m.bg, s.w1, s.w2);
    if (admissibility(m.k, m.lambda, n, mo).interior) return s;
  }
  throw Error(ErrorCode::NotAdmissible, "no admissible initial pair from the scalar problems");
}

SolutionState newton_initial_state(const Model& m) {
  const double delta = std::min(0.5, 4.0 / m.lambda);
  const std::size_t size = m.grid().size();
  std::vector<double> v1(size), v2(size);
  for (std::size_t i = 0; i < size; ++i) {
    v1[i] = m.bg->n1 > 0 ? -std::log(m.bg->e1[i] + delta) : 0.0;
    v2[i] = m.bg->n2 > 0 ? -std::log(m.bg->e2[i] + delta) : 0.0;
  }
  SolutionState s = SolutionState::from_fields(ScalarField(m.grid_ptr(), std::move(v1)),
                                               ScalarField(m.grid_ptr(), std::move(v2)), m.lambda);
  s.branch_tag = BranchTag::NewtonOnly;
  return s;
}

// ---------------------------------------------------------------------------
// Minimization of J+

namespace {

// Per-mode inverse of |k|^2 D + lambda H_Q, the Hessian of I_lambda at the
// vacuum, as the initial L-BFGS metric on mean-zero pairs.
class VacuumMetric {
 public:
  explicit VacuumMetric(const Model& m) : grid_(m.grid()) {
    const double a = m.k.a(), b = m.k.b(), c = m.k.c(), d = m.k.d(), det = m.k.det();
    const double g1 = a * (b + d), g2 = -b * (a + c);
    const double kq1 = m.lambda / (a * b * det), kq2 = m.lambda * (a + c) * (a + c) / (a * c);
    const double h11 = kq1 * g1 * g1, h12 = kq1 * g1 * g2, h22 = kq1 * g2 * g2 + kq2;
    const auto k2 = grid_.wavenumber_sq();
    m11_.resize(k2.size());
    m12_.resize(k2.size());
    m22_.resize(k2.size());
    for (std::size_t q = 1; q < k2.size(); ++q) {
      const double a11 = k2[q] * d / b + h11, a12 = k2[q] + h12, a22 = k2[q] * a / c + h22;
      const double dd = a11 * a22 - a12 * a12;
      m11_[q] = a22 / dd;
      m12_[q] = -a12 / dd;
      m22_[q] = a11 / dd;
    }
  }

  void apply(const std::vector<double>& in, std::vector<double>& out) const {
    const std::size_t n = grid_.size();
    std::vector<std::complex<double>> z1(grid_.modes()), z2(grid_.modes());
    grid_.forward(std::span(in).subspan(0, n), z1);
    grid_.forward(std::span(in).subspan(n, n), z2);
    kernels::active().apply_mode_matrices(m11_.data(), m12_.data(), m12_.data(), m22_.data(),
                                          z1.data(), z2.data(), z1.size());
    out.resize(2 * n);
    grid_.backward(z1, std::span(out).subspan(0, n));
    grid_.backward(z2, std::span(out).subspan(n, n));
  }

 private:
  const TorusGrid& grid_;
  std::vector<double> m11_, m12_, m22_;
};

bool admissibility_failure(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NotAdmissible:
    case ErrorCode::NegativeDiscriminant:
    case ErrorCode::BracketFailure:
    case ErrorCode::Overflow:
      return true;
    default:
      return false;
  }
}

}  // namespace

SolutionState minimize_j_plus(const Model& m, const SolutionState& init, const SolveOptions& opts,
                              const ProgressSink& sink) {
  opts.validate();
  if (!m.k.variational()) {
    throw Error(ErrorCode::InvalidArgument, "minimization requires b > 0 and c > 0");
  }
  const TorusGrid& grid = m.grid();
  const std::size_t n = grid.size();
  const double wt = grid.weight();
  const auto dot = [&](const std::vector<double>& x, const std::vector<double>& y) {
    return kernels::active().dot(x.data(), y.data(), x.size()) * wt;
  };

  detail::NewtonSystem packer(m);
  std::vector<double> w =
      packer.pack(project_mean_zero(init.w1), project_mean_zero(init.w2));

  struct Eval {
    JPlusValue j;
    std::vector<double> g;
  };
  const auto evaluate = [&](const std::vector<double>& x) {
    const FieldPair f = packer.unpack(x);
    JPlusValue j = j_plus(m, f.f1, f.f2);
    const FieldPair g = projected_gradient(m, f.f1, f.f2, j.c);
    return Eval{std::move(j), packer.pack(g.f1, g.f2)};
  };

  Eval cur = evaluate(w);
  const VacuumMetric metric(m);
  std::deque<std::vector<double>> ss, ys;
  std::deque<double> rhos;
  std::vector<double> history{cur.j.value.total};
  int it = 0;
  std::vector<double> d(2 * n), trial(2 * n), hq;

  for (;; ++it) {
    const double gnorm = std::sqrt(dot(cur.g, cur.g));
    emit(sink, "minimize", it, cur.j.value.total, gnorm);
    if (gnorm <= opts.newton_switch_tol * m.lambda) break;
    if (it >= opts.max_iter) {
      throw Error(ErrorCode::MaxIterations, "J+ minimization did not reach the Newton switch");
    }

    // Two-loop recursion.
    std::vector<double> q = cur.g;
    std::vector<double> alpha(ss.size());
    for (int i = static_cast<int>(ss.size()) - 1; i >= 0; --i) {
      alpha[i] = rhos[i] * dot(ss[i], q);
      for (std::size_t l = 0; l < q.size(); ++l) q[l] -= alpha[i] * ys[i][l];
    }
    metric.apply(q, hq);
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const double beta = rhos[i] * dot(ys[i], hq);
      for (std::size_t l = 0; l < hq.size(); ++l) hq[l] += (alpha[i] - beta) * ss[i][l];
    }
    for (std::size_t l = 0; l < d.size(); ++l) d[l] = -hq[l];
    double slope = dot(cur.g, d);
    if (!(slope < 0.0)) {
      ss.clear();
      ys.clear();
      rhos.clear();
      metric.apply(cur.g, hq);
      for (std::size_t l = 0; l < d.size(); ++l) d[l] = -hq[l];
      slope = dot(cur.g, d);
    }

    double t = 1.0;
    int boundary_backoffs = 0;
    std::optional<Eval> next;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t l = 0; l < w.size(); ++l) trial[l] = w[l] + t * d[l];
      try {
        Eval e = evaluate(trial);
        boundary_backoffs = 0;
        if (e.j.value.total <= cur.j.value.total + 1e-4 * t * slope) {
          next = std::move(e);
          break;
        }
        t *= 0.5;
      } catch (const Error& e) {
        if (!admissibility_failure(e)) throw;
        if (++boundary_backoffs >= opts.max_backoffs) {
          std::ostringstream msg;
          msg << "step halved " << boundary_backoffs
              << " times against the admissible boundary (margins " << cur.j.admissibility.margin1
              << ", " << cur.j.admissibility.margin2 << ")";
          throw Error(ErrorCode::StalledOnBoundary, msg.str());
        }
        t *= opts.backoff;
      }
    }
    if (!next) {
      if (!ss.empty()) {
        ss.clear();
        ys.clear();
        rhos.clear();
        continue;
      }
      break;  // No descent possible at this resolution; Newton decides.
    }

    std::vector<double> s(w.size()), y(w.size());
    for (std::size_t l = 0; l < w.size(); ++l) {
      s[l] = trial[l] - w[l];
      y[l] = next->g[l] - cur.g[l];
    }
    const double sy = dot(s, y);
    if (sy > 1e-14 * std::sqrt(dot(s, s) * dot(y, y))) {
      ss.push_back(std::move(s));
      ys.push_back(std::move(y));
      rhos.push_back(1.0 / sy);
      if (static_cast<int>(ss.size()) > opts.lbfgs_memory) {
        ss.pop_front();
        ys.pop_front();
        rhos.pop_front();
      }
    }
    w = trial;
    cur = std::move(*next);
    history.push_back(cur.j.value.total);
  }

  const FieldPair f = packer.unpack(w);
  SolutionState s{f.f1, f.f2};
  s.c1 = cur.j.c.c1;
  s.c2 = cur.j.c.c2;
  s.lambda = m.lambda;
  s.iterations = it;
  s.branch_tag = BranchTag::Minimizer;
  s.objective_history = std::move(history);
  s.grad_norm = std::sqrt(dot(cur.g, cur.g));
  try {
    return refine_newton(m, s, opts, sink);
  } catch (const Error& e) {
    s.notes.push_back(std::string("Newton refinement failed: ") + e.what());
    s.residual_norm = l2_norm(system_residual(m, s.v1(), s.v2()));
    s.converged = s.grad_norm <= opts.grad_tol * m.lambda;
    return s;
  }
}

// ---------------------------------------------------------------------------
// Drivers

namespace {

bool acceptable(const Model& m, const SolutionState& s) { return s.converged && below_vacuum(m, s); }

Model at_lambda(const Model& m, double lambda) { return Model{m.k, lambda, m.bg}; }

// Newton continuation from `start` (solved at start.lambda) to m.lambda.
SolutionState newton_path(const Model& m, const SolutionState& start, const SolveOptions& opts,
                          const ProgressSink& sink, int depth) {
  try {
    SolutionState s = refine_newton(m, start, opts, sink);
    if (acceptable(m, s)) return s;
  } catch (const Error&) {
  }
  if (depth >= 6) throw Error(ErrorCode::Diverged, "lambda continuation did not converge");
  const double mid = std::sqrt(start.lambda * m.lambda);
  const SolutionState half = newton_path(at_lambda(m, mid), start, opts, sink, depth + 1);
  return newton_path(m, half, opts, sink, depth + 1);
}

}  // namespace

namespace {

SolutionState solve_at(const Model& m, const SolveOptions& opts, const ProgressSink& sink,
                       int depth) {
  const double area = m.grid().area();
  if (auto cert = nonexistence_gate(m.k, m.lambda, m.n(), area)) {
    std::ostringstream msg;
    msg << "lambda = " << m.lambda << " is below the necessary threshold " << cert->lambda_star;
    throw Error(ErrorCode::BelowThreshold, msg.str());
  }
  std::vector<std::string> notes;
  if (m.k.variational()) {
    try {
      const SolutionState init = default_initial_state(m, opts);
      SolutionState s = minimize_j_plus(m, init, opts, sink);
      if (acceptable(m, s)) return s;
      notes.push_back("minimization did not produce a converged state");
    } catch (const Error& e) {
      notes.push_back(std::string("minimization unavailable: ") + e.what());
    }
  }
  const SolutionState start = newton_initial_state(m);
  try {
    SolutionState s = refine_newton(m, start, opts, sink);
    if (acceptable(m, s)) {
      s.branch_tag = BranchTag::NewtonOnly;
      s.notes.insert(s.notes.begin(), notes.begin(), notes.end());
      return s;
    }
  } catch (const Error& e) {
    notes.push_back(std::string("direct Newton failed: ") + e.what());
  }
  // Solve higher up, where the start is better, and come back down.
  double high = 2.0 * m.lambda;
  if (m.n().total() > 0) high = std::max(high, 2.0 * admissibility_floor(m.k, m.n(), area));
  if (depth >= 3) throw Error(ErrorCode::Diverged, "no converged state found");
  const Model upper = at_lambda(m, high);
  SolutionState s = newton_path(m, solve_at(upper, opts, sink, depth + 1), opts, sink, 0);
  s.branch_tag = BranchTag::NewtonOnly;
  s.notes.insert(s.notes.begin(), notes.begin(), notes.end());
  return s;
}

}  // namespace

SolutionState solve(const Model& m, const SolveOptions& opts, const ProgressSink& sink) {
  opts.validate();
  return solve_at(m, opts, sink, 0);
}

SolutionState solve_from(const Model& m, const SolutionState& start, const SolveOptions& opts,
                         const ProgressSink& sink) {
  opts.validate();
  if (auto cert = nonexistence_gate(m.k, m.lambda, m.n(), m.grid().area())) {
    throw Error(ErrorCode::BelowThreshold, "lambda is below the necessary threshold");
  }
  if (m.k.variational()) {
    try {
      SolutionState s = minimize_j_plus(m, start, opts, sink);
      if (acceptable(m, s)) return s;
    } catch (const Error&) {
    }
  }
  SolutionState s = newton_path(m, start, opts, sink, 0);
  s.branch_tag = BranchTag::NewtonOnly;
  return s;
}

std::vector<ContinuationEntry> continuation(const CouplingMatrix& k,
                                            const std::vector<double>& lambdas,
                                            std::shared_ptr<const Background> bg,
                                            const SolveOptions& opts, const ProgressSink& sink) {
  if (lambdas.empty()) throw Error(ErrorCode::InvalidArgument, "empty lambda list");
  const bool up = std::is_sorted(lambdas.begin(), lambdas.end());
  const bool down = std::is_sorted(lambdas.rbegin(), lambdas.rend());
  if (!up && !down) throw Error(ErrorCode::InvalidArgument, "lambda list must be sorted");
  std::vector<ContinuationEntry> out;
  std::optional<SolutionState> prev;
  for (double lambda : lambdas) {
    ContinuationEntry entry;
    entry.lambda = lambda;
    const Model m{k, lambda, bg};
    try {
      entry.state = prev ? solve_from(m, *prev, opts, sink) : solve(m, opts, sink);
    } catch (const Error& e) {
      if (prev) {
        try {
          entry.state = solve(m, opts, sink);
        } catch (const Error& e2) {
          entry.error = e2.what();
        }
      } else {
        entry.error = e.what();
      }
    }
    if (entry.state) prev = entry.state;
    out.push_back(std::move(entry));
  }
  return out;
}

double comparison_energy(const Model& m, const SolutionState& s) {
  if (m.k.variational()) return i_lambda(m, s.v1(), s.v2()).total;
  if (m.k.decoupled()) return decoupled_energy(m, s.v1(), s.v2());
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace csvx
