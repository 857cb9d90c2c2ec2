#include "chstab/stepper.hpp"

#include "chstab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

namespace chstab {

std::string to_string(SolverMode mode) { return mode == SolverMode::newton ? "newton" : "fixed_point"; }

SolverMode solver_mode_from_string(const std::string& name) {
  if (name == "fixed_point") return SolverMode::fixed_point;
  if (name == "newton") return SolverMode::newton;
  throw std::invalid_argument("unknown solver mode '" + name + "'");
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("solver tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("solver max_iter must be at least 1");
  if (!(linear_tol > 0.0)) throw std::invalid_argument("solver linear_tol must be positive");
  if (linear_max_iter < 1 || gmres_restart < 1) throw std::invalid_argument("linear solver limits must be positive");
  if (stabilization && !(*stabilization >= 0.0)) throw std::invalid_argument("stabilization must be nonnegative");
}

namespace {

std::string nonconvergence_message(int iters, double residual) {
  std::ostringstream os;
  os << "nonlinear solve did not converge after " << iters << " iterations (relative residual " << residual << ")";
  return os.str();
}

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

// The step equation in spectral form, R_hat = (1 + k eps |k|^4) u_hat + k |k|^2 f_hat - u_n_hat.
class ImplicitSystem {
 public:
  ImplicitSystem(const Field& u_n, double k, double epsilon, const PolynomialPotential& P, bool dealias)
      : grid_(u_n.grid_ptr()), P_(P), k_(k), dealias_(dealias), un_hat_(forward(u_n)) {
    const auto k2 = grid_->k_squared();
    diag_.resize(k2.size());
    for (std::size_t i = 0; i < k2.size(); ++i) diag_[i] = 1.0 + k * epsilon * k2[i] * k2[i];
    const double norm = norm_l2(u_n);
    scale_ = std::max(1.0, norm);
    // Small states are solved to the same relative accuracy as O(1) states.
    threshold_factor_ = norm > 0.0 ? norm / scale_ : 1.0;
  }

  const GridPtr& grid() const { return grid_; }
  const SpectralField& un_hat() const { return un_hat_; }
  double k() const { return k_; }
  double diag(std::size_t i) const { return diag_[i]; }
  double k2(std::size_t i) const { return grid_->k_squared(i); }
  double residual_scale() const { return scale_; }
  bool converged(double relative_residual, double tol) const { return relative_residual <= tol * threshold_factor_; }

  SpectralField nonlinear_hat(const Field& u) const {
    Field fu(grid_);
    for (std::size_t i = 0; i < u.size(); ++i) fu[i] = P_.f(u[i]);
    auto g = forward(fu);
    if (dealias_) dealias_two_thirds(g);
    return g;
  }

  SpectralField residual_hat(const SpectralField& u_hat, const SpectralField& f_hat) const {
    SpectralField r(grid_);
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] = diag_[i] * u_hat[i] + k_ * k2(i) * f_hat[i] - un_hat_[i];
    return r;
  }

  double relative_residual(const SpectralField& u_hat, const SpectralField& f_hat) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < u_hat.size(); ++i)
      sum += std::norm(diag_[i] * u_hat[i] + k_ * k2(i) * f_hat[i] - un_hat_[i]);
    return std::sqrt(grid_->area() * sum) / scale_;
  }

  bool dealias() const { return dealias_; }
  const PolynomialPotential& potential() const { return P_; }

 private:
  GridPtr grid_;
  const PolynomialPotential& P_;
  double k_;
  bool dealias_;
  SpectralField un_hat_;
  std::vector<double> diag_;
  double scale_ = 1.0;
  double threshold_factor_ = 1.0;
};

// Midpoint of the range of f' over the values of u, clipped at zero. This
// centres the spectrum of f' - S and keeps the fixed-point map contractive for
// the step sizes the energy bound allows.
double auto_stabilization(const Field& u, const PolynomialPotential& P) {
  if (P.is_zero()) return 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : u.values()) {
    const double d = P.df(v);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return std::max(0.0, 0.5 * (lo + hi));
}

Field starting_point(const Field& u_n, const Field* guess) {
  if (!guess) return u_n;
  if (!guess->grid().same_as(u_n.grid())) throw std::invalid_argument("initial guess lives on a different grid");
  return *guess;
}

// Restarted GMRES on real vectors with a Euclidean inner product. Solves
// op(x) = b from x = 0.
struct GmresResult {
  std::vector<double> x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

template <class Op>
GmresResult gmres(Op&& op, const std::vector<double>& b, double tol, int restart, int max_iter) {
  const std::size_t n = b.size();
  auto dot = [](const std::vector<double>& a, const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * c[i];
    return s;
  };
  const double b_norm = std::sqrt(dot(b, b));
  GmresResult out;
  out.x.assign(n, 0.0);
  if (b_norm == 0.0) {
    out.converged = true;
    return out;
  }

  std::vector<double> r = b;
  double beta = b_norm;
  while (out.iterations < max_iter) {
    const int m = restart;
    std::vector<std::vector<double>> V(static_cast<std::size_t>(m) + 1, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> H(static_cast<std::size_t>(m) + 1, std::vector<double>(static_cast<std::size_t>(m), 0.0));
    std::vector<double> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m)), g(static_cast<std::size_t>(m) + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) V[0][i] = r[i] / beta;
    g[0] = beta;

    int j = 0;
    for (; j < m && out.iterations < max_iter; ++j) {
      ++out.iterations;
      const auto ju = static_cast<std::size_t>(j);
      std::vector<double> w = op(V[ju]);
      for (std::size_t i = 0; i <= ju; ++i) {
        H[i][ju] = dot(w, V[i]);
        for (std::size_t q = 0; q < n; ++q) w[q] -= H[i][ju] * V[i][q];
      }
      H[ju + 1][ju] = std::sqrt(dot(w, w));
      if (H[ju + 1][ju] > 0.0)
        for (std::size_t q = 0; q < n; ++q) V[ju + 1][q] = w[q] / H[ju + 1][ju];

      for (std::size_t i = 0; i < ju; ++i) {
        const double t = cs[i] * H[i][ju] + sn[i] * H[i + 1][ju];
        H[i + 1][ju] = -sn[i] * H[i][ju] + cs[i] * H[i + 1][ju];
        H[i][ju] = t;
      }
      const double denom = std::hypot(H[ju][ju], H[ju + 1][ju]);
      cs[ju] = denom == 0.0 ? 1.0 : H[ju][ju] / denom;
      sn[ju] = denom == 0.0 ? 0.0 : H[ju + 1][ju] / denom;
      H[ju][ju] = denom;
      H[ju + 1][ju] = 0.0;
      g[ju + 1] = -sn[ju] * g[ju];
      g[ju] = cs[ju] * g[ju];

      if (std::abs(g[ju + 1]) <= tol * b_norm || H[ju][ju] == 0.0) {
        ++j;
        break;
      }
    }

    // Back substitution for the j x j upper-triangular system.
    std::vector<double> y(static_cast<std::size_t>(j), 0.0);
    for (int i = j - 1; i >= 0; --i) {
      const auto iu = static_cast<std::size_t>(i);
      double s = g[iu];
      for (std::size_t q = iu + 1; q < static_cast<std::size_t>(j); ++q) s -= H[iu][q] * y[q];
      y[iu] = H[iu][iu] == 0.0 ? 0.0 : s / H[iu][iu];
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(j); ++i)
      for (std::size_t q = 0; q < n; ++q) out.x[q] += y[i] * V[i][q];

    // True residual for the restart and the convergence verdict.
    const auto ax = op(out.x);
    for (std::size_t q = 0; q < n; ++q) r[q] = b[q] - ax[q];
    beta = std::sqrt(dot(r, r));
    out.relative_residual = beta / b_norm;
    if (out.relative_residual <= tol) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

}  // namespace

NonConvergence::NonConvergence(int iters, double residual)
    : std::runtime_error(nonconvergence_message(iters, residual)), iters_(iters), residual_(residual) {}

double step_residual(const Field& u, const Field& u_n, double k, double epsilon, const PolynomialPotential& P,
                     bool dealias) {
  ImplicitSystem sys(u_n, k, epsilon, P, dealias);
  return sys.relative_residual(forward(u), sys.nonlinear_hat(u));
}

SolveResult fixed_point_solve(const Field& u_n, double k, double epsilon, const PolynomialPotential& P,
                              const SolverConfig& cfg, const Field* initial_guess) {
  cfg.validate();
  if (!(k > 0.0) || !(epsilon > 0.0)) throw std::invalid_argument("step size and epsilon must be positive");
  ImplicitSystem sys(u_n, k, epsilon, P, cfg.dealias);

  Field u = starting_point(u_n, initial_guess);
  const double S = cfg.stabilization ? *cfg.stabilization : auto_stabilization(u_n, P);
  SpectralField u_hat = forward(u);
  SpectralField f_hat = sys.nonlinear_hat(u);
  double res = sys.relative_residual(u_hat, f_hat);

  int it = 0;
  while (!sys.converged(res, cfg.tol)) {
    if (it >= cfg.max_iter) throw NonConvergence(it, res);
    for (std::size_t i = 0; i < u_hat.size(); ++i) {
      const double k2 = sys.k2(i);
      u_hat[i] = (sys.un_hat()[i] - k * k2 * (f_hat[i] - S * u_hat[i])) / (sys.diag(i) + k * S * k2);
    }
    u = backward(u_hat);
    ++it;
    if (!u.all_finite()) throw NonConvergence(it, std::numeric_limits<double>::infinity());
    f_hat = sys.nonlinear_hat(u);
    res = sys.relative_residual(u_hat, f_hat);
  }
  return {std::move(u), it, res};
}

SolveResult newton_solve(const Field& u_n, double k, double epsilon, const PolynomialPotential& P,
                         const SolverConfig& cfg, const Field* initial_guess) {
  cfg.validate();
  if (!(k > 0.0) || !(epsilon > 0.0)) throw std::invalid_argument("step size and epsilon must be positive");
  ImplicitSystem sys(u_n, k, epsilon, P, cfg.dealias);
  const GridPtr& grid = sys.grid();
  const std::size_t size = grid->size();

  Field u = starting_point(u_n, initial_guess);
  SpectralField u_hat = forward(u);
  SpectralField f_hat = sys.nonlinear_hat(u);
  double res = sys.relative_residual(u_hat, f_hat);

  auto precondition = [&](const std::vector<double>& y) {
    SpectralField g = forward(Field(grid, y));
    for (std::size_t i = 0; i < size; ++i) g[i] /= sys.diag(i);
    return backward(g);
  };

  int it = 0;
  while (!sys.converged(res, cfg.tol)) {
    if (it >= cfg.max_iter) throw NonConvergence(it, res);

    std::vector<double> slope(size);
    for (std::size_t i = 0; i < size; ++i) slope[i] = P.df(u[i]);

    // (J P^{-1}) y = y + k A (f'(u) P^{-1} y)
    auto op = [&](const std::vector<double>& y) {
      Field z = precondition(y);
      for (std::size_t i = 0; i < size; ++i) z[i] *= slope[i];
      SpectralField g = forward(z);
      if (sys.dealias()) dealias_two_thirds(g);
      for (std::size_t i = 0; i < size; ++i) g[i] *= k * sys.k2(i);
      Field az = backward(g);
      std::vector<double> out(y);
      for (std::size_t i = 0; i < size; ++i) out[i] += az[i];
      return out;
    };

    const Field r = backward(sys.residual_hat(u_hat, f_hat));
    std::vector<double> rhs(size);
    for (std::size_t i = 0; i < size; ++i) rhs[i] = -r[i];
    const auto lin = gmres(op, rhs, cfg.linear_tol, cfg.gmres_restart, cfg.linear_max_iter);
    if (!lin.converged) {
      std::ostringstream os;
      os << "GMRES stopped at relative residual " << lin.relative_residual << " after " << lin.iterations
         << " iterations";
      throw LinearSolveFailure(os.str());
    }
    const Field delta = precondition(lin.x);

    // Backtracking on the residual norm.
    double lambda = 1.0;
    Field trial = u;
    SpectralField trial_hat = u_hat, trial_f = f_hat;
    double trial_res = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 12; ++attempt) {
      trial = u;
      for (std::size_t i = 0; i < size; ++i) trial[i] += lambda * delta[i];
      if (trial.all_finite()) {
        trial_hat = forward(trial);
        trial_f = sys.nonlinear_hat(trial);
        trial_res = sys.relative_residual(trial_hat, trial_f);
        if (trial_res <= (1.0 - 1e-4 * lambda) * res) break;
      }
      lambda *= 0.5;
    }
    ++it;
    if (!std::isfinite(trial_res)) throw NonConvergence(it, res);
    u = std::move(trial);
    u_hat = std::move(trial_hat);
    f_hat = std::move(trial_f);
    res = trial_res;
  }
  return {std::move(u), it, res};
}

StepOutcome step(const Field& u_n, double k, double epsilon, const PolynomialPotential& P, const SolverConfig& cfg,
                 const Field* initial_guess) {
  if (!u_n.all_finite()) throw std::invalid_argument("step input contains non-finite values");
  SolveResult solved = cfg.mode == SolverMode::newton ? newton_solve(u_n, k, epsilon, P, cfg, initial_guess)
                                                      : fixed_point_solve(u_n, k, epsilon, P, cfg, initial_guess);
  Field omega = chemical_potential(solved.u, epsilon, P);
  return {std::move(solved.u), std::move(omega), solved.iters, solved.residual, k};
}

}  // namespace chstab
