#include "rdd/lscheme.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <cmath>

namespace rdd {

std::string LschemeConfig::check(double L_theta) const {
  if (!(L > 0.0) || !(atol > 0.0) || !(rtol >= 0.0) || !(lin_tol > 0.0))
    throw std::invalid_argument("lscheme: L and tolerances must be positive");
  if (L <= 0.5 * L_theta)
    throw std::invalid_argument("lscheme: L must exceed L_theta/2");
  if (L < L_theta)
    return "warning: L < L_theta; convergence is only covered by the weaker "
           "theorem condition L > L_theta/2";
  return {};
}

CgFailure::CgFailure(double r)
    : std::runtime_error("cg: no convergence, relative residual " + std::to_string(r)),
      residual(r) {}

CgResult cg_solve(const SpMat& a, const Eigen::VectorXd& b, double tol, int max_iters,
                  const Eigen::VectorXd* x0) {
  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(max_iters);
  cg.compute(a);
  CgResult r;
  r.x = x0 ? cg.solveWithGuess(b, *x0).eval() : cg.solve(b).eval();
  r.iters = static_cast<int>(cg.iterations());
  r.residual = cg.error();
  r.converged = cg.info() == Eigen::Success;
  return r;
}

double mass_norm(const Eigen::VectorXd& mass, const Eigen::VectorXd& v) {
  return std::sqrt(v.dot(mass.cwiseProduct(v)));
}

double weighted_seminorm(const SpMat& stiffness, const Eigen::VectorXd& v) {
  return std::sqrt(std::max(0.0, v.dot(stiffness * v)));
}

namespace {

SpMat shifted_system(const FrozenStep& frozen, double L) {
  SpMat sys = frozen.tau * frozen.stiffness;
  // L M on the diagonal keeps the system SPD where the weight vanishes
  SpMat diag(frozen.mass.size(), frozen.mass.size());
  diag.setIdentity();
  for (Eigen::Index i = 0; i < frozen.mass.size(); ++i)
    diag.coeffRef(i, i) = L * frozen.mass(i);
  return sys + diag;
}

Eigen::VectorXd raw_rhs(const Eigen::VectorXd& u_prev_iter, const FrozenStep& frozen, double L) {
  Eigen::VectorXd theta_it(u_prev_iter.size());
  for (Eigen::Index i = 0; i < u_prev_iter.size(); ++i)
    theta_it(i) = frozen.theta(u_prev_iter(i));
  return frozen.mass.cwiseProduct(L * u_prev_iter - theta_it + frozen.theta_prev) +
         frozen.tau * (frozen.source - frozen.convection);
}

int auto_lin_iters(const LschemeConfig& cfg, Eigen::Index n) {
  return cfg.lin_max_iters > 0 ? cfg.lin_max_iters
                               : std::max<int>(200, static_cast<int>(20 * n));
}

} // namespace

Eigen::VectorXd lscheme_step(const Eigen::VectorXd& u_prev_iter, const FrozenStep& frozen,
                             const DirichletSystem& sys, const LschemeConfig& cfg,
                             int* cg_iters) {
  const Eigen::VectorXd b = sys.constrain_rhs(raw_rhs(u_prev_iter, frozen, cfg.L));
  const CgResult r = cg_solve(sys.matrix(), b, cfg.lin_tol,
                              auto_lin_iters(cfg, u_prev_iter.size()), &u_prev_iter);
  if (!r.converged) throw CgFailure(r.residual);
  if (cg_iters) *cg_iters = r.iters;
  return r.x;
}

LschemeResult lscheme_solve(const Eigen::VectorXd& u_time_prev, const FrozenStep& frozen,
                            const LschemeConfig& cfg) {
  const DirichletSystem sys(shifted_system(frozen, cfg.L), frozen.bc, u_time_prev.size());
  LschemeResult out;
  out.u = u_time_prev;
  for (int i = 1; i <= cfg.max_iters; ++i) {
    int cg_iters = 0;
    Eigen::VectorXd next = lscheme_step(out.u, frozen, sys, cfg, &cg_iters);
    IterationRecord rec;
    rec.increment_norm = mass_norm(frozen.mass, next - out.u);
    rec.weighted_seminorm = weighted_seminorm(frozen.stiffness, next);
    rec.cg_iters = cg_iters;
    out.history.iters.push_back(rec);
    if (cfg.store_iterates) out.history.iterates.push_back(next);
    out.u = std::move(next);
    if (rec.increment_norm <= cfg.atol + cfg.rtol * mass_norm(frozen.mass, out.u)) {
      out.history.converged = true;
      break;
    }
  }
  return out;
}

} // namespace rdd
