#include "gridhorizon/lp.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace gridhorizon::lp {

int LinearProgram::AddVariable(double lower, double upper, double cost) {
  if (std::isnan(lower) || std::isnan(upper) || !std::isfinite(cost)) {
    throw std::invalid_argument("variable bounds and cost must be numbers");
  }
  if (lower > upper) {
    std::ostringstream msg;
    msg << "inverted bounds for variable " << vars_.size() << ": [" << lower
        << ", " << upper << "]";
    throw std::invalid_argument(msg.str());
  }
  if (lower == kInf || upper == -kInf) {
    throw std::invalid_argument("variable bounds exclude every finite value");
  }
  vars_.push_back({lower, upper, cost});
  return static_cast<int>(vars_.size()) - 1;
}

int LinearProgram::AddConstraint(std::span<const Term> terms, Sense sense,
                                 double rhs) {
  if (!std::isfinite(rhs)) {
    throw std::invalid_argument("constraint rhs must be finite");
  }
  Row row{{terms.begin(), terms.end()}, sense, rhs};
  for (const Term& t : row.terms) {
    if (t.var < 0 || t.var >= num_variables()) {
      throw std::out_of_range("constraint references unknown variable id " +
                              std::to_string(t.var));
    }
    if (!std::isfinite(t.coef)) {
      throw std::invalid_argument("constraint coefficient must be finite");
    }
  }
  std::stable_sort(row.terms.begin(), row.terms.end(),
                   [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  merged.reserve(row.terms.size());
  for (const Term& t : row.terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  row.terms = std::move(merged);
  rows_.push_back(std::move(row));
  return static_cast<int>(rows_.size()) - 1;
}

void LinearProgram::SetCost(int var, double cost) {
  if (!std::isfinite(cost)) throw std::invalid_argument("cost must be finite");
  vars_.at(var).cost = cost;
}

void LinearProgram::SetBounds(int var, double lower, double upper) {
  if (lower > upper) {
    throw std::invalid_argument("inverted bounds for variable " +
                                std::to_string(var));
  }
  vars_.at(var).lower = lower;
  vars_.at(var).upper = upper;
}

double LinearProgram::Objective(std::span<const double> x) const {
  double obj = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) obj += vars_[j].cost * x[j];
  return obj;
}

double LinearProgram::MaxViolation(std::span<const double> x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    worst = std::max(worst, vars_[j].lower - x[j]);
    worst = std::max(worst, x[j] - vars_[j].upper);
  }
  for (const Row& r : rows_) {
    double lhs = 0.0;
    for (const Term& t : r.terms) lhs += t.coef * x[t.var];
    switch (r.sense) {
      case Sense::kLessEqual:
        worst = std::max(worst, lhs - r.rhs);
        break;
      case Sense::kGreaterEqual:
        worst = std::max(worst, r.rhs - lhs);
        break;
      case Sense::kEqual:
        worst = std::max(worst, std::abs(lhs - r.rhs));
        break;
    }
  }
  return worst;
}

const char* ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kNumericalFailure:
      return "numerical_failure";
    case SolveStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

namespace {

using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using RowMat = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

// Conic form after presolve and equilibration:
//   min c'x  s.t.  A x = b,  G x + s = h,  s >= 0.
struct ConicForm {
  int n = 0;
  RowMat A, G;
  VectorXd c, b, h;
  VectorXd col_scale;  // x_original = col_scale .* x_scaled
  double cost_scale = 1.0;
  std::vector<int> free_to_orig;
};

// Reduced KKT system
//   [ G' W G + dI   A' ] [dx]   [r1 + G' W r3]
//   [ A            -dI ] [dy] = [r2          ]
// with W = z ./ s, followed by dz = W (G dx - r3).
class KktSolver {
 public:
  KktSolver(const ConicForm& f, const SolverOptions& opt)
      : f_(f), opt_(opt), n_(f.n), p_(static_cast<int>(f.A.rows())),
        m_(static_cast<int>(f.G.rows())) {
    const int dim = n_ + p_;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(dim + f.A.nonZeros() + 2 * f.G.nonZeros());
    for (int j = 0; j < dim; ++j) trip.emplace_back(j, j, 0.0);
    for (int i = 0; i < p_; ++i) {
      for (RowMat::InnerIterator it(f.A, i); it; ++it) {
        trip.emplace_back(n_ + i, static_cast<int>(it.col()), 0.0);
      }
    }
    for (int r = 0; r < m_; ++r) {
      for (RowMat::InnerIterator a(f.G, r); a; ++a) {
        for (RowMat::InnerIterator b(f.G, r); b; ++b) {
          if (b.col() > a.col()) break;
          trip.emplace_back(static_cast<int>(a.col()),
                            static_cast<int>(b.col()), 0.0);
        }
      }
    }
    K_.resize(dim, dim);
    K_.setFromTriplets(trip.begin(), trip.end());
    K_.makeCompressed();
    base_.assign(K_.nonZeros(), 0.0);
    diag_slot_.resize(dim);
    for (int j = 0; j < dim; ++j) diag_slot_[j] = Slot(j, j);
    for (int i = 0; i < p_; ++i) {
      for (RowMat::InnerIterator it(f.A, i); it; ++it) {
        base_[Slot(n_ + i, static_cast<int>(it.col()))] += it.value();
      }
    }
    pair_begin_.assign(m_ + 1, 0);
    for (int r = 0; r < m_; ++r) {
      for (RowMat::InnerIterator a(f.G, r); a; ++a) {
        for (RowMat::InnerIterator b(f.G, r); b; ++b) {
          if (b.col() > a.col()) break;
          double coef = a.value() * b.value();
          pair_slot_.push_back(
              Slot(static_cast<int>(a.col()), static_cast<int>(b.col())));
          pair_coef_.push_back(coef);
        }
      }
      pair_begin_[r + 1] = static_cast<int>(pair_slot_.size());
    }
    ldlt_.analyzePattern(K_);
  }

  // Dependent equality rows can cancel a pivot to exactly zero; the
  // regularization is raised until the factorization succeeds and kept for
  // later iterations. Iterative refinement removes most of the bias.
  bool Factor(const VectorXd& w) {
    w_ = w;
    for (int attempt = 0; attempt < 5; ++attempt) {
      double* val = K_.valuePtr();
      std::copy(base_.begin(), base_.end(), val);
      for (int j = 0; j < n_; ++j) val[diag_slot_[j]] += reg_;
      for (int i = 0; i < p_; ++i) val[diag_slot_[n_ + i]] -= reg_;
      for (int r = 0; r < m_; ++r) {
        for (int k = pair_begin_[r]; k < pair_begin_[r + 1]; ++k) {
          val[pair_slot_[k]] += w[r] * pair_coef_[k];
        }
      }
      ldlt_.factorize(K_);
      if (ldlt_.info() == Eigen::Success) return true;
      reg_ *= 100.0;
    }
    return false;
  }

  // Solves the unreduced system [0 A' G'; A 0 0; G 0 -W^-1] u = r.
  void Solve(const VectorXd& r1, const VectorXd& r2, const VectorXd& r3,
             VectorXd& dx, VectorXd& dy, VectorXd& dz) const {
    VectorXd rhs(n_ + p_);
    rhs.head(n_) = r1 + f_.G.transpose() * w_.cwiseProduct(r3);
    rhs.tail(p_) = r2;
    VectorXd sol = ldlt_.solve(rhs);
    const double rhs_norm = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
    for (int step = 0; step < opt_.refinement_steps; ++step) {
      VectorXd err = rhs - Apply(sol);
      if (err.lpNorm<Eigen::Infinity>() <= 1e-14 * rhs_norm) break;
      sol += ldlt_.solve(err);
    }
    dx = sol.head(n_);
    dy = sol.tail(p_);
    dz = w_.cwiseProduct(f_.G * dx - r3);
  }

 private:
  int Slot(int row, int col) const {
    const int* inner = K_.innerIndexPtr();
    const int* outer = K_.outerIndexPtr();
    const int* lo = inner + outer[col];
    const int* hi = inner + outer[col + 1];
    const int* it = std::lower_bound(lo, hi, row);
    return static_cast<int>(it - inner);
  }

  VectorXd Apply(const VectorXd& sol) const {
    VectorXd out(n_ + p_);
    VectorXd x = sol.head(n_);
    VectorXd y = sol.tail(p_);
    out.head(n_) = f_.G.transpose() * w_.cwiseProduct(f_.G * x) +
                   f_.A.transpose() * y;
    out.tail(p_) = f_.A * x;
    return out;
  }

  const ConicForm& f_;
  const SolverOptions& opt_;
  int n_, p_, m_;
  SpMat K_;
  std::vector<double> base_;
  std::vector<int> diag_slot_;
  std::vector<int> pair_begin_;
  std::vector<int> pair_slot_;
  std::vector<double> pair_coef_;
  VectorXd w_;
  double reg_ = opt_.regularization;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
};

double MaxStep(const VectorXd& v, const VectorXd& dv) {
  double alpha = kInf;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  return alpha;
}

double InfNorm(const VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

// Ruiz equilibration of the stacked [A; G] rows and shared columns.
void Equilibrate(ConicForm& f) {
  const int p = static_cast<int>(f.A.rows());
  const int m = static_cast<int>(f.G.rows());
  VectorXd col = VectorXd::Ones(f.n);
  VectorXd row_a = VectorXd::Ones(p);
  VectorXd row_g = VectorXd::Ones(m);
  for (int pass = 0; pass < 12; ++pass) {
    VectorXd cmax = VectorXd::Zero(f.n);
    VectorXd ra(p), rg(m);
    for (int i = 0; i < p; ++i) {
      double mx = 0.0;
      for (RowMat::InnerIterator it(f.A, i); it; ++it) {
        double a = std::abs(it.value());
        mx = std::max(mx, a);
        cmax[it.col()] = std::max(cmax[it.col()], a);
      }
      ra[i] = mx > 0 ? 1.0 / std::sqrt(mx) : 1.0;
    }
    for (int i = 0; i < m; ++i) {
      double mx = 0.0;
      for (RowMat::InnerIterator it(f.G, i); it; ++it) {
        double a = std::abs(it.value());
        mx = std::max(mx, a);
        cmax[it.col()] = std::max(cmax[it.col()], a);
      }
      rg[i] = mx > 0 ? 1.0 / std::sqrt(mx) : 1.0;
    }
    VectorXd cs(f.n);
    for (int j = 0; j < f.n; ++j) {
      cs[j] = cmax[j] > 0 ? 1.0 / std::sqrt(cmax[j]) : 1.0;
    }
    f.A = ra.asDiagonal() * f.A * cs.asDiagonal();
    f.G = rg.asDiagonal() * f.G * cs.asDiagonal();
    col = col.cwiseProduct(cs);
    row_a = row_a.cwiseProduct(ra);
    row_g = row_g.cwiseProduct(rg);
  }
  f.c = f.c.cwiseProduct(col);
  f.b = f.b.cwiseProduct(row_a);
  f.h = f.h.cwiseProduct(row_g);
  f.col_scale = col;
  f.cost_scale = std::max(1.0, InfNorm(f.c));
  f.c /= f.cost_scale;
}

struct Presolved {
  ConicForm form;
  std::vector<double> fixed_value;  // NaN where the variable is free to move
  bool trivially_infeasible = false;
  double infeasibility = 0.0;
  std::string why;
};

Presolved Presolve(const LinearProgram& lp, double tol) {
  Presolved out;
  const int n_orig = lp.num_variables();
  out.fixed_value.assign(n_orig, std::nan(""));
  std::vector<int> orig_to_free(n_orig, -1);
  ConicForm& f = out.form;
  for (int j = 0; j < n_orig; ++j) {
    const Variable& v = lp.variable(j);
    if (v.lower == v.upper) {
      out.fixed_value[j] = v.lower;
    } else {
      orig_to_free[j] = static_cast<int>(f.free_to_orig.size());
      f.free_to_orig.push_back(j);
    }
  }
  f.n = static_cast<int>(f.free_to_orig.size());

  std::vector<Eigen::Triplet<double>> ta, tg;
  std::vector<double> b, h;
  for (int r = 0; r < lp.num_constraints(); ++r) {
    const Row& row = lp.row(r);
    double rhs = row.rhs;
    bool empty = true;
    for (const Term& t : row.terms) {
      if (orig_to_free[t.var] < 0) {
        rhs -= t.coef * out.fixed_value[t.var];
      } else if (t.coef != 0.0) {
        empty = false;
      }
    }
    if (empty) {
      double viol = 0.0;
      if (row.sense == Sense::kLessEqual) viol = -rhs;
      if (row.sense == Sense::kGreaterEqual) viol = rhs;
      if (row.sense == Sense::kEqual) viol = std::abs(rhs);
      if (viol > tol) {
        out.trivially_infeasible = true;
        out.infeasibility = std::max(out.infeasibility, viol);
        out.why = "row " + std::to_string(r) + " has no free terms";
      }
      continue;
    }
    const double sign = row.sense == Sense::kGreaterEqual ? -1.0 : 1.0;
    if (row.sense == Sense::kEqual) {
      const int i = static_cast<int>(b.size());
      for (const Term& t : row.terms) {
        if (orig_to_free[t.var] >= 0) ta.emplace_back(i, orig_to_free[t.var], t.coef);
      }
      b.push_back(rhs);
    } else {
      const int i = static_cast<int>(h.size());
      for (const Term& t : row.terms) {
        if (orig_to_free[t.var] >= 0) {
          tg.emplace_back(i, orig_to_free[t.var], sign * t.coef);
        }
      }
      h.push_back(sign * rhs);
    }
  }
  for (int k = 0; k < f.n; ++k) {
    const Variable& v = lp.variable(f.free_to_orig[k]);
    if (std::isfinite(v.lower)) {
      tg.emplace_back(static_cast<int>(h.size()), k, -1.0);
      h.push_back(-v.lower);
    }
    if (std::isfinite(v.upper)) {
      tg.emplace_back(static_cast<int>(h.size()), k, 1.0);
      h.push_back(v.upper);
    }
  }
  f.A.resize(static_cast<int>(b.size()), f.n);
  f.A.setFromTriplets(ta.begin(), ta.end());
  f.G.resize(static_cast<int>(h.size()), f.n);
  f.G.setFromTriplets(tg.begin(), tg.end());
  f.A.makeCompressed();
  f.G.makeCompressed();
  f.b = Eigen::Map<const VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  f.h = Eigen::Map<const VectorXd>(h.data(), static_cast<Eigen::Index>(h.size()));
  f.c.resize(f.n);
  for (int k = 0; k < f.n; ++k) f.c[k] = lp.variable(f.free_to_orig[k]).cost;
  return out;
}

}  // namespace

LpSolution Solve(const LinearProgram& program, const SolverOptions& options) {
  LpSolution sol;
  const int n_orig = program.num_variables();
  Presolved pre = Presolve(program, options.tolerance);
  if (pre.trivially_infeasible) {
    sol.status = SolveStatus::kInfeasible;
    sol.infeasibility_measure = pre.infeasibility;
    sol.diagnostics = pre.why;
    sol.x.assign(n_orig, 0.0);
    return sol;
  }
  ConicForm& f = pre.form;
  Equilibrate(f);
  const int n = f.n;
  const int p = static_cast<int>(f.A.rows());
  const int m = static_cast<int>(f.G.rows());

  auto finish_x = [&](const VectorXd& xs, double tau) {
    sol.x.assign(n_orig, 0.0);
    for (int j = 0; j < n_orig; ++j) {
      if (!std::isnan(pre.fixed_value[j])) sol.x[j] = pre.fixed_value[j];
    }
    for (int k = 0; k < n; ++k) {
      sol.x[f.free_to_orig[k]] = f.col_scale[k] * xs[k] / tau;
    }
    sol.objective = program.Objective(sol.x);
    sol.max_primal_residual = program.MaxViolation(sol.x);
  };

  KktSolver kkt(f, options);
  VectorXd x(n), y(p), z(m), s(m);
  double tau = 1.0, kappa = 1.0;

  // Initial point: least-squares primal and dual estimates, shifted into the
  // interior of the orthant.
  {
    if (!kkt.Factor(VectorXd::Ones(m))) {
      sol.status = SolveStatus::kNumericalFailure;
      sol.diagnostics = "initial KKT factorization failed";
      sol.x.assign(n_orig, 0.0);
      return sol;
    }
    VectorXd dx, dy, dz;
    kkt.Solve(VectorXd::Zero(n), f.b, f.h, dx, dy, dz);
    x = dx;
    s = -dz;
    double ap = m > 0 ? -s.minCoeff() : -1.0;
    if (ap >= 0.0) s.array() += 1.0 + ap;
    kkt.Solve(-f.c, VectorXd::Zero(p), VectorXd::Zero(m), dx, dy, dz);
    y = dy;
    z = dz;
    double ad = m > 0 ? -z.minCoeff() : -1.0;
    if (ad >= 0.0) z.array() += 1.0 + ad;
  }

  const double tol = options.tolerance;
  const double bnorm = std::max(1.0, InfNorm(f.b));
  const double hnorm = std::max(1.0, InfNorm(f.h));
  const double cnorm = std::max(1.0, InfNorm(f.c));
  VectorXd best_x = x;
  double best_tau = tau;
  double best_merit = kInf;

  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    sol.iterations = iter;
    VectorXd rx = f.A.transpose() * y + f.G.transpose() * z + f.c * tau;
    VectorXd ry = -(f.A * x) + f.b * tau;
    VectorXd rz = s + f.G * x - f.h * tau;
    const double cx = f.c.dot(x);
    const double by = f.b.dot(y);
    const double hz = f.h.dot(z);
    const double rt = kappa + cx + by + hz;
    const double mu = (s.dot(z) + kappa * tau) / (m + 1);

    const double pres = std::max(InfNorm(ry) / bnorm, InfNorm(rz) / hnorm) / tau;
    const double dres = InfNorm(rx) / cnorm / tau;
    const double pcost = cx / tau;
    const double dcost = -(by + hz) / tau;
    const double gap = s.dot(z) / (tau * tau);
    const double rel_gap = gap / std::max(1e-12, std::min(std::abs(pcost), std::abs(dcost)));
    const double merit = std::max({pres, dres, std::min(gap, rel_gap)});
    if (merit < best_merit) {
      best_merit = merit;
      best_x = x;
      best_tau = tau;
    }

    if (pres < tol && dres < tol && (gap < tol || rel_gap < tol)) {
      finish_x(x, tau);
      sol.status = SolveStatus::kOptimal;
      return sol;
    }
    if (by + hz < 0.0) {
      VectorXd ray = f.A.transpose() * y + f.G.transpose() * z;
      const double ratio = InfNorm(ray) / -(by + hz);
      if (ratio < tol) {
        sol.status = SolveStatus::kInfeasible;
        sol.infeasibility_measure =
            -(by + hz) / std::max(1e-300, InfNorm(y) + InfNorm(z));
        sol.diagnostics = "dual ray certifies primal infeasibility";
        finish_x(x, std::max(tau, 1e-300));
        return sol;
      }
    }
    if (cx < 0.0) {
      const double ratio =
          std::max(InfNorm(f.A * x), InfNorm(f.G * x + s)) / -cx;
      if (ratio < tol) {
        sol.status = SolveStatus::kUnbounded;
        sol.infeasibility_measure = -cx / std::max(1e-300, InfNorm(x));
        sol.diagnostics = "primal ray certifies unboundedness";
        finish_x(x, std::max(tau, 1e-300));
        return sol;
      }
    }
    if (iter == options.max_iterations) break;

    VectorXd w = z.cwiseQuotient(s);
    if (!kkt.Factor(w)) {
      finish_x(best_x, best_tau);
      sol.status = SolveStatus::kNumericalFailure;
      sol.diagnostics = "KKT factorization failed at iteration " + std::to_string(iter);
      return sol;
    }
    VectorXd x2, y2, z2;
    kkt.Solve(-f.c, f.b, f.h, x2, y2, z2);
    const double denom_base = kappa / tau - f.c.dot(x2) - f.b.dot(y2) - f.h.dot(z2);

    // Solves the linearized embedding for the given residual targets.
    auto direction = [&](double scale, const VectorXd& r5, double r6,
                         VectorXd& dx, VectorXd& dy, VectorXd& dz, VectorXd& ds,
                         double& dtau, double& dkappa) {
      VectorXd r1 = -scale * rx;
      VectorXd r2 = -scale * ry;
      VectorXd r3 = scale * rz;
      const double r4 = scale * rt;
      VectorXd x1, y1, z1;
      kkt.Solve(r1, -r2, -(r3 + r5.cwiseQuotient(z)), x1, y1, z1);
      dtau = (r4 + r6 / tau + f.c.dot(x1) + f.b.dot(y1) + f.h.dot(z1)) / denom_base;
      dx = x1 + dtau * x2;
      dy = y1 + dtau * y2;
      dz = z1 + dtau * z2;
      ds = (r5 - s.cwiseProduct(dz)).cwiseQuotient(z);
      dkappa = (r6 - kappa * dtau) / tau;
    };
    auto step_to_boundary = [&](const VectorXd& ds, const VectorXd& dz,
                                double dtau, double dkappa) {
      double a = std::min(MaxStep(s, ds), MaxStep(z, dz));
      if (dtau < 0) a = std::min(a, -tau / dtau);
      if (dkappa < 0) a = std::min(a, -kappa / dkappa);
      return a;
    };

    VectorXd dxa, dya, dza, dsa;
    double dta, dka;
    VectorXd r5 = -s.cwiseProduct(z);
    direction(1.0, r5, -kappa * tau, dxa, dya, dza, dsa, dta, dka);
    const double alpha_aff = std::min(1.0, step_to_boundary(dsa, dza, dta, dka));
    const double mu_aff =
        ((s + alpha_aff * dsa).dot(z + alpha_aff * dza) +
         (kappa + alpha_aff * dka) * (tau + alpha_aff * dta)) /
        (m + 1);
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    VectorXd dx, dy, dz, ds;
    double dtau, dkappa;
    VectorXd r5c = -s.cwiseProduct(z) - dsa.cwiseProduct(dza);
    r5c.array() += sigma * mu;
    direction(1.0 - sigma, r5c, -kappa * tau - dka * dta + sigma * mu, dx, dy,
              dz, ds, dtau, dkappa);
    const double alpha =
        std::min(1.0, 0.99 * step_to_boundary(ds, dz, dtau, dkappa));
    if (!std::isfinite(alpha) || !dx.allFinite() || alpha < 1e-12) {
      finish_x(best_x, best_tau);
      sol.status = SolveStatus::kNumericalFailure;
      sol.diagnostics = "step length collapsed at iteration " + std::to_string(iter);
      return sol;
    }
    x += alpha * dx;
    y += alpha * dy;
    z += alpha * dz;
    s += alpha * ds;
    tau += alpha * dtau;
    kappa += alpha * dkappa;
  }

  finish_x(best_x, best_tau);
  sol.status = SolveStatus::kIterationLimit;
  std::ostringstream msg;
  msg << "iteration limit reached; best merit " << best_merit;
  sol.diagnostics = msg.str();
  return sol;
}

}  // namespace gridhorizon::lp
