#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace gridhorizon::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct Term {
  int var;
  double coef;
};

struct Variable {
  double lower;
  double upper;
  double cost;
};

struct Row {
  std::vector<Term> terms;  // duplicates summed, sorted by var, zeros kept
  Sense sense;
  double rhs;
};

// Minimization LP with bounded variables and sparse rows.
//
// Ids are dense and assigned in insertion order. Duplicate (row, var) pairs
// inside one AddConstraint call are summed when the row is stored.
class LinearProgram {
 public:
  int AddVariable(double lower, double upper, double cost);
  int AddConstraint(std::span<const Term> terms, Sense sense, double rhs);
  int AddConstraint(std::initializer_list<Term> terms, Sense sense,
                    double rhs) {
    return AddConstraint(std::span<const Term>(terms.begin(), terms.size()),
                         sense, rhs);
  }

  void SetCost(int var, double cost);
  void SetBounds(int var, double lower, double upper);

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }
  const Variable& variable(int id) const { return vars_.at(id); }
  const Row& row(int id) const { return rows_.at(id); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }

  double Objective(std::span<const double> x) const;
  // Largest bound or row violation of x, in the program's own units.
  double MaxViolation(std::span<const double> x) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
};

enum class SolveStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kNumericalFailure,
  kIterationLimit,
};

const char* ToString(SolveStatus status);

struct SolverOptions {
  double tolerance = 1e-8;
  int max_iterations = 120;
  double regularization = 1e-9;
  int refinement_steps = 4;
};

struct LpSolution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
  double max_primal_residual = 0.0;
  // Strength of the Farkas-type certificate when infeasible or unbounded.
  double infeasibility_measure = 0.0;
  std::string diagnostics;

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

// Homogeneous self-dual primal-dual interior point method (Mehrotra
// predictor-corrector) on the equilibrated program. Fixed variables and
// empty rows are presolved away. Deterministic for a given program.
LpSolution Solve(const LinearProgram& program, const SolverOptions& options = {});

// CPLEX LP text format; variables named x<id>, rows c<id>.
std::string ToLpFormat(const LinearProgram& program);

}  // namespace gridhorizon::lp
