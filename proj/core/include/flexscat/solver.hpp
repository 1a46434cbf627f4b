#pragma once

#include <functional>
#include <string>
#include <vector>

#include "flexscat/operator.hpp"

namespace flexscat {

struct SolveConfig {
  double rel_tolerance = 1e-12;
  int max_iterations = 500;
  int restart = 0;  // 0: no restart
};

struct SolveResult {
  std::vector<cdouble> x;
  int iterations = 0;
  // ||b - A x_j|| / ||b|| as estimated by the Arnoldi recurrence, starting with j = 0
  std::vector<double> residual_history;
  bool converged = false;
  // recomputed from scratch at the end
  double true_residual = 0.0;
};

using LinearMap = std::function<std::vector<cdouble>(const std::vector<cdouble>&)>;

// GMRES with modified Gram-Schmidt Arnoldi and Givens rotations, zero initial guess.
SolveResult gmres_solve(const LinearMap& apply, const std::vector<cdouble>& b, const SolveConfig& cfg = {});

// Everything needed to run one scattering problem.
struct ScatterProblem {
  IcePreset ice;
  ThicknessProfile profile = ConstantProfile{};
  Grid grid;  // must cover the support of the perturbation
  Incident incident;
  SolveConfig solver;
  int order = 6;
};

struct ScatterSolution {
  DispersionData dispersion;
  CoefficientField field;  // on the full problem grid
  Grid support;            // grid the density lives on (empty problems: 1 node)
  CorrectionTable table;
  DensityGrid mu;
  DensityGrid rhs;
  SolveResult stats;
  std::vector<std::string> warnings;
};

// Builds coefficients, restricts to the support box, solves for mu.
ScatterSolution solve_scatter(const ScatterProblem& p);

}  // namespace flexscat
