#pragma once

// Dense semidefinite programming: problem container, primal-dual interior-point
// solver, independent residual verification, Hermitian-to-real embedding and a
// plain-text dump format.

#include <map>
#include <string>
#include <vector>

#include "dfrc/types.hpp"

namespace dfrc::sdp {

enum class Sense { Equal, LessEqual, GreaterEqual };

/// Symmetric coefficient matrix acting on one PSD block.
struct BlockTerm {
  int block = 0;
  RMat coeff;
};

/// sum_b tr(coeff_b X_b)  (sense)  rhs
struct Constraint {
  std::vector<BlockTerm> terms;
  Sense sense = Sense::Equal;
  double rhs = 0.0;
};

/// Named rectangular window into a block. When `complex` is set the block is the
/// realification of a Hermitian block and the window is in complex coordinates.
struct View {
  int block = 0;
  int row = 0;
  int col = 0;
  int rows = 0;
  int cols = 0;
  bool complex = false;
};

/// maximize sum_b tr(C_b X_b) subject to linear constraints and X_b PSD.
struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<RMat> objective;
  std::vector<Constraint> constraints;
  std::map<std::string, View> views;

  int add_block(int dim);
  int num_blocks() const { return static_cast<int>(block_dims.size()); }
  /// Throws ConfigError on dimension mismatches or non-symmetric coefficients.
  void validate() const;
};

enum class SolveStatus { Optimal, Infeasible, SlowProgress };
enum class Certificate { None, PrimalInfeasible, DualInfeasible };

const char* to_string(SolveStatus status);

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

/// Duals follow the maximization form: Z = sum_i y_i A_i - C is PSD, y_i >= 0 for
/// `<=` rows and y_i <= 0 for `>=` rows.
struct SdpSolution {
  SolveStatus status = SolveStatus::SlowProgress;
  Certificate certificate = Certificate::None;
  std::vector<RMat> blocks;
  RVec duals;
  double objective = 0.0;
  double dual_objective = 0.0;
  Residuals residuals;
  int iterations = 0;
};

struct SolverOptions {
  double tol = 1e-7;
  int max_iter = 100;
};

/// Homogeneous self-dual primal-dual path following with Nesterov-Todd scaling and
/// Mehrotra predictor-corrector steps. Inequalities become 1x1 slack blocks.
SdpSolution solve(const SdpProblem& problem, const SolverOptions& options = {});

struct VerifyReport {
  double primal_violation = 0.0; ///< max_i violation_i / (||A_i|| ||X|| + |b_i|)
  double cone_violation = 0.0;   ///< max_b max(0, -lambda_min(X_b)) / max(1, ||X_b||)
  double dual_violation = 0.0;   ///< dual cone and sign violations, relative to 1 + ||C||
  double gap = 0.0;              ///< |p - d| / (1 + |p| + |d|)
  bool ok = false;
  std::vector<std::string> issues;
};

/// Recomputes every residual of `solution` directly from `problem`.
VerifyReport verify(const SdpSolution& solution, const SdpProblem& problem, double tol = 1e-6);

/// H -> [[Re H, -Im H], [Im H, Re H]]; throws ConfigError if H is not Hermitian.
RMat realify(const CMat& hermitian);
/// Inverse of realify, averaging the redundant copies.
CMat derealify(const RMat& real_block);

struct HermitianTerm {
  int block = 0;
  CMat coeff;
};

struct HermitianConstraint {
  std::vector<HermitianTerm> terms;
  Sense sense = Sense::Equal;
  double rhs = 0.0;
};

/// Complex analogue of SdpProblem over Hermitian PSD blocks; views are complex.
struct HermitianProblem {
  std::vector<int> block_dims;
  std::vector<CMat> objective;
  std::vector<HermitianConstraint> constraints;
  std::map<std::string, View> views;

  int add_block(int dim);
};

/// Real problem with the same optimal value: every Hermitian block of size n becomes
/// a real block of size 2n, coefficients map to realify(A)/2.
SdpProblem realify(const HermitianProblem& problem);

/// Window `name` of a solved problem (derealified first when the view is complex).
CMat complex_view(const SdpSolution& solution, const SdpProblem& problem, const std::string& name);
RMat real_view(const SdpSolution& solution, const SdpProblem& problem, const std::string& name);

/// Plain-text block format: header, then every matrix row-major.
std::string to_text(const SdpProblem& problem);
SdpProblem from_text(const std::string& text);

} // namespace dfrc::sdp
