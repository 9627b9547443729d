#ifndef LSQRBF_LINALG_HPP
#define LSQRBF_LINALG_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace lsqrbf {

/// Input matrix is not symmetric to the required tolerance.
class AsymmetricMatrixError : public std::invalid_argument
{
public:
   using std::invalid_argument::invalid_argument;
};

/// A nonpositive pivot appeared during Cholesky factorization.
class NotPositiveDefiniteError : public std::runtime_error
{
public:
   using std::runtime_error::runtime_error;
};

/// Throws AsymmetricMatrixError unless |A - A^T| <= tol * max|A| entrywise.
void require_symmetric(const Eigen::MatrixXd& A, double tol = 1.0e-12);

/// Lower-triangular Cholesky factor L with A = L L^T.
class SpdFactorization
{
public:
   /// Throws AsymmetricMatrixError or NotPositiveDefiniteError.
   explicit SpdFactorization(const Eigen::MatrixXd& A);

   Eigen::Index size() const { return llt_.rows(); }
   Eigen::MatrixXd lower() const { return llt_.matrixL(); }
   Eigen::VectorXd solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }
   /// Reciprocal 1-norm condition estimate.
   double rcond() const { return llt_.rcond(); }
   /// log det A = 2 sum log L_ii.
   double log_determinant() const;

private:
   Eigen::LLT<Eigen::MatrixXd> llt_;
};

struct SolveResult
{
   Eigen::VectorXd c;
   double relative_residual = 0.0;
   /// Estimated 1-norm condition number.
   double cond_estimate = 1.0;
   /// Set when the estimate exceeds the reliable range (1e10).
   bool ill_conditioned = false;
   std::string warning;
};

/// Solves A c = b for symmetric positive definite A.
SolveResult cholesky_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

struct SpectrumEstimate
{
   enum class Method { dense, iterative };

   double lambda_max = 0.0;
   double lambda_min = 0.0;
   double cond = 0.0;
   Method method = Method::dense;
   /// False when an iteration hit its limit; the values are the last iterates.
   bool converged = true;
};

/** Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
    Stops when the off-diagonal Frobenius norm is <= tol * ||A||_F. */
Eigen::VectorXd jacobi_eigenvalues(const Eigen::MatrixXd& A, double tol = 1.0e-12,
                                   int max_sweeps = 100);

struct ConditionOptions
{
   /// Largest size handled by the dense Jacobi solver.
   Eigen::Index dense_limit = 400;
   double tolerance = 1.0e-8;
   int max_iterations = 10000;
};

/** cond_2(A) = lambda_max / lambda_min. Dense Jacobi up to dense_limit,
    otherwise power iteration for lambda_max and inverse iteration through
    the Cholesky factor for lambda_min. */
SpectrumEstimate condition_number(const Eigen::MatrixXd& A, const ConditionOptions& options = {});

/// Same, reusing an existing factorization for the inverse iteration.
SpectrumEstimate condition_number(const Eigen::MatrixXd& A, const SpdFactorization& factor,
                                  const ConditionOptions& options = {});

} // namespace lsqrbf

#endif
