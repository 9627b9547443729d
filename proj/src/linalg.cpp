#include "lsqrbf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace lsqrbf {

namespace {

constexpr double kReliableCond = 1.0e10;

Eigen::VectorXd start_vector(Eigen::Index n)
{
   // fixed seed; a random start is not orthogonal to any symmetry class of eigenvectors
   std::mt19937_64 rng(0x5eedULL);
   std::uniform_real_distribution<double> dist(-1.0, 1.0);
   Eigen::VectorXd x(n);
   for (Eigen::Index i = 0; i < n; ++i) { x(i) = dist(rng); }
   return x.normalized();
}

struct IterationResult
{
   double value;
   bool converged;
};

IterationResult power_iteration(const Eigen::MatrixXd& A, double tol, int max_iterations)
{
   Eigen::VectorXd x = start_vector(A.rows());
   Eigen::VectorXd y(A.rows());
   double rho = 0.0;
   for (int it = 0; it < max_iterations; ++it)
   {
      y.noalias() = A.selfadjointView<Eigen::Lower>() * x;
      const double next = x.dot(y);
      const double norm = y.norm();
      if (norm == 0.0) { return {0.0, true}; }
      x = y / norm;
      if (it > 0 && std::abs(next - rho) <= tol * std::abs(next)) { return {next, true}; }
      rho = next;
   }
   return {rho, false};
}

IterationResult inverse_iteration(const SpdFactorization& factor, double tol, int max_iterations)
{
   Eigen::VectorXd x = start_vector(factor.size());
   double rho = 0.0;
   for (int it = 0; it < max_iterations; ++it)
   {
      const Eigen::VectorXd y = factor.solve(x);
      // x^T A^{-1} x -> 1 / lambda_min
      const double next = x.dot(y);
      x = y.normalized();
      if (it > 0 && std::abs(next - rho) <= tol * std::abs(next)) { return {1.0 / next, true}; }
      rho = next;
   }
   return {1.0 / rho, false};
}

} // namespace

void require_symmetric(const Eigen::MatrixXd& A, double tol)
{
   if (A.rows() != A.cols()) { throw AsymmetricMatrixError("matrix is not square"); }
   const double scale = A.cwiseAbs().maxCoeff();
   const double skew = (A - A.transpose()).cwiseAbs().maxCoeff();
   if (skew > tol * scale)
   {
      std::ostringstream msg;
      msg << "matrix is not symmetric: max |A - A^T| = " << skew << " exceeds " << tol << " * max |A|";
      throw AsymmetricMatrixError(msg.str());
   }
}

SpdFactorization::SpdFactorization(const Eigen::MatrixXd& A)
{
   require_symmetric(A);
   llt_.compute(A);
   if (llt_.info() != Eigen::Success)
   {
      throw NotPositiveDefiniteError("Cholesky factorization met a nonpositive pivot");
   }
}

double SpdFactorization::log_determinant() const
{
   return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

SolveResult cholesky_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b)
{
   if (b.size() != A.rows()) { throw std::invalid_argument("cholesky_solve: size mismatch"); }
   const SpdFactorization factor(A);
   SolveResult result;
   result.c = factor.solve(b);
   const double bnorm = b.norm();
   const double rnorm = (A * result.c - b).norm();
   result.relative_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
   const double rcond = factor.rcond();
   result.cond_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
   if (result.cond_estimate > kReliableCond)
   {
      result.ill_conditioned = true;
      std::ostringstream msg;
      msg << "ill-conditioned system (cond_1 ~ " << result.cond_estimate << ")";
      result.warning = msg.str();
   }
   return result;
}

Eigen::VectorXd jacobi_eigenvalues(const Eigen::MatrixXd& input, double tol, int max_sweeps)
{
   require_symmetric(input);
   Eigen::MatrixXd a = input;
   const Eigen::Index n = a.rows();
   const double fro = a.norm();
   auto off_norm = [&]() {
      double s = 0.0;
      for (Eigen::Index q = 0; q < n; ++q)
      {
         for (Eigen::Index p = 0; p < q; ++p) { s += a(p, q) * a(p, q); }
      }
      return std::sqrt(2.0 * s);
   };
   int sweep = 0;
   for (; sweep < max_sweeps && off_norm() > tol * fro; ++sweep)
   {
      for (Eigen::Index q = 1; q < n; ++q)
      {
         for (Eigen::Index p = 0; p < q; ++p)
         {
            const double apq = a(p, q);
            if (apq == 0.0) { continue; }
            const double app = a(p, p);
            const double aqq = a(q, q);
            const double theta = (aqq - app) / (2.0 * apq);
            const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;
            double* colp = a.col(p).data();
            double* colq = a.col(q).data();
            for (Eigen::Index k = 0; k < n; ++k)
            {
               const double akp = colp[k];
               const double akq = colq[k];
               colp[k] = c * akp - s * akq;
               colq[k] = s * akp + c * akq;
            }
            for (Eigen::Index k = 0; k < n; ++k)
            {
               a(p, k) = colp[k];
               a(q, k) = colq[k];
            }
            a(p, p) = app - t * apq;
            a(q, q) = aqq + t * apq;
            a(p, q) = 0.0;
            a(q, p) = 0.0;
         }
      }
   }
   if (sweep == max_sweeps && off_norm() > tol * fro)
   {
      throw std::runtime_error("jacobi_eigenvalues: no convergence within the sweep limit");
   }
   Eigen::VectorXd eig = a.diagonal();
   std::sort(eig.data(), eig.data() + n);
   return eig;
}

SpectrumEstimate condition_number(const Eigen::MatrixXd& A, const ConditionOptions& options)
{
   if (A.rows() <= options.dense_limit)
   {
      const Eigen::VectorXd eig = jacobi_eigenvalues(A);
      SpectrumEstimate est;
      est.lambda_min = eig(0);
      est.lambda_max = eig(eig.size() - 1);
      if (!(est.lambda_min > 0.0))
      {
         throw NotPositiveDefiniteError("condition_number: matrix has a nonpositive eigenvalue");
      }
      est.cond = est.lambda_max / est.lambda_min;
      est.method = SpectrumEstimate::Method::dense;
      return est;
   }
   const SpdFactorization factor(A);
   return condition_number(A, factor, options);
}

SpectrumEstimate condition_number(const Eigen::MatrixXd& A, const SpdFactorization& factor,
                                  const ConditionOptions& options)
{
   if (A.rows() <= options.dense_limit) { return condition_number(A, options); }
   require_symmetric(A);
   const IterationResult top = power_iteration(A, options.tolerance, options.max_iterations);
   const IterationResult bottom = inverse_iteration(factor, options.tolerance, options.max_iterations);
   SpectrumEstimate est;
   est.lambda_max = top.value;
   est.lambda_min = bottom.value;
   est.cond = est.lambda_max / est.lambda_min;
   est.method = SpectrumEstimate::Method::iterative;
   est.converged = top.converged && bottom.converged;
   return est;
}

} // namespace lsqrbf
