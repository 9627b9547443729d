#include "lsqrbf/linalg.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace lsqrbf;

namespace {

Eigen::MatrixXd random_spd(int n, unsigned seed, double shift = 1.0)
{
   std::mt19937_64 rng(seed);
   std::normal_distribution<double> g;
   Eigen::MatrixXd M(n, n);
   for (int i = 0; i < n; ++i)
   {
      for (int j = 0; j < n; ++j) { M(i, j) = g(rng); }
   }
   Eigen::MatrixXd A = M.transpose() * M + shift * Eigen::MatrixXd::Identity(n, n);
   return 0.5 * (A + A.transpose());
}

} // namespace

TEST_CASE("cholesky_solve examples")
{
   const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(4, -1.0, 2.0);
   CHECK(cholesky_solve(Eigen::MatrixXd::Identity(4, 4), b).c == b);
   Eigen::MatrixXd D = Eigen::Vector2d(2, 8).asDiagonal();
   const SolveResult r = cholesky_solve(D, Eigen::Vector2d(2, 16));
   CHECK(r.c(0) == doctest::Approx(1.0));
   CHECK(r.c(1) == doctest::Approx(2.0));
   CHECK_FALSE(r.ill_conditioned);

   const Eigen::MatrixXd A = random_spd(20, 1);
   Eigen::VectorXd rhs = Eigen::VectorXd::Random(20);
   const SolveResult s = cholesky_solve(A, rhs);
   const Eigen::VectorXd ref = oracle::gauss_solve(A, rhs);
   CHECK((s.c - ref).norm() <= 1e-10 * ref.norm());
   CHECK(s.relative_residual <= 1e-10);
}

TEST_CASE("failure modes are distinct")
{
   Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(3, 3);
   asym(0, 2) = 0.1;
   CHECK_THROWS_AS(cholesky_solve(asym, Eigen::VectorXd::Ones(3)), AsymmetricMatrixError);
   Eigen::MatrixXd indefinite = Eigen::MatrixXd::Identity(3, 3);
   indefinite(1, 1) = -1.0;
   CHECK_THROWS_AS(cholesky_solve(indefinite, Eigen::VectorXd::Ones(3)), NotPositiveDefiniteError);
   CHECK_THROWS_AS(cholesky_solve(Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Ones(2)), std::invalid_argument);
   CHECK_THROWS_AS(require_symmetric(Eigen::MatrixXd::Ones(2, 3)), AsymmetricMatrixError);
}

TEST_CASE("ill-conditioned systems carry a warning")
{
   Eigen::MatrixXd H(8, 8);
   for (int i = 0; i < 8; ++i)
   {
      for (int j = 0; j < 8; ++j) { H(i, j) = 1.0 / (i + j + 1); }
   }
   const SolveResult r = cholesky_solve(H, Eigen::VectorXd::Ones(8));
   CHECK(r.ill_conditioned);
   CHECK_FALSE(r.warning.empty());
}

TEST_CASE("factorization reconstructs the matrix")
{
   const Eigen::MatrixXd A = random_spd(30, 2);
   const SpdFactorization f(A);
   const Eigen::MatrixXd L = f.lower();
   CHECK((L * L.transpose() - A).norm() <= 1e-10 * A.norm());
   CHECK(L.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().isZero(0.0));
}

TEST_CASE("Jacobi eigenvalues")
{
   const Eigen::VectorXd id = jacobi_eigenvalues(Eigen::MatrixXd::Identity(5, 5));
   CHECK((id.array() - 1.0).abs().maxCoeff() == 0.0);
   const Eigen::VectorXd d = jacobi_eigenvalues(Eigen::Matrix2d(Eigen::Vector2d(4, 1).asDiagonal()));
   CHECK(d(0) == 1.0);
   CHECK(d(1) == 4.0);

   Eigen::Matrix2d two;
   two << 2, 1, 1, 2;
   const Eigen::VectorXd e2 = jacobi_eigenvalues(two);
   CHECK(e2(0) == doctest::Approx(1.0).epsilon(1e-15));
   CHECK(e2(1) == doctest::Approx(3.0).epsilon(1e-15));

   const Eigen::MatrixXd A = random_spd(40, 3);
   const Eigen::VectorXd eig = jacobi_eigenvalues(A);
   CHECK(eig.sum() == doctest::Approx(A.trace()).epsilon(1e-10));
   CHECK(eig.array().log().sum() == doctest::Approx(SpdFactorization(A).log_determinant()).epsilon(1e-8));
   for (Eigen::Index k = 1; k < eig.size(); ++k) { CHECK(eig(k - 1) <= eig(k)); }
}

TEST_CASE("condition number examples")
{
   const SpectrumEstimate one = condition_number(Eigen::MatrixXd::Identity(6, 6));
   CHECK(one.cond == doctest::Approx(1.0));
   CHECK(one.method == SpectrumEstimate::Method::dense);
   const SpectrumEstimate d = condition_number(Eigen::Matrix2d(Eigen::Vector2d(1, 4).asDiagonal()));
   CHECK(d.lambda_min == doctest::Approx(1.0));
   CHECK(d.lambda_max == doctest::Approx(4.0));
   CHECK(d.cond == doctest::Approx(4.0));
   const SpectrumEstimate scalar = condition_number(Eigen::MatrixXd::Constant(1, 1, 3.0));
   CHECK(scalar.cond == 1.0);
}

TEST_CASE("dense and iterative estimates against a deflation oracle")
{
   const Eigen::MatrixXd A = random_spd(15, 4, 0.5);
   std::vector<double> ref = oracle::deflation_eigenvalues(A);
   const double ref_cond = ref.front() / ref.back();
   const SpectrumEstimate dense = condition_number(A);
   CHECK(dense.cond == doctest::Approx(ref_cond).epsilon(1e-6));
   ConditionOptions iterative;
   iterative.dense_limit = 0;
   iterative.tolerance = 1e-12;
   const SpectrumEstimate it = condition_number(A, iterative);
   CHECK(it.method == SpectrumEstimate::Method::iterative);
   CHECK(it.converged);
   CHECK(it.cond == doctest::Approx(ref_cond).epsilon(1e-6));
   CHECK(it.lambda_max >= it.lambda_min);
}

TEST_CASE("iteration limit is reported, not thrown")
{
   const Eigen::MatrixXd A = random_spd(50, 5);
   ConditionOptions few;
   few.dense_limit = 0;
   few.max_iterations = 2;
   few.tolerance = 1e-15;
   const SpectrumEstimate e = condition_number(A, few);
   CHECK_FALSE(e.converged);
   CHECK(e.cond > 0.0);
}
