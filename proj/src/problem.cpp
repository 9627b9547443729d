#include "lsqrbf/problem.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lsqrbf {

EllipticOperator::EllipticOperator(MatrixField a, VectorField b, ScalarField c)
   : a_(std::move(a)), b_(std::move(b)), c_(std::move(c))
{
   if (!a_ || !b_ || !c_) { throw std::invalid_argument("EllipticOperator: empty coefficient field"); }
}

EllipticOperator EllipticOperator::constant(const Eigen::Matrix2d& a, const Eigen::Vector2d& b,
                                            double c)
{
   if (a(0, 1) != a(1, 0)) { throw std::invalid_argument("EllipticOperator: a must be symmetric"); }
   EllipticOperator op([a](const Point&) { return a; }, [b](const Point&) { return b; },
                       [c](const Point&) { return c; });
   op.constant_ = true;
   op.constant_coefficients_ = {a, b, c};
   return op;
}

OperatorCoefficients EllipticOperator::at(const Point& x) const
{
   if (constant_) { return constant_coefficients_; }
   OperatorCoefficients k{a_(x), b_(x), c_(x)};
   if (k.a(0, 1) != k.a(1, 0))
   {
      throw std::invalid_argument("EllipticOperator: a(x) is not symmetric");
   }
   return k;
}

void EllipticOperator::check_uniform_ellipticity(const DiskDomain& domain, double floor,
                                                 int samples) const
{
   // points on a Fibonacci spiral cover the disk evenly and deterministically
   const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
   for (int k = 0; k < samples; ++k)
   {
      const double r = domain.radius() * std::sqrt((k + 0.5) / samples);
      const Point x = domain.center() + r * Point(std::cos(golden * k), std::sin(golden * k));
      const Eigen::Matrix2d a = at(x).a;
      const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(a).eigenvalues()(0);
      if (!(lmin >= floor))
      {
         throw std::invalid_argument("EllipticOperator: smallest eigenvalue of a(x) is " +
                                     std::to_string(lmin) + ", below the ellipticity floor " +
                                     std::to_string(floor));
      }
   }
}

ManufacturedProblem::ManufacturedProblem(EllipticOperator op, JetField exact)
   : op_(std::move(op)), exact_(std::move(exact))
{
   if (!exact_) { throw std::invalid_argument("ManufacturedProblem: empty exact solution"); }
}

EllipticOperator model_operator()
{
   return EllipticOperator::constant(Eigen::Matrix2d::Identity(), Eigen::Vector2d(1.0, 1.0), 1.0);
}

EllipticOperator identity_operator()
{
   return EllipticOperator::constant(Eigen::Matrix2d::Zero(), Eigen::Vector2d::Zero(), 1.0);
}

EllipticOperator negative_laplacian()
{
   return EllipticOperator::constant(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), 0.0);
}

ManufacturedProblem radial_power_solution(double kappa, const EllipticOperator& op, int dim)
{
   if (!(kappa >= 2.0))
   {
      throw std::invalid_argument("radial_power_solution: kappa must be at least 2");
   }
   ManufacturedProblem problem(op, [kappa](const Point& x) {
      Jet jet;
      const double r2 = x.squaredNorm();
      if (r2 == 0.0)
      {
         jet.hess = (kappa == 2.0 ? 2.0 : 0.0) * Eigen::Matrix2d::Identity();
         return jet;
      }
      const double r = std::sqrt(r2);
      const double rk2 = std::pow(r, kappa - 2.0);
      jet.value = rk2 * r2;
      jet.grad = kappa * rk2 * x;
      jet.hess = kappa * rk2 * Eigen::Matrix2d::Identity() +
                 kappa * (kappa - 2.0) * (rk2 / r2) * (x * x.transpose());
      return jet;
   });
   problem.kappa = kappa;
   problem.sobolev_bound = kappa + 0.5 * dim;
   return problem;
}

ManufacturedProblem kernel_solution(const KernelSpec& spec, const Point& center,
                                    const EllipticOperator& op)
{
   spec.require_second_derivatives();
   return ManufacturedProblem(op, [spec, center](const Point& x) { return kernel_jet(spec, x, center); });
}

ManufacturedProblem zero_solution(const EllipticOperator& op)
{
   return ManufacturedProblem(op, [](const Point&) { return Jet{}; });
}

double apply_operator_fd(const EllipticOperator& op, const std::function<double(const Point&)>& u,
                         const Point& x, double step)
{
   const OperatorCoefficients k = op.at(x);
   const Point e1(step, 0.0);
   const Point e2(0.0, step);
   const double u0 = u(x);
   Jet jet;
   jet.value = u0;
   jet.grad(0) = (u(x + e1) - u(x - e1)) / (2.0 * step);
   jet.grad(1) = (u(x + e2) - u(x - e2)) / (2.0 * step);
   jet.hess(0, 0) = (u(x + e1) - 2.0 * u0 + u(x - e1)) / (step * step);
   jet.hess(1, 1) = (u(x + e2) - 2.0 * u0 + u(x - e2)) / (step * step);
   jet.hess(0, 1) = (u(x + e1 + e2) - u(x + e1 - e2) - u(x - e1 + e2) + u(x - e1 - e2)) /
                    (4.0 * step * step);
   jet.hess(1, 0) = jet.hess(0, 1);
   return EllipticOperator::apply(k, jet);
}

} // namespace lsqrbf
