#ifndef LSQRBF_OPERATOR_HPP
#define LSQRBF_OPERATOR_HPP

#include "lsqrbf/types.hpp"

#include <Eigen/Core>

#include <functional>

namespace lsqrbf {

class DiskDomain;

/// Coefficients of L at one point.
struct OperatorCoefficients
{
   Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
   Eigen::Vector2d b = Eigen::Vector2d::Zero();
   double c = 0.0;
};

/// Value, gradient and Hessian of a function at one point.
struct Jet
{
   double value = 0.0;
   Eigen::Vector2d grad = Eigen::Vector2d::Zero();
   Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
};

/** @brief Second-order operator
    L u = -sum_ij a_ij d_i d_j u + sum_i b_i d_i u + c u
    with pointwise coefficient functions. */
class EllipticOperator
{
public:
   using MatrixField = std::function<Eigen::Matrix2d(const Point&)>;
   using VectorField = std::function<Eigen::Vector2d(const Point&)>;
   using ScalarField = std::function<double(const Point&)>;

   EllipticOperator(MatrixField a, VectorField b, ScalarField c);

   /// Operator with constant coefficients.
   static EllipticOperator constant(const Eigen::Matrix2d& a, const Eigen::Vector2d& b, double c);

   /// Throws std::invalid_argument if a(x) is not symmetric.
   OperatorCoefficients at(const Point& x) const;

   bool has_constant_coefficients() const { return constant_; }

   /** Checks symmetry of a and that its smallest eigenvalue is at least
       `floor` at `samples` deterministic points of the domain. Throws
       std::invalid_argument on failure. */
   void check_uniform_ellipticity(const DiskDomain& domain, double floor, int samples = 100) const;

   /// L applied to a function given by its jet.
   static double apply(const OperatorCoefficients& k, const Jet& jet)
   {
      return -(k.a.cwiseProduct(jet.hess)).sum() + k.b.dot(jet.grad) + k.c * jet.value;
   }

   double apply(const Point& x, const Jet& jet) const { return apply(at(x), jet); }

private:
   MatrixField a_;
   VectorField b_;
   ScalarField c_;
   bool constant_ = false;
   OperatorCoefficients constant_coefficients_;
};

} // namespace lsqrbf

#endif
