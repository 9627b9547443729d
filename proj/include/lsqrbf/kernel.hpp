#ifndef LSQRBF_KERNEL_HPP
#define LSQRBF_KERNEL_HPP

#include "lsqrbf/operator.hpp"
#include "lsqrbf/types.hpp"

#include <Eigen/Core>

namespace lsqrbf {

/** @brief Whittle-Matern-Sobolev kernel parameters.

    Phi(x) = (eps |x|)^nu K_nu(eps |x|) with nu = tau - d/2. The native
    space of Phi is H^tau(R^d). The radial profile depends on d only
    through nu; point arguments are two-dimensional. */
class KernelSpec
{
public:
   /// Throws std::invalid_argument unless tau > d/2 and eps > 0.
   KernelSpec(double tau, double epsilon, int dim = 2);

   double tau() const { return tau_; }
   double epsilon() const { return epsilon_; }
   int dim() const { return dim_; }
   /// Bessel order tau - d/2.
   double nu() const { return tau_ - 0.5 * dim_; }

   /// True when Phi has classical second derivatives (nu > 1).
   bool has_second_derivatives() const;
   /// Throws std::invalid_argument unless has_second_derivatives().
   void require_second_derivatives() const;

private:
   double tau_;
   double epsilon_;
   int dim_;
};

/// Radial profile phi(r) and its first two radial derivatives.
struct RadialProfile
{
   double phi = 0.0;
   double dphi = 0.0;
   double d2phi = 0.0;
};

/// phi(r), continuous at r = 0 through the limit 2^(nu-1) Gamma(nu).
double phi(const KernelSpec& spec, double r);

/// phi, phi', phi'' at r >= 0. Requires nu > 1.
RadialProfile radial_profile(const KernelSpec& spec, double r);

double kernel_eval(const KernelSpec& spec, const Point& x, const Point& y);

/// Gradient of Phi(. - y) at x. Requires nu > 1/2.
Eigen::Vector2d kernel_grad(const KernelSpec& spec, const Point& x, const Point& y);

/// Hessian of Phi(. - y) at x. Requires nu > 1.
Eigen::Matrix2d kernel_hess(const KernelSpec& spec, const Point& x, const Point& y);

/** Value, gradient and Hessian of Phi(. - y) at x from one Bessel
    evaluation. Requires nu > 1. */
Jet kernel_jet(const KernelSpec& spec, const Point& x, const Point& y);

/// (L Phi(. - center))(x).
double apply_operator(const EllipticOperator& op, const KernelSpec& spec, const Point& center,
                      const Point& x);

/** Same as above with the coefficients of L at x already evaluated and
    dx = x - center. This is the assembly inner loop. */
double apply_operator(const KernelSpec& spec, const OperatorCoefficients& coeffs,
                      const Eigen::Vector2d& dx);

} // namespace lsqrbf

#endif
