#include "lsqrbf/kernel.hpp"

#include "lsqrbf/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lsqrbf {

namespace {

// Below this value of eps*r the Bessel forms are replaced by their
// small-argument expansions.
constexpr double kSmallArgument = 1.0e-6;
constexpr double kOrderGuard = 1.0e-9;

bool is_integer(double v) { return std::abs(v - std::round(v)) < kOrderGuard; }

// z^mu K_mu(z) at z = 0, mu > 0.
double scaled_k_limit(double mu) { return std::exp2(mu - 1.0) * std::tgamma(mu); }

// z^mu K_mu(z) for 0 < z < kSmallArgument, mu > 0.
double scaled_k_small(double mu, double z)
{
   if (is_integer(mu) && std::round(mu) == 1.0)
   {
      return 1.0 + 0.5 * z * z * std::log(0.5 * z) +
             0.25 * z * z * (2.0 * std::numbers::egamma - 1.0);
   }
   if (mu > 1.0)
   {
      return scaled_k_limit(mu) - std::exp2(mu - 3.0) * std::tgamma(mu - 1.0) * z * z;
   }
   return scaled_k_limit(mu) -
          std::tgamma(1.0 - mu) / (mu * std::exp2(mu + 1.0)) * std::pow(z, 2.0 * mu);
}

// z^nu K_{nu-2}(z) for 0 < z < kSmallArgument, nu > 1.
double shifted_k_small(double nu, double z)
{
   if (nu > 2.0 + kOrderGuard)
   {
      return std::exp2(nu - 3.0) * std::tgamma(nu - 2.0) * z * z;
   }
   if (nu >= 2.0 - kOrderGuard)
   {
      return z * z * (-std::log(0.5 * z) - std::numbers::egamma);
   }
   return std::exp2(1.0 - nu) * std::tgamma(2.0 - nu) * std::pow(z, 2.0 * nu - 2.0);
}

// s0 = z^nu K_nu, s1 = z^(nu-1) K_(nu-1), s2 = z^nu K_(nu-2); nu > 1.
struct ScaledBessel
{
   double s0;
   double s1;
   double s2;
};

ScaledBessel scaled_bessel(double nu, double z)
{
   if (z == 0.0)
   {
      return {scaled_k_limit(nu), scaled_k_limit(nu - 1.0), 0.0};
   }
   if (z < kSmallArgument)
   {
      return {scaled_k_small(nu, z), scaled_k_small(nu - 1.0, z), shifted_k_small(nu, z)};
   }
   const auto k = bessel_k_ladder(BesselOrder(nu), z);
   const double zp = std::pow(z, nu - 1.0);
   return {z * zp * k[2], zp * k[1], z * zp * k[0]};
}

// Hessian and gradient coefficients: grad = alpha dx,
// hess = alpha I + beta u u^T with u = dx / r.
struct RadialCoefficients
{
   double value;
   double alpha;
   double beta;
};

RadialCoefficients radial_coefficients(const KernelSpec& spec, double r)
{
   const double eps = spec.epsilon();
   const ScaledBessel s = scaled_bessel(spec.nu(), eps * r);
   return {s.s0, -eps * eps * s.s1, eps * eps * s.s2};
}

} // namespace

KernelSpec::KernelSpec(double tau, double epsilon, int dim) : tau_(tau), epsilon_(epsilon), dim_(dim)
{
   if (dim < 1) { throw std::invalid_argument("KernelSpec: dimension must be positive"); }
   if (!(tau > 0.5 * dim))
   {
      throw std::invalid_argument("KernelSpec: smoothness tau = " + std::to_string(tau) +
                                  " must exceed d/2 = " + std::to_string(0.5 * dim));
   }
   if (!(epsilon > 0.0) || !std::isfinite(epsilon))
   {
      throw std::invalid_argument("KernelSpec: shape parameter must be positive");
   }
}

bool KernelSpec::has_second_derivatives() const { return nu() > 1.0 + kOrderGuard; }

void KernelSpec::require_second_derivatives() const
{
   if (!has_second_derivatives())
   {
      throw std::invalid_argument(
         "KernelSpec: tau = " + std::to_string(tau_) + " gives a kernel without classical second "
         "derivatives; second-order operators need tau > d/2 + 1 = " +
         std::to_string(0.5 * dim_ + 1.0));
   }
}

double phi(const KernelSpec& spec, double r)
{
   if (r < 0.0) { throw std::domain_error("phi: negative radius"); }
   const double nu = spec.nu();
   const double z = spec.epsilon() * r;
   if (z == 0.0) { return scaled_k_limit(nu); }
   if (z < kSmallArgument) { return scaled_k_small(nu, z); }
   return std::pow(z, nu) * bessel_k(BesselOrder(nu), z);
}

RadialProfile radial_profile(const KernelSpec& spec, double r)
{
   if (r < 0.0) { throw std::domain_error("radial_profile: negative radius"); }
   spec.require_second_derivatives();
   const RadialCoefficients c = radial_coefficients(spec, r);
   return {c.value, c.alpha * r, c.alpha + c.beta};
}

double kernel_eval(const KernelSpec& spec, const Point& x, const Point& y)
{
   return phi(spec, (x - y).norm());
}

Eigen::Vector2d kernel_grad(const KernelSpec& spec, const Point& x, const Point& y)
{
   const double nu = spec.nu();
   if (!(nu > 0.5))
   {
      throw std::invalid_argument("kernel_grad: tau must exceed d/2 + 1/2");
   }
   const Eigen::Vector2d dx = x - y;
   const double r = dx.norm();
   if (r == 0.0) { return Eigen::Vector2d::Zero(); }
   const double eps = spec.epsilon();
   const double z = eps * r;
   if (nu > 1.0 + kOrderGuard)
   {
      return radial_coefficients(spec, r).alpha * dx;
   }
   // 1/2 < nu <= 1: z^(nu-1) K_(1-nu) is singular at 0 but alpha*dx is not
   const double s1 = std::pow(z, nu - 1.0) * bessel_k(BesselOrder(std::abs(nu - 1.0)), z);
   return -eps * eps * s1 * dx;
}

Jet kernel_jet(const KernelSpec& spec, const Point& x, const Point& y)
{
   spec.require_second_derivatives();
   const Eigen::Vector2d dx = x - y;
   const double r = dx.norm();
   const RadialCoefficients c = radial_coefficients(spec, r);
   Jet jet;
   jet.value = c.value;
   jet.grad = c.alpha * dx;
   jet.hess = c.alpha * Eigen::Matrix2d::Identity();
   if (r > 0.0)
   {
      const Eigen::Vector2d u = dx / r;
      // scalar form keeps the Hessian bitwise symmetric
      const double off = c.beta * (u(0) * u(1));
      jet.hess(0, 0) += c.beta * (u(0) * u(0));
      jet.hess(1, 1) += c.beta * (u(1) * u(1));
      jet.hess(0, 1) += off;
      jet.hess(1, 0) += off;
   }
   return jet;
}

Eigen::Matrix2d kernel_hess(const KernelSpec& spec, const Point& x, const Point& y)
{
   return kernel_jet(spec, x, y).hess;
}

double apply_operator(const EllipticOperator& op, const KernelSpec& spec, const Point& center,
                      const Point& x)
{
   return apply_operator(spec, op.at(x), x - center);
}

double apply_operator(const KernelSpec& spec, const OperatorCoefficients& coeffs,
                      const Eigen::Vector2d& dx)
{
   spec.require_second_derivatives();
   const double r2 = dx.squaredNorm();
   const double r = std::sqrt(r2);
   const RadialCoefficients c = radial_coefficients(spec, r);
   double a_hess = c.alpha * coeffs.a.trace();
   if (r2 > 0.0) { a_hess += c.beta * dx.dot(coeffs.a * dx) / r2; }
   return -a_hess + c.alpha * coeffs.b.dot(dx) + coeffs.c * c.value;
}

} // namespace lsqrbf
