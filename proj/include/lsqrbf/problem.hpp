#ifndef LSQRBF_PROBLEM_HPP
#define LSQRBF_PROBLEM_HPP

#include "lsqrbf/geometry.hpp"
#include "lsqrbf/kernel.hpp"
#include "lsqrbf/operator.hpp"
#include "lsqrbf/types.hpp"

#include <functional>
#include <optional>

namespace lsqrbf {

/** @brief Dirichlet problem L u = f in the disk, u = g on its boundary,
    with a known exact solution.

    f is computed from the analytic jet of the exact solution and g is the
    exact solution itself restricted to the boundary. */
class ManufacturedProblem
{
public:
   using JetField = std::function<Jet(const Point&)>;

   ManufacturedProblem(EllipticOperator op, JetField exact);

   const EllipticOperator& op() const { return op_; }

   Jet exact_jet(const Point& x) const { return exact_(x); }
   double exact(const Point& x) const { return exact_(x).value; }
   /// f = L u*.
   double forcing(const Point& x) const { return op_.apply(x, exact_(x)); }
   /// g = u* on the boundary.
   double boundary_data(const Point& x) const { return exact(x); }

   /// Exponent of the radial power family, if this is one.
   std::optional<double> kappa;
   /// u* lies in H^k for every k below this bound (exclusive).
   std::optional<double> sobolev_bound;

private:
   EllipticOperator op_;
   JetField exact_;
};

/// L u = -Laplace u + d_1 u + d_2 u + u.
EllipticOperator model_operator();

/// The identity operator (a = 0, b = 0, c = 1).
EllipticOperator identity_operator();

/// The negative Laplacian.
EllipticOperator negative_laplacian();

/// u*(x) = |x|^kappa for kappa >= 2; throws std::invalid_argument otherwise.
ManufacturedProblem radial_power_solution(double kappa, const EllipticOperator& op, int dim = 2);

/// u* = Phi(. - center), a member of the trial space when center is a node.
ManufacturedProblem kernel_solution(const KernelSpec& spec, const Point& center,
                                    const EllipticOperator& op);

/// u* = 0.
ManufacturedProblem zero_solution(const EllipticOperator& op);

/** Central finite-difference application of L to a scalar function,
    with step `step` for first and second derivatives. */
double apply_operator_fd(const EllipticOperator& op, const std::function<double(const Point&)>& u,
                         const Point& x, double step = 1.0e-4);

} // namespace lsqrbf

#endif
