#ifndef LSQRBF_POSTPROC_HPP
#define LSQRBF_POSTPROC_HPP

#include "lsqrbf/assembly.hpp"
#include "lsqrbf/geometry.hpp"
#include "lsqrbf/kernel.hpp"
#include "lsqrbf/problem.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>

namespace lsqrbf {

/// u_h(x) = sum_j c_j Phi(x - x_j).
struct DiscreteSolution
{
   Eigen::VectorXd coefficients;
   KernelSpec spec;
   PointList centers;

   double operator()(const Point& x) const;
};

std::vector<double> evaluate(const DiscreteSolution& solution, const PointList& points);

struct ErrorReport
{
   /// RMS of u* - u_h over the interior evaluation set.
   double l2_rms = 0.0;
   /// RMS of u* - u_h over the boundary evaluation set.
   double bdry_l2 = 0.0;
   /// ||L(u* - u_h)||_{0,Omega} by the interior rule.
   double residual_l2 = 0.0;
   /// ||u* - u_h||_{0,dOmega} by the boundary rule.
   double bdry_l2_quadrature = 0.0;
   /// Discrete energy norm of u* - u_h.
   double energy = 0.0;
   double h = 0.0;
   std::size_t n = 0;
   std::optional<double> cond;
};

/// Lattice with spacing 0.0204 clipped to the open disk (about 7.6k points).
PointList interior_evaluation_points(const DiskDomain& domain, double spacing = 0.0204);

/// `count` equispaced boundary points.
PointList boundary_evaluation_points(const DiskDomain& domain, int count = 1000);

/** Errors of `solution` against the exact solution of `problem`. The
    residual and energy use the quadrature rules and boundary weight of
    `system`, with L u* taken from the analytic forcing. */
ErrorReport error_report(const DiscreteSolution& solution, const ManufacturedProblem& problem,
                         const PointList& eval_interior, const PointList& eval_boundary,
                         const LsqSystem& system);

/// p = log(e1/e2) / log(h1/h2). Throws std::domain_error for nonpositive input or h1 == h2.
double convergence_order(double e1, double e2, double h1, double h2);

struct Interpolant
{
   DiscreteSolution solution;
   double cond_estimate = 1.0;
};

/// Solves (Phi(x_k - x_j)) c = (target(x_k)) by Cholesky.
Interpolant interpolate(const KernelSpec& spec, const NodeSet& nodes,
                        const std::function<double(const Point&)>& target);

} // namespace lsqrbf

#endif
