#include "lsqrbf/postproc.hpp"

#include "lsqrbf/linalg.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lsqrbf {

double DiscreteSolution::operator()(const Point& x) const
{
   double sum = 0.0;
   for (std::size_t j = 0; j < centers.size(); ++j)
   {
      sum += coefficients(static_cast<Eigen::Index>(j)) * phi(spec, (x - centers[j]).norm());
   }
   return sum;
}

std::vector<double> evaluate(const DiscreteSolution& solution, const PointList& points)
{
   std::vector<double> values(points.size());
   for (std::size_t k = 0; k < points.size(); ++k) { values[k] = solution(points[k]); }
   return values;
}

PointList interior_evaluation_points(const DiskDomain& domain, double spacing)
{
   return disk_lattice(domain, spacing);
}

PointList boundary_evaluation_points(const DiskDomain& domain, int count)
{
   if (count < 1) { throw std::invalid_argument("boundary_evaluation_points: count must be positive"); }
   PointList points;
   points.reserve(count);
   for (int k = 0; k < count; ++k)
   {
      points.push_back(domain.boundary_point(2.0 * std::numbers::pi * k / count));
   }
   return points;
}

namespace {

double rms_error(const DiscreteSolution& solution, const ManufacturedProblem& problem, const PointList& points)
{
   if (points.empty()) { throw std::invalid_argument("error_report: empty evaluation set"); }
   double sum = 0.0;
   for (const Point& x : points)
   {
      const double e = problem.exact(x) - solution(x);
      sum += e * e;
   }
   return std::sqrt(sum / static_cast<double>(points.size()));
}

} // namespace

ErrorReport error_report(const DiscreteSolution& solution, const ManufacturedProblem& problem,
                         const PointList& eval_interior, const PointList& eval_boundary,
                         const LsqSystem& system)
{
   ErrorReport report;
   report.l2_rms = rms_error(solution, problem, eval_interior);
   report.bdry_l2 = rms_error(solution, problem, eval_boundary);

   const EnergySample error = sample_exact(system, problem) - sample_trial(system, solution.coefficients);
   double interior = 0.0;
   for (std::size_t k = 0; k < system.interior.size(); ++k)
   {
      const double e = error.interior(static_cast<Eigen::Index>(k));
      interior += system.interior.weights[k] * e * e;
   }
   double boundary = 0.0;
   for (std::size_t k = 0; k < system.boundary.size(); ++k)
   {
      const double e = error.boundary(static_cast<Eigen::Index>(k));
      boundary += system.boundary.weights[k] * e * e;
   }
   report.residual_l2 = std::sqrt(interior);
   report.bdry_l2_quadrature = std::sqrt(boundary);
   report.energy = discrete_energy_norm(system, error);
   report.h = system.h;
   report.n = system.size();
   return report;
}

double convergence_order(double e1, double e2, double h1, double h2)
{
   if (!(e1 > 0.0) || !(e2 > 0.0) || !(h1 > 0.0) || !(h2 > 0.0))
   {
      throw std::domain_error("convergence_order: errors and spacings must be positive");
   }
   if (h1 == h2) { throw std::domain_error("convergence_order: spacings must differ"); }
   return std::log(e1 / e2) / std::log(h1 / h2);
}

Interpolant interpolate(const KernelSpec& spec, const NodeSet& nodes,
                        const std::function<double(const Point&)>& target)
{
   const auto n = static_cast<Eigen::Index>(nodes.size());
   Eigen::MatrixXd B(n, n);
   Eigen::VectorXd rhs(n);
   for (Eigen::Index k = 0; k < n; ++k)
   {
      const Point& xk = nodes.points[static_cast<std::size_t>(k)];
      rhs(k) = target(xk);
      for (Eigen::Index j = 0; j <= k; ++j)
      {
         B(k, j) = phi(spec, (xk - nodes.points[static_cast<std::size_t>(j)]).norm());
         B(j, k) = B(k, j);
      }
   }
   const SolveResult solved = cholesky_solve(B, rhs);
   return {DiscreteSolution{solved.c, spec, nodes.points}, solved.cond_estimate};
}

} // namespace lsqrbf
