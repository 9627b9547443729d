#ifndef LSQRBF_QUADRATURE_HPP
#define LSQRBF_QUADRATURE_HPP

#include "lsqrbf/geometry.hpp"
#include "lsqrbf/types.hpp"

#include <vector>

namespace lsqrbf {

/// One-dimensional rule on [-1, 1].
struct GaussRule
{
   std::vector<double> nodes;
   std::vector<double> weights;
};

/// Rule on a planar region or on the boundary curve; weights sum to `measure`.
struct QuadratureRule
{
   PointList nodes;
   std::vector<double> weights;
   double measure = 0.0;

   std::size_t size() const { return nodes.size(); }

   template <class F>
   double integrate(F&& f) const
   {
      double sum = 0.0;
      for (std::size_t k = 0; k < nodes.size(); ++k) { sum += weights[k] * f(nodes[k]); }
      return sum;
   }
};

/// n-point Gauss-Legendre rule, 1 <= n <= 512, via Newton iteration on P_n.
GaussRule gauss_legendre(int n);

/** Gauss-Legendre in radius (Jacobian r) times the n_theta-point periodic
    trapezoid rule in angle. Requires n_r >= 2, n_theta >= 4. */
QuadratureRule disk_rule(const DiskDomain& domain, int n_r, int n_theta);

/// n_b equispaced boundary points with weights 2 pi R / n_b. Requires n_b >= 8.
QuadratureRule circle_rule(const DiskDomain& domain, int n_b);

/// Resolution triple for the interior and boundary rules.
struct QuadratureResolution
{
   int n_r = 40;
   int n_theta = 80;
   int n_b = 160;

   /// n_r = max(40, 4 ceil(1/spacing)) * scale, n_theta = 2 n_r, n_b = 4 n_r.
   static QuadratureResolution for_spacing(double spacing, double scale = 1.0);
   QuadratureResolution doubled() const { return {2 * n_r, 2 * n_theta, 2 * n_b}; }
};

} // namespace lsqrbf

#endif
