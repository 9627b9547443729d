#include "lsqrbf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lsqrbf {

GaussRule gauss_legendre(int n)
{
   if (n < 1 || n > 512) { throw std::invalid_argument("gauss_legendre: need 1 <= n <= 512"); }
   GaussRule rule;
   rule.nodes.resize(n);
   rule.weights.resize(n);
   const int half = (n + 1) / 2;
   for (int i = 0; i < half; ++i)
   {
      // Tricomi initial guess for the i-th largest root
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      bool converged = false;
      for (int it = 0; it < 100; ++it)
      {
         double p0 = 1.0;
         double p1 = x;
         for (int k = 2; k <= n; ++k)
         {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
         }
         // P_n = p1, P_{n-1} = p0
         dp = n * (x * p1 - p0) / (x * x - 1.0);
         const double dx = p1 / dp;
         x -= dx;
         if (std::abs(dx) <= 1.0e-15)
         {
            converged = true;
            break;
         }
      }
      if (!converged) { throw std::runtime_error("gauss_legendre: Newton iteration did not converge"); }
      // recompute the derivative at the converged root
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k)
      {
         const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
         p0 = p1;
         p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      rule.nodes[i] = -x;
      rule.nodes[n - 1 - i] = x;
      rule.weights[i] = w;
      rule.weights[n - 1 - i] = w;
   }
   if (n % 2 == 1) { rule.nodes[n / 2] = 0.0; }
   return rule;
}

QuadratureRule disk_rule(const DiskDomain& domain, int n_r, int n_theta)
{
   if (n_r < 2 || n_theta < 4)
   {
      throw std::invalid_argument("disk_rule: need n_r >= 2 and n_theta >= 4");
   }
   const GaussRule radial = gauss_legendre(n_r);
   const double radius = domain.radius();
   const double dtheta = 2.0 * std::numbers::pi / n_theta;
   QuadratureRule rule;
   rule.nodes.reserve(static_cast<std::size_t>(n_r) * n_theta);
   rule.weights.reserve(static_cast<std::size_t>(n_r) * n_theta);
   for (int k = 0; k < n_theta; ++k)
   {
      const double theta = k * dtheta;
      const Point dir(std::cos(theta), std::sin(theta));
      for (int i = 0; i < n_r; ++i)
      {
         const double r = 0.5 * radius * (radial.nodes[i] + 1.0);
         rule.nodes.push_back(domain.center() + r * dir);
         rule.weights.push_back(0.5 * radius * radial.weights[i] * r * dtheta);
      }
   }
   rule.measure = domain.area();
   return rule;
}

QuadratureRule circle_rule(const DiskDomain& domain, int n_b)
{
   if (n_b < 8) { throw std::invalid_argument("circle_rule: need n_b >= 8"); }
   QuadratureRule rule;
   rule.nodes.reserve(n_b);
   const double dtheta = 2.0 * std::numbers::pi / n_b;
   for (int k = 0; k < n_b; ++k) { rule.nodes.push_back(domain.boundary_point(k * dtheta)); }
   rule.weights.assign(n_b, domain.radius() * dtheta);
   rule.measure = domain.perimeter();
   return rule;
}

QuadratureResolution QuadratureResolution::for_spacing(double spacing, double scale)
{
   if (!(spacing > 0.0) || !(scale > 0.0))
   {
      throw std::invalid_argument("QuadratureResolution: spacing and scale must be positive");
   }
   const int base = std::max(40, 4 * static_cast<int>(std::ceil(1.0 / spacing - 1e-9)));
   const int n_r = std::max(2, static_cast<int>(std::lround(base * scale)));
   return {n_r, 2 * n_r, 4 * n_r};
}

} // namespace lsqrbf
