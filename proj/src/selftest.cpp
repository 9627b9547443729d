#include "lsqrbf/selftest.hpp"

#include "lsqrbf/assembly.hpp"
#include "lsqrbf/linalg.hpp"
#include "lsqrbf/postproc.hpp"
#include "lsqrbf/specfun.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

namespace lsqrbf {

namespace {

/// e^z K_nu(z) = int_0^inf exp(-z (cosh t - 1)) cosh(nu t) dt by the trapezoid rule.
double bessel_k_integral(double nu, double z)
{
   const long double step = 1.0L / 64;
   long double sum = 0.5L;
   for (int k = 1;; ++k)
   {
      const long double t = k * step;
      const long double term = std::exp(-z * (std::cosh(t) - 1.0L)) * std::cosh(nu * t);
      sum += term;
      if (term < 1e-22L * sum) { break; }
   }
   return static_cast<double>(sum * step * std::exp(-static_cast<long double>(z)));
}

struct Suite
{
   std::ostream& out;
   int failures = 0;

   void check(const std::string& name, bool ok, double measured)
   {
      out << (ok ? "PASS  " : "FAIL  ") << name << "  (" << measured << ")\n";
      if (!ok) { ++failures; }
   }
};

} // namespace

int run_selftest(std::ostream& out)
{
   Suite suite{out};

   {
      double worst = 0.0;
      for (double nu : {0.0, 0.5, 1.0, 2.0, 3.0, 5.0})
      {
         for (double z : {1e-6, 0.01, 0.5, 1.9, 2.1, 7.0, 30.0, 50.0})
         {
            const double ref = bessel_k_integral(nu, z);
            worst = std::max(worst, std::abs(bessel_k(BesselOrder(nu), z) - ref) / ref);
         }
      }
      suite.check("bessel_k against the integral representation, rel <= 1e-12", worst <= 1e-12, worst);
   }

   {
      double worst = 0.0;
      std::mt19937_64 rng(7);
      std::uniform_real_distribution<double> u(-0.9, 0.9);
      for (double tau : {4.0, 5.0, 6.0})
      {
         const KernelSpec spec(tau, 10.0);
         for (int k = 0; k < 20; ++k)
         {
            const Point x(u(rng), u(rng));
            const Point y(u(rng), u(rng));
            const double step = 1e-4;
            const Eigen::Matrix2d H = kernel_hess(spec, x, y);
            for (int i = 0; i < 2; ++i)
            {
               const Point e = Point::Unit(i) * step;
               const Eigen::Vector2d fd = (kernel_grad(spec, x + e, y) - kernel_grad(spec, x - e, y)) / (2 * step);
               worst = std::max(worst, (fd - H.col(i)).norm() / std::max(1.0, H.norm()));
            }
         }
      }
      suite.check("kernel Hessian against differenced gradients, rel <= 1e-5", worst <= 1e-5, worst);
   }

   {
      const DiskDomain disk;
      const QuadratureRule q = disk_rule(disk, 20, 40);
      const double area = q.integrate([](const Point&) { return 1.0; });
      const double r2 = q.integrate([](const Point& x) { return x.squaredNorm(); });
      const double err = std::max(std::abs(area - std::numbers::pi), std::abs(r2 - std::numbers::pi / 2));
      suite.check("disk rule moments 1 and |x|^2", err <= 1e-13, err);
   }

   {
      const double p1 = convergence_order(6.0793e-02, 1.0943e-02, 1.0 / 6, 1.0 / 8);
      const double p2 = convergence_order(4.0986e+08, 2.1131e+09, 1.0 / 12, 1.0 / 14);
      const bool ok = std::abs(p1 - 5.9607) < 5e-5 && std::abs(p2 + 10.6396) < 5e-5;
      suite.check("order arithmetic on tabulated values", ok, p1);
   }

   {
      const DiskDomain disk;
      const KernelSpec spec(4.0, 10.0);
      const NodeSet nodes = regular_disk_nodes(disk, 0.3);
      const int j = static_cast<int>(nodes.size() / 2);
      const ManufacturedProblem problem = kernel_solution(spec, nodes.points[j], model_operator());
      const QuadratureResolution res = QuadratureResolution::for_spacing(0.3);
      const LsqSystem system = assemble_system(spec, nodes, problem, disk_rule(disk, res.n_r, res.n_theta),
                                               circle_rule(disk, res.n_b));
      const SolveResult solved = cholesky_solve(system.A, system.b);
      Eigen::VectorXd expected = Eigen::VectorXd::Zero(system.b.size());
      expected(j) = 1.0;
      const double err = (solved.c - expected).cwiseAbs().maxCoeff();
      suite.check("trial-space exactness, max coefficient error <= 1e-7", err <= 1e-7, err);

      const SpectrumEstimate dense = condition_number(system.A);
      ConditionOptions iterative;
      iterative.dense_limit = 0;
      const SpectrumEstimate iter = condition_number(system.A, iterative);
      const double rel = std::abs(dense.cond - iter.cond) / dense.cond;
      suite.check("Jacobi and power/inverse iteration condition numbers agree", rel <= 1e-6, rel);
   }

   out << (suite.failures == 0 ? "all checks passed" : "some checks failed") << '\n';
   return suite.failures;
}

} // namespace lsqrbf
