#include "lsqrbf/geometry.hpp"
#include "lsqrbf/problem.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lsqrbf;

namespace {

Jet constant_jet(double v)
{
   Jet j;
   j.value = v;
   return j;
}

} // namespace

TEST_CASE("model operator on simple functions")
{
   const EllipticOperator L = model_operator();
   CHECK(L.has_constant_coefficients());
   const Point x(0.3, -0.4);
   CHECK(L.apply(x, constant_jet(1.0)) == 1.0);
   Jet lin;
   lin.value = x.x();
   lin.grad = Eigen::Vector2d(1, 0);
   CHECK(L.apply(x, lin) == doctest::Approx(1 + x.x()));

   const ManufacturedProblem p4 = radial_power_solution(4.0, L);
   const double r2 = x.squaredNorm();
   CHECK(p4.forcing(x) == doctest::Approx(-16 * r2 + 4 * r2 * (x.x() + x.y()) + r2 * r2).epsilon(1e-14));
   const ManufacturedProblem p2 = radial_power_solution(2.0, L);
   CHECK(p2.forcing(x) == doctest::Approx(-4 + 2 * (x.x() + x.y()) + r2).epsilon(1e-14));
   CHECK(p2.forcing(Point(0, 0)) == doctest::Approx(-4.0));
}

TEST_CASE("radial power family metadata and data")
{
   const ManufacturedProblem p = radial_power_solution(4.0, model_operator());
   REQUIRE(p.kappa);
   REQUIRE(p.sobolev_bound);
   CHECK(*p.kappa == 4.0);
   CHECK(*p.sobolev_bound == 5.0);
   const DiskDomain d;
   for (double t = 0; t < 6.3; t += 0.1) { CHECK(p.boundary_data(d.boundary_point(t)) == doctest::Approx(1.0).epsilon(1e-14)); }
   CHECK_THROWS_AS(radial_power_solution(1.5, model_operator()), std::invalid_argument);
   CHECK(p.exact_jet(Point(0, 0)).hess.norm() == 0.0);
   CHECK(radial_power_solution(2.0, model_operator()).exact_jet(Point(0, 0)).hess == 2.0 * Eigen::Matrix2d::Identity());
}

TEST_CASE("forcing matches finite differences of the exact solution")
{
   std::mt19937_64 rng(17);
   std::uniform_real_distribution<double> u(-0.7, 0.7);
   const KernelSpec spec(5.0, 10.0);
   const EllipticOperator var(
      [](const Point& p) {
         Eigen::Matrix2d a;
         a << 1.5, 0.2 * p.x(), 0.2 * p.x(), 1.0;
         return a;
      },
      [](const Point& p) { return Eigen::Vector2d(std::sin(p.y()), 2.0); }, [](const Point&) { return 0.5; });
   for (const EllipticOperator& op : {model_operator(), var})
   {
      const ManufacturedProblem problems[] = {radial_power_solution(4.0, op), radial_power_solution(3.3, op),
                                              kernel_solution(spec, Point(0.1, -0.2), op), zero_solution(op)};
      for (const ManufacturedProblem& p : problems)
      {
         for (int k = 0; k < 50; ++k)
         {
            const Point x(u(rng), u(rng));
            const double fd = apply_operator_fd(op, [&](const Point& y) { return p.exact(y); }, x);
            CHECK(std::abs(p.forcing(x) - fd) <= 1e-5 * (1 + std::abs(p.forcing(x))));
         }
      }
   }
}

TEST_CASE("ellipticity and symmetry checks")
{
   const DiskDomain d;
   CHECK_NOTHROW(model_operator().check_uniform_ellipticity(d, 0.5));
   CHECK_THROWS_AS(model_operator().check_uniform_ellipticity(d, 1.5), std::invalid_argument);
   const EllipticOperator degenerate(
      [](const Point& p) {
         Eigen::Matrix2d a = Eigen::Matrix2d::Identity();
         a(1, 1) = p.x();
         return a;
      },
      [](const Point&) { return Eigen::Vector2d::Zero(); }, [](const Point&) { return 0.0; });
   CHECK_THROWS_AS(degenerate.check_uniform_ellipticity(d, 1e-3), std::invalid_argument);
   Eigen::Matrix2d skew;
   skew << 1, 0.5, 0, 1;
   CHECK_THROWS_AS(EllipticOperator::constant(skew, Eigen::Vector2d::Zero(), 0.0).at(Point(0, 0)), std::invalid_argument);
}
