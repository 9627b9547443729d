#include "lsqrbf/assembly.hpp"
#include "lsqrbf/linalg.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace lsqrbf;

namespace {

struct Fixture
{
   DiskDomain disk;
   KernelSpec spec{4.0, 10.0};
   NodeSet nodes = regular_disk_nodes(disk, 0.3);
   QuadratureResolution res = QuadratureResolution::for_spacing(0.3, 2.0);
   QuadratureRule q_in = disk_rule(disk, res.n_r, res.n_theta);
   QuadratureRule q_bd = circle_rule(disk, res.n_b);
};

/// z^mu K_mu(z) for mu, mu - 1, mu - 2 from one trapezoid sum of the cosh integral.
std::array<double, 3> scaled_bessel_triple(double mu, double z)
{
   const double step = 1.0 / 16;
   std::array<double, 3> sum{0.5, 0.5, 0.5};
   for (int k = 1;; ++k)
   {
      const double t = k * step;
      const double e = std::exp(-z * (std::cosh(t) - 1.0));
      for (int m = 0; m < 3; ++m) { sum[m] += e * std::cosh((mu - m) * t); }
      if (e * std::cosh(mu * t) < 1e-20 * sum[0]) { break; }
   }
   std::array<double, 3> g{};
   for (int m = 0; m < 3; ++m) { g[m] = std::pow(z, mu - m) * sum[m] * step * std::exp(-z); }
   return g;
}

/// Paper operator applied to the kernel centred at c, from closed-form radial derivatives.
double apply_model_operator(double nu, double eps, const Point& x, const Point& c)
{
   const Point d = x - c;
   const double z = eps * d.norm();
   if (z == 0.0)
   {
      const double g0 = std::pow(2.0, nu - 1.0) * std::tgamma(nu);
      const double g1 = std::pow(2.0, nu - 2.0) * std::tgamma(nu - 1.0);
      return 2.0 * eps * eps * g1 + g0;
   }
   const auto g = scaled_bessel_triple(nu, z);
   // Laplacian -2 eps^2 g_{nu-1} + eps^2 z^2 g_{nu-2}, gradient -eps^2 g_{nu-1} (x - c)
   const double lap = -2.0 * eps * eps * g[1] + eps * eps * z * z * g[2];
   const double grad_sum = -eps * eps * g[1] * d.sum();
   return -lap + grad_sum + g[0];
}

/// Two-node matrix by Simpson in radius and trapezoid in angle, independent of the library rules.
Eigen::Matrix2d brute_matrix(double nu, double eps, const Point& x0, const Point& x1, double weight, int n)
{
   const double pi = std::numbers::pi;
   const double hr = 1.0 / n;
   const double ht = 2.0 * pi / n;
   auto simpson_weight = [n](int i) { return (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0); };
   Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
   for (int i = 0; i <= n; ++i)
   {
      const double r = i * hr;
      for (int k = 0; k < n; ++k)
      {
         // periodic in angle: the trapezoid rule with equal weights
         const Point x(r * std::cos(k * ht), r * std::sin(k * ht));
         const Eigen::Vector2d l(apply_model_operator(nu, eps, x, x0), apply_model_operator(nu, eps, x, x1));
         A += simpson_weight(i) * hr / 3.0 * ht * r * (l * l.transpose());
      }
   }
   for (int k = 0; k < 4 * n; ++k)
   {
      const double t = k * ht / 4.0;
      const Point x(std::cos(t), std::sin(t));
      const Eigen::Vector2d v(oracle::matern(nu, eps, (x - x0).norm()), oracle::matern(nu, eps, (x - x1).norm()));
      A += weight * ht / 4.0 * (v * v.transpose());
   }
   return A;
}

} // namespace

TEST_CASE("matrix is bitwise symmetric and positive definite")
{
   Fixture f;
   const LsqSystem s = assemble_matrix(f.spec, f.nodes, model_operator(), f.q_in, f.q_bd);
   CHECK(s.A == s.A.transpose());
   CHECK(s.b.isZero(0.0));
   CHECK_NOTHROW(SpdFactorization(s.A));
   CHECK(s.boundary_weight == doctest::Approx(std::pow(f.nodes.h_fill, -3.0)));
   for (Eigen::Index i = 0; i < s.A.rows(); ++i) { CHECK(s.A(i, i) > 0.0); }
}

TEST_CASE("single node")
{
   Fixture f;
   const NodeSet one = regular_disk_nodes(f.disk, 2.0);
   const LsqSystem s = assemble_matrix(f.spec, one, model_operator(), f.q_in, f.q_bd);
   REQUIRE(s.A.rows() == 1);
   CHECK(s.A(0, 0) > 0.0);
}

TEST_CASE("two-node entries against a refined independent quadrature")
{
   const DiskDomain disk;
   const KernelSpec spec(5.0, 10.0);
   const NodeSet nodes = make_node_set(disk, {Point(0.1, 0.05), Point(-0.2, 0.15)});
   const QuadratureRule q_in = disk_rule(disk, 160, 320);
   const QuadratureRule q_bd = circle_rule(disk, 640);
   AssemblyOptions opt;
   opt.h_override = 0.5;
   const LsqSystem s = assemble_matrix(spec, nodes, model_operator(), q_in, q_bd, opt);
   const Eigen::Matrix2d ref = brute_matrix(spec.nu(), spec.epsilon(), nodes.points[0], nodes.points[1], 8.0, 600);
   for (int i = 0; i < 2; ++i)
   {
      for (int j = 0; j < 2; ++j) { CHECK(s.A(i, j) == doctest::Approx(ref(i, j)).epsilon(1e-7)); }
   }
}

TEST_CASE("entries converge under quadrature refinement")
{
   const DiskDomain disk;
   const NodeSet nodes = regular_disk_nodes(disk, 0.3);
   const QuadratureResolution res = QuadratureResolution::for_spacing(0.3, 2.0);
   auto change = [&](const KernelSpec& spec, int m) {
      auto A = [&](int k) {
         return assemble_matrix(spec, nodes, model_operator(), disk_rule(disk, k * res.n_r, k * res.n_theta),
                                circle_rule(disk, k * res.n_b))
            .A;
      };
      const Eigen::MatrixXd fine = A(4);
      const Eigen::VectorXd d = fine.diagonal().cwiseSqrt();
      return (A(m) - fine).cwiseQuotient(d * d.transpose()).cwiseAbs().maxCoeff();
   };
   // tau = 5 is smooth enough for fast convergence at the base resolution
   CHECK(change(KernelSpec(5.0, 10.0), 1) <= 1e-7);
   // tau = 4 converges algebraically through the log term of L Phi at the centre
   const KernelSpec rough(4.0, 10.0);
   const double c1 = change(rough, 1);
   const double c2 = change(rough, 2);
   CHECK(c1 <= 1e-5);
   CHECK(c2 <= c1 / 16.0);
}

TEST_CASE("right-hand side")
{
   Fixture f;
   LsqSystem s = assemble_matrix(f.spec, f.nodes, model_operator(), f.q_in, f.q_bd);
   CHECK(assemble_rhs(s, zero_solution(model_operator())).isZero(0.0));

   const std::size_t j = 3;
   const ManufacturedProblem basis = kernel_solution(f.spec, f.nodes.points[j], model_operator());
   const Eigen::VectorXd b = assemble_rhs(s, basis);
   CHECK((b - s.A.col(static_cast<Eigen::Index>(j))).norm() <= 1e-9 * b.norm());

   const ManufacturedProblem p1 = radial_power_solution(4.0, model_operator());
   const ManufacturedProblem sum(model_operator(), [&](const Point& x) {
      const Jet a = p1.exact_jet(x);
      const Jet c = basis.exact_jet(x);
      return Jet{a.value + c.value, a.grad + c.grad, a.hess + c.hess};
   });
   const Eigen::VectorXd lin = assemble_rhs(s, sum) - assemble_rhs(s, p1) - b;
   CHECK(lin.norm() <= 1e-13 * assemble_rhs(s, sum).norm());

   const LsqSystem both = assemble_system(f.spec, f.nodes, p1, f.q_in, f.q_bd);
   CHECK(both.A == s.A);
   CHECK((both.b - assemble_rhs(s, p1)).norm() <= 1e-13 * both.b.norm());
}

TEST_CASE("energy products")
{
   Fixture f;
   const ManufacturedProblem p = radial_power_solution(4.0, model_operator());
   const LsqSystem s = assemble_system(f.spec, f.nodes, p, f.q_in, f.q_bd);
   const Eigen::Index n = s.A.rows();

   const EnergySample zero = sample_trial(s, Eigen::VectorXd::Zero(n));
   const EnergySample exact = sample_exact(s, p);
   CHECK(discrete_energy_product(s, zero, exact) == 0.0);

   for (Eigen::Index i : {0, 5, 11})
   {
      const EnergySample ei = sample_trial(s, Eigen::VectorXd::Unit(n, i));
      for (Eigen::Index j : {0, 2, 11})
      {
         const EnergySample ej = sample_trial(s, Eigen::VectorXd::Unit(n, j));
         CHECK(discrete_energy_product(s, ei, ej) == doctest::Approx(s.A(i, j)).epsilon(1e-13));
      }
      CHECK(discrete_energy_product(s, exact, ei) == doctest::Approx(s.b(i)).epsilon(1e-12));
   }
   CHECK(discrete_energy_norm(s, exact) > 0.0);
}

TEST_CASE("boundary weight enters only the boundary term")
{
   Fixture f;
   const AssembledTerms terms = assemble_terms(f.spec, f.nodes, model_operator(), f.q_in, f.q_bd);
   for (double h : {0.2, 0.05})
   {
      AssemblyOptions opt;
      opt.h_override = h;
      const LsqSystem s = assemble_matrix(f.spec, f.nodes, model_operator(), f.q_in, f.q_bd, opt);
      const Eigen::MatrixXd expected = terms.interior + std::pow(h, -3.0) * terms.boundary;
      CHECK((s.A - expected).norm() <= 1e-12 * s.A.norm());
      CHECK(s.boundary_weight == std::pow(h, -3.0));
   }
   AssemblyOptions opt;
   opt.weight_exponent = 2.0;
   opt.h_override = 0.1;
   const LsqSystem s2 = assemble_matrix(f.spec, f.nodes, model_operator(), f.q_in, f.q_bd, opt);
   CHECK(s2.boundary_weight == doctest::Approx(100.0));
}

TEST_CASE("small block budget gives the same system")
{
   Fixture f;
   const ManufacturedProblem p = radial_power_solution(4.0, model_operator());
   AssemblyOptions small;
   small.block_bytes = 4096;
   const LsqSystem a = assemble_system(f.spec, f.nodes, p, f.q_in, f.q_bd);
   const LsqSystem b = assemble_system(f.spec, f.nodes, p, f.q_in, f.q_bd, small);
   CHECK((a.A - b.A).norm() <= 1e-13 * a.A.norm());
   CHECK((a.b - b.b).norm() <= 1e-13 * a.b.norm());
}

TEST_CASE("kernel with too little smoothness is rejected")
{
   Fixture f;
   CHECK_THROWS_AS(assemble_matrix(KernelSpec(2.0, 10.0), f.nodes, model_operator(), f.q_in, f.q_bd),
                   std::invalid_argument);
}

TEST_CASE("quadrature convergence check")
{
   const DiskDomain disk;
   const KernelSpec spec(5.0, 10.0);
   const NodeSet nodes = regular_disk_nodes(disk, 0.0625);
   const QuadratureResolution res = QuadratureResolution::for_spacing(0.0625);
   const QuadratureCheck check = check_quadrature_convergence(spec, nodes, model_operator(), disk, res,
                                                              std::pow(nodes.h_fill, -3.0), 1e-10);
   CHECK(check.resolution.n_r == res.n_r);
   CHECK(check.max_relative_change > 0.0);
   const QuadratureCheck doubled = check_quadrature_convergence(spec, nodes, model_operator(), disk, res.doubled(),
                                                                std::pow(nodes.h_fill, -3.0), 1e-10);
   CHECK(doubled.max_relative_change < check.max_relative_change);
   CHECK(doubled.converged);
}

TEST_CASE("matrix dump round trip")
{
   Eigen::MatrixXd m(2, 3);
   m << 1.0 / 3, -2e-300, 4e200, 0.0, 5.5, -7.0 / 9;
   std::stringstream buf;
   write_matrix(buf, m);
   CHECK(buf.str().rfind("2 3\n", 0) == 0);
   const Eigen::MatrixXd back = read_matrix(buf);
   CHECK(back == m);
   std::stringstream bad("2 2\n1 2\n3\n");
   CHECK_THROWS(read_matrix(bad));
}
