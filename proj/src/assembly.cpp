#include "lsqrbf/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace lsqrbf {

namespace {

std::size_t block_columns(std::size_t rows, std::size_t budget)
{
   return std::max<std::size_t>(1, budget / (sizeof(double) * std::max<std::size_t>(rows, 1)));
}

// block(i, c) = (L phi_i)(x_{first + c})
void fill_interior_block(const KernelSpec& spec, const PointList& centers, const EllipticOperator& op,
                         const QuadratureRule& rule, std::size_t first, std::size_t count,
                         Eigen::MatrixXd& block)
{
   block.resize(static_cast<Eigen::Index>(centers.size()), static_cast<Eigen::Index>(count));
   for (std::size_t c = 0; c < count; ++c)
   {
      const Point& x = rule.nodes[first + c];
      const OperatorCoefficients coeffs = op.at(x);
      double* col = block.col(static_cast<Eigen::Index>(c)).data();
      for (std::size_t i = 0; i < centers.size(); ++i)
      {
         col[i] = apply_operator(spec, coeffs, x - centers[i]);
      }
   }
}

// block(i, c) = phi_i(x_{first + c})
void fill_boundary_block(const KernelSpec& spec, const PointList& centers, const QuadratureRule& rule,
                         std::size_t first, std::size_t count, Eigen::MatrixXd& block)
{
   block.resize(static_cast<Eigen::Index>(centers.size()), static_cast<Eigen::Index>(count));
   for (std::size_t c = 0; c < count; ++c)
   {
      const Point& x = rule.nodes[first + c];
      double* col = block.col(static_cast<Eigen::Index>(c)).data();
      for (std::size_t i = 0; i < centers.size(); ++i)
      {
         col[i] = phi(spec, (x - centers[i]).norm());
      }
   }
}

enum class Part { interior, boundary };

/** Visits the basis table of one rule block by block. `visit` receives the
    block and the index of its first quadrature node. */
template <class Visit>
void for_each_block(const KernelSpec& spec, const PointList& centers, const EllipticOperator& op,
                    const QuadratureRule& rule, Part part, std::size_t budget, Visit&& visit)
{
   const std::size_t step = block_columns(centers.size(), budget);
   Eigen::MatrixXd block;
   for (std::size_t first = 0; first < rule.size(); first += step)
   {
      const std::size_t count = std::min(step, rule.size() - first);
      if (part == Part::interior) { fill_interior_block(spec, centers, op, rule, first, count, block); }
      else { fill_boundary_block(spec, centers, rule, first, count, block); }
      visit(block, first);
   }
}

/** A += scale * sum_k w_k t_k t_k^T over the rule (lower triangle), and
    optionally b += scale * sum_k w_k data_k t_k. */
void accumulate(const KernelSpec& spec, const PointList& centers, const EllipticOperator& op,
                const QuadratureRule& rule, Part part, double scale, std::size_t budget,
                Eigen::MatrixXd& A, Eigen::VectorXd* b, const std::vector<double>* data)
{
   for_each_block(spec, centers, op, rule, part, budget, [&](Eigen::MatrixXd& block, std::size_t first) {
      const Eigen::Index count = block.cols();
      Eigen::VectorXd root(count);
      for (Eigen::Index c = 0; c < count; ++c)
      {
         root(c) = std::sqrt(scale * rule.weights[first + static_cast<std::size_t>(c)]);
      }
      block = block * root.asDiagonal();
      A.selfadjointView<Eigen::Lower>().rankUpdate(block);
      if (b != nullptr)
      {
         Eigen::VectorXd weighted(count);
         for (Eigen::Index c = 0; c < count; ++c)
         {
            weighted(c) = root(c) * (*data)[first + static_cast<std::size_t>(c)];
         }
         b->noalias() += block * weighted;
      }
   });
}

void mirror_lower(Eigen::MatrixXd& A)
{
   A.triangularView<Eigen::StrictlyUpper>() = A.transpose();
}

double resolve_h(const NodeSet& nodes, const AssemblyOptions& options)
{
   const double h = options.h_override.value_or(nodes.h_fill);
   if (!(h > 0.0)) { throw std::invalid_argument("assembly: fill distance must be positive"); }
   return h;
}

LsqSystem make_system(const KernelSpec& spec, const NodeSet& nodes, const EllipticOperator& op,
                      const QuadratureRule& q_in, const QuadratureRule& q_bd,
                      const AssemblyOptions& options)
{
   spec.require_second_derivatives();
   if (nodes.size() == 0) { throw std::invalid_argument("assembly: empty node set"); }
   const double h = resolve_h(nodes, options);
   const auto n = static_cast<Eigen::Index>(nodes.size());
   return LsqSystem{Eigen::MatrixXd::Zero(n, n),
                    Eigen::VectorXd::Zero(n),
                    h,
                    std::pow(h, -options.weight_exponent),
                    options.weight_exponent,
                    spec,
                    nodes,
                    op,
                    q_in,
                    q_bd,
                    options.block_bytes};
}

std::vector<double> interior_data(const LsqSystem& system, const ManufacturedProblem& problem)
{
   std::vector<double> f(system.interior.size());
   for (std::size_t k = 0; k < f.size(); ++k) { f[k] = problem.forcing(system.interior.nodes[k]); }
   return f;
}

std::vector<double> boundary_data(const LsqSystem& system, const ManufacturedProblem& problem)
{
   std::vector<double> g(system.boundary.size());
   for (std::size_t k = 0; k < g.size(); ++k) { g[k] = problem.boundary_data(system.boundary.nodes[k]); }
   return g;
}

} // namespace

LsqSystem assemble_matrix(const KernelSpec& spec, const NodeSet& nodes, const EllipticOperator& op,
                          const QuadratureRule& q_in, const QuadratureRule& q_bd,
                          const AssemblyOptions& options)
{
   LsqSystem system = make_system(spec, nodes, op, q_in, q_bd, options);
   accumulate(spec, nodes.points, op, q_in, Part::interior, 1.0, options.block_bytes, system.A,
              nullptr, nullptr);
   accumulate(spec, nodes.points, op, q_bd, Part::boundary, system.boundary_weight,
              options.block_bytes, system.A, nullptr, nullptr);
   mirror_lower(system.A);
   return system;
}

Eigen::VectorXd assemble_rhs(const LsqSystem& system, const ManufacturedProblem& problem)
{
   const auto n = static_cast<Eigen::Index>(system.size());
   Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
   const std::vector<double> f = interior_data(system, problem);
   const std::vector<double> g = boundary_data(system, problem);
   for_each_block(system.spec, system.nodes.points, system.op, system.interior, Part::interior,
                  system.block_bytes, [&](const Eigen::MatrixXd& block, std::size_t first) {
                     Eigen::VectorXd wf(block.cols());
                     for (Eigen::Index c = 0; c < block.cols(); ++c)
                     {
                        const std::size_t k = first + static_cast<std::size_t>(c);
                        wf(c) = system.interior.weights[k] * f[k];
                     }
                     b.noalias() += block * wf;
                  });
   for_each_block(system.spec, system.nodes.points, system.op, system.boundary, Part::boundary,
                  system.block_bytes, [&](const Eigen::MatrixXd& block, std::size_t first) {
                     Eigen::VectorXd wg(block.cols());
                     for (Eigen::Index c = 0; c < block.cols(); ++c)
                     {
                        const std::size_t k = first + static_cast<std::size_t>(c);
                        wg(c) = system.boundary_weight * system.boundary.weights[k] * g[k];
                     }
                     b.noalias() += block * wg;
                  });
   return b;
}

LsqSystem assemble_system(const KernelSpec& spec, const NodeSet& nodes, const ManufacturedProblem& problem,
                          const QuadratureRule& q_in, const QuadratureRule& q_bd,
                          const AssemblyOptions& options)
{
   LsqSystem system = make_system(spec, nodes, problem.op(), q_in, q_bd, options);
   const std::vector<double> f = interior_data(system, problem);
   const std::vector<double> g = boundary_data(system, problem);
   accumulate(spec, nodes.points, problem.op(), q_in, Part::interior, 1.0, options.block_bytes,
              system.A, &system.b, &f);
   accumulate(spec, nodes.points, problem.op(), q_bd, Part::boundary, system.boundary_weight,
              options.block_bytes, system.A, &system.b, &g);
   mirror_lower(system.A);
   return system;
}

AssembledTerms assemble_terms(const KernelSpec& spec, const NodeSet& nodes, const EllipticOperator& op,
                              const QuadratureRule& q_in, const QuadratureRule& q_bd)
{
   spec.require_second_derivatives();
   const auto n = static_cast<Eigen::Index>(nodes.size());
   AssembledTerms terms{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
   const std::size_t budget = AssemblyOptions{}.block_bytes;
   accumulate(spec, nodes.points, op, q_in, Part::interior, 1.0, budget, terms.interior, nullptr, nullptr);
   accumulate(spec, nodes.points, op, q_bd, Part::boundary, 1.0, budget, terms.boundary, nullptr, nullptr);
   mirror_lower(terms.interior);
   mirror_lower(terms.boundary);
   return terms;
}

EnergySample sample_trial(const LsqSystem& system, const Eigen::VectorXd& coefficients)
{
   if (coefficients.size() != static_cast<Eigen::Index>(system.size()))
   {
      throw std::invalid_argument("sample_trial: coefficient vector has the wrong length");
   }
   EnergySample s{Eigen::VectorXd(static_cast<Eigen::Index>(system.interior.size())),
                  Eigen::VectorXd(static_cast<Eigen::Index>(system.boundary.size()))};
   for_each_block(system.spec, system.nodes.points, system.op, system.interior, Part::interior,
                  system.block_bytes, [&](const Eigen::MatrixXd& block, std::size_t first) {
                     s.interior.segment(static_cast<Eigen::Index>(first), block.cols()).noalias() =
                        block.transpose() * coefficients;
                  });
   for_each_block(system.spec, system.nodes.points, system.op, system.boundary, Part::boundary,
                  system.block_bytes, [&](const Eigen::MatrixXd& block, std::size_t first) {
                     s.boundary.segment(static_cast<Eigen::Index>(first), block.cols()).noalias() =
                        block.transpose() * coefficients;
                  });
   return s;
}

EnergySample sample_exact(const LsqSystem& system, const ManufacturedProblem& problem)
{
   const std::vector<double> f = interior_data(system, problem);
   const std::vector<double> g = boundary_data(system, problem);
   return {Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size())),
           Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()))};
}

double discrete_energy_product(const LsqSystem& system, const EnergySample& u, const EnergySample& v)
{
   double interior = 0.0;
   for (std::size_t k = 0; k < system.interior.size(); ++k)
   {
      const auto i = static_cast<Eigen::Index>(k);
      interior += system.interior.weights[k] * u.interior(i) * v.interior(i);
   }
   double boundary = 0.0;
   for (std::size_t k = 0; k < system.boundary.size(); ++k)
   {
      const auto i = static_cast<Eigen::Index>(k);
      boundary += system.boundary.weights[k] * u.boundary(i) * v.boundary(i);
   }
   return interior + system.boundary_weight * boundary;
}

double discrete_energy_norm(const LsqSystem& system, const EnergySample& u)
{
   return std::sqrt(discrete_energy_product(system, u, u));
}

QuadratureCheck check_quadrature_convergence(const KernelSpec& spec, const NodeSet& nodes,
                                             const EllipticOperator& op, const DiskDomain& domain,
                                             const QuadratureResolution& resolution,
                                             double boundary_weight, double tolerance, int samples)
{
   const PointList& pts = nodes.points;
   const std::size_t n = pts.size();
   // sampled nodes and their nearest neighbours; every node in a pair also gets its diagonal
   std::vector<std::pair<std::size_t, std::size_t>> pairs;
   std::vector<bool> has_diag(n, false);
   auto add_diag = [&](std::size_t i) {
      if (!has_diag[i])
      {
         has_diag[i] = true;
         pairs.emplace_back(i, i);
      }
   };
   const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(std::max(samples, 1)), n);
   for (std::size_t s = 0; s < count; ++s)
   {
      const std::size_t i = count == 1 ? 0 : s * (n - 1) / (count - 1);
      add_diag(i);
      std::size_t nearest = i;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j)
      {
         const double d = (pts[j] - pts[i]).squaredNorm();
         if (j != i && d < best)
         {
            best = d;
            nearest = j;
         }
      }
      if (nearest != i)
      {
         add_diag(nearest);
         pairs.emplace_back(i, nearest);
      }
   }

   std::vector<std::size_t> involved;
   for (std::size_t i = 0; i < n; ++i)
   {
      if (has_diag[i]) { involved.push_back(i); }
   }
   std::vector<std::size_t> slot(n, 0);
   for (std::size_t s = 0; s < involved.size(); ++s) { slot[involved[s]] = s; }

   auto entries = [&](const QuadratureResolution& res) {
      const QuadratureRule q_in = disk_rule(domain, res.n_r, res.n_theta);
      const QuadratureRule q_bd = circle_rule(domain, res.n_b);
      std::vector<double> values(pairs.size(), 0.0);
      std::vector<double> column(involved.size());
      auto accumulate = [&](double weight) {
         for (std::size_t p = 0; p < pairs.size(); ++p)
         {
            values[p] += weight * column[slot[pairs[p].first]] * column[slot[pairs[p].second]];
         }
      };
      for (std::size_t k = 0; k < q_in.size(); ++k)
      {
         const Point& x = q_in.nodes[k];
         const OperatorCoefficients coeffs = op.at(x);
         for (std::size_t s = 0; s < involved.size(); ++s)
         {
            column[s] = apply_operator(spec, coeffs, x - pts[involved[s]]);
         }
         accumulate(q_in.weights[k]);
      }
      for (std::size_t k = 0; k < q_bd.size(); ++k)
      {
         const Point& x = q_bd.nodes[k];
         for (std::size_t s = 0; s < involved.size(); ++s) { column[s] = phi(spec, (x - pts[involved[s]]).norm()); }
         accumulate(boundary_weight * q_bd.weights[k]);
      }
      return values;
   };

   const std::vector<double> coarse = entries(resolution);
   const std::vector<double> fine = entries(resolution.doubled());
   std::vector<double> diag(n, 0.0);
   for (std::size_t p = 0; p < pairs.size(); ++p)
   {
      if (pairs[p].first == pairs[p].second) { diag[pairs[p].first] = fine[p]; }
   }
   QuadratureCheck check;
   check.resolution = resolution;
   for (std::size_t p = 0; p < pairs.size(); ++p)
   {
      const auto [i, j] = pairs[p];
      const double scale = std::sqrt(diag[i] * diag[j]);
      check.max_relative_change = std::max(check.max_relative_change, std::abs(fine[p] - coarse[p]) / scale);
   }
   check.converged = check.max_relative_change <= tolerance;
   return check;
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m)
{
   out << m.rows() << ' ' << m.cols() << '\n' << std::scientific << std::setprecision(16);
   for (Eigen::Index i = 0; i < m.rows(); ++i)
   {
      for (Eigen::Index j = 0; j < m.cols(); ++j)
      {
         if (j > 0) { out << ' '; }
         out << m(i, j);
      }
      out << '\n';
   }
}

void write_matrix(const std::string& path, const Eigen::MatrixXd& m)
{
   std::ofstream out(path);
   if (!out) { throw std::runtime_error("cannot open " + path + " for writing"); }
   write_matrix(out, m);
}

Eigen::MatrixXd read_matrix(std::istream& in)
{
   Eigen::Index rows = 0;
   Eigen::Index cols = 0;
   if (!(in >> rows >> cols) || rows < 0 || cols < 0)
   {
      throw std::runtime_error("read_matrix: malformed header");
   }
   Eigen::MatrixXd m(rows, cols);
   for (Eigen::Index i = 0; i < rows; ++i)
   {
      for (Eigen::Index j = 0; j < cols; ++j)
      {
         if (!(in >> m(i, j))) { throw std::runtime_error("read_matrix: truncated data"); }
      }
   }
   return m;
}

Eigen::MatrixXd read_matrix(const std::string& path)
{
   std::ifstream in(path);
   if (!in) { throw std::runtime_error("cannot open " + path); }
   return read_matrix(in);
}

} // namespace lsqrbf
