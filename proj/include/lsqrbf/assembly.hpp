#ifndef LSQRBF_ASSEMBLY_HPP
#define LSQRBF_ASSEMBLY_HPP

#include "lsqrbf/geometry.hpp"
#include "lsqrbf/kernel.hpp"
#include "lsqrbf/operator.hpp"
#include "lsqrbf/problem.hpp"
#include "lsqrbf/quadrature.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

namespace lsqrbf {

struct AssemblyOptions
{
   /// The boundary term is weighted by h^(-weight_exponent).
   double weight_exponent = 3.0;
   /// Use this h instead of the fill distance of the node set.
   std::optional<double> h_override;
   /// Memory budget for one block of the L-applied basis table.
   std::size_t block_bytes = std::size_t{256} << 20;
};

/** @brief Discrete least-squares system A c = b.

    A_ij = (L phi_i, L phi_j)_Omega + w (phi_i, phi_j)_dOmega and
    b_i = (L phi_i, f)_Omega + w (phi_i, g)_dOmega with w = h^(-3) and
    phi_j = Phi(. - x_j); all integrals use the stored quadrature rules. */
struct LsqSystem
{
   Eigen::MatrixXd A;
   Eigen::VectorXd b;
   double h = 0.0;
   double boundary_weight = 0.0;
   double weight_exponent = 3.0;
   KernelSpec spec;
   NodeSet nodes;
   EllipticOperator op;
   QuadratureRule interior;
   QuadratureRule boundary;
   std::size_t block_bytes = std::size_t{256} << 20;

   std::size_t size() const { return nodes.size(); }
};

/// Builds A (b is left zero).
LsqSystem assemble_matrix(const KernelSpec& spec, const NodeSet& nodes, const EllipticOperator& op,
                          const QuadratureRule& q_in, const QuadratureRule& q_bd,
                          const AssemblyOptions& options = {});

/// b for the given data; the rules and weight are taken from `system`.
Eigen::VectorXd assemble_rhs(const LsqSystem& system, const ManufacturedProblem& problem);

/// A and b in one pass over the basis table.
LsqSystem assemble_system(const KernelSpec& spec, const NodeSet& nodes, const ManufacturedProblem& problem,
                          const QuadratureRule& q_in, const QuadratureRule& q_bd,
                          const AssemblyOptions& options = {});

/// The unweighted interior and boundary Gram matrices, A = interior + w * boundary.
struct AssembledTerms
{
   Eigen::MatrixXd interior;
   Eigen::MatrixXd boundary;
};

AssembledTerms assemble_terms(const KernelSpec& spec, const NodeSet& nodes, const EllipticOperator& op,
                              const QuadratureRule& q_in, const QuadratureRule& q_bd);

/** A function sampled on the quadrature nodes of a system: L u at the
    interior nodes and u at the boundary nodes. Enough to evaluate the
    discrete energy inner product. */
struct EnergySample
{
   Eigen::VectorXd interior;
   Eigen::VectorXd boundary;

   EnergySample operator-(const EnergySample& other) const
   {
      return {interior - other.interior, boundary - other.boundary};
   }
};

/// Samples the trial function sum_j c_j phi_j.
EnergySample sample_trial(const LsqSystem& system, const Eigen::VectorXd& coefficients);

/// Samples the exact solution: f at interior nodes, g at boundary nodes.
EnergySample sample_exact(const LsqSystem& system, const ManufacturedProblem& problem);

/// Q^h(u, v) = (Lu, Lv)_Omega + w (u, v)_dOmega.
double discrete_energy_product(const LsqSystem& system, const EnergySample& u, const EnergySample& v);

/// |||u||| = sqrt(Q^h(u, u)).
double discrete_energy_norm(const LsqSystem& system, const EnergySample& u);

/// Largest relative change of sampled entries, scaled by sqrt(A_ii A_jj).
struct QuadratureCheck
{
   double max_relative_change = 0.0;
   QuadratureResolution resolution;
   bool converged = false;
};

/** Compares sampled matrix entries at `resolution` and at the doubled
    resolution. Samples the diagonal and nearest-neighbour entries of up to
    `samples` nodes spread over the node set. */
QuadratureCheck check_quadrature_convergence(const KernelSpec& spec, const NodeSet& nodes,
                                             const EllipticOperator& op, const DiskDomain& domain,
                                             const QuadratureResolution& resolution,
                                             double boundary_weight, double tolerance,
                                             int samples = 12);

/// Row-major text dump: a "rows cols" line, then one row per line, 17 significant digits.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);
void write_matrix(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(std::istream& in);
Eigen::MatrixXd read_matrix(const std::string& path);

} // namespace lsqrbf

#endif
