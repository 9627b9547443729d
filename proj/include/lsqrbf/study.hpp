#ifndef LSQRBF_STUDY_HPP
#define LSQRBF_STUDY_HPP

#include "lsqrbf/assembly.hpp"
#include "lsqrbf/linalg.hpp"
#include "lsqrbf/postproc.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lsqrbf {

/// Manufactured solution used by a run.
enum class SolutionKind
{
   /// u* = |x|^kappa
   radial_power,
   /// u* = Phi(. - x_j) for the node j = kernel_center
   kernel,
};

/** @brief Parameters of a solve, convergence study or conditioning study.

    Level k uses the lattice spacing base_spacing / k. Quadrature starts at
    QuadratureResolution::for_spacing(spacing, quad_scale) and is doubled
    while sampled matrix entries still move by more than quad_tolerance,
    at most quad_max_doublings times and never beyond quad_max_points
    interior nodes. */
struct StudyConfig
{
   std::vector<double> taus{5.0};
   double epsilon = 10.0;
   double kappa = 4.0;
   double base_spacing = 0.25;
   std::vector<int> levels{1, 2, 4, 6, 8, 10, 12, 14};
   double weight_exponent = 3.0;

   double quad_scale = 1.0;
   double quad_tolerance = 1.0e-10;
   int quad_max_doublings = 2;
   std::size_t quad_max_points = 100000;

   std::filesystem::path out_dir = "out";
   bool dump_system = false;
   int regularity = 0;
   std::uint64_t seed = 0x5eed;

   SolutionKind solution = SolutionKind::radial_power;
   std::size_t kernel_center = 0;

   /// Also estimate cond_2(A) in convergence studies.
   bool with_cond = true;
   Eigen::Index dense_limit = 400;

   /// Throws std::invalid_argument with a message naming the offending key.
   void validate() const;
};

/// Writes the config in the same key = value form the CLI reads.
void write_config(std::ostream& out, const StudyConfig& config);

enum class Warning : unsigned
{
   none = 0,
   ill_conditioned = 1u << 0,
   solve_failed = 1u << 1,
   quadrature_unconverged = 1u << 2,
   cond_unconverged = 1u << 3,
};

constexpr Warning operator|(Warning a, Warning b)
{
   return static_cast<Warning>(static_cast<unsigned>(a) | static_cast<unsigned>(b));
}
constexpr bool has(Warning set, Warning flag)
{
   return (static_cast<unsigned>(set) & static_cast<unsigned>(flag)) != 0;
}

/// Semicolon-separated warning names, empty for none.
std::string warning_text(Warning w);

/// Observed orders of one row with respect to the previous successful row of its block.
struct LevelOrders
{
   std::optional<double> l2;
   std::optional<double> bdry;
   std::optional<double> residual;
   std::optional<double> energy;
   std::optional<double> cond;
};

struct LevelResult
{
   double tau = 0.0;
   int level = 0;
   double h_label = 0.0;
   double h_fill = 0.0;
   double q_sep = 0.0;
   std::size_t n = 0;
   QuadratureResolution quadrature;
   QuadratureCheck quadrature_check;
   std::optional<ErrorReport> errors;
   std::optional<SpectrumEstimate> spectrum;
   double relative_residual = 0.0;
   LevelOrders orders;
   Warning warnings = Warning::none;
   /// Message of the exception that stopped the level, if any.
   std::string failure;
   double wall_seconds = 0.0;
};

/// Orders at the two finest levels of a block that produced errors, next to the theory.
struct OrderSummary
{
   double tau = 0.0;
   std::optional<int> coarse_level;
   std::optional<int> fine_level;
   LevelOrders observed;
   /// Theoretical rates, present when tau >= k >= 4 with k the smoothness of u*.
   std::optional<LevelOrders> theory;
};

/// Least-squares slope of log cond vs log h_fill over the levels with a condition number.
struct CondFit
{
   double tau = 0.0;
   std::optional<double> slope;
   double theory = 0.0;
   std::size_t points = 0;
};

struct StudyReport
{
   enum class Kind { solve, convergence, conditioning };

   Kind kind = Kind::convergence;
   StudyConfig config;
   std::vector<LevelResult> rows;
   std::vector<OrderSummary> summaries;
   std::vector<CondFit> cond_fits;
   double wall_seconds = 0.0;
};

/// The manufactured problem selected by the config for the given nodes.
ManufacturedProblem make_problem(const StudyConfig& config, const KernelSpec& spec, const NodeSet& nodes);

/// Interior quadrature resolution accepted by the doubling policy, with the last check.
QuadratureCheck choose_quadrature(const StudyConfig& config, double spacing, const KernelSpec& spec,
                                  const NodeSet& nodes, const EllipticOperator& op, double boundary_weight);

struct SolveOutcome
{
   LevelResult row;
   std::optional<DiscreteSolution> solution;
};

/// One level of the pipeline: nodes, quadrature, assembly, Cholesky, errors (and cond when enabled).
SolveOutcome run_level(const StudyConfig& config, double tau, int level);

/// Single solve; the config must name exactly one tau and one level.
SolveOutcome run_solve(const StudyConfig& config);

/// Errors and orders for every (tau, level) pair, ordered by tau then level.
StudyReport run_convergence_study(const StudyConfig& config);

/// cond_2(A) per (tau, level) with consecutive orders and a fitted slope per tau.
StudyReport run_cond_study(const StudyConfig& config);

/// Fills the order columns, summaries and fits from the rows.
void compute_orders(StudyReport& report);

/// The CSV header shared by all reports.
extern const char* const kCsvHeader;

/// Values as printed: 6 significant digits for measurements, 4 decimals for orders.
std::string format_value(double x);
std::string format_order(double p);

void write_csv(std::ostream& out, const StudyReport& report);
void write_table(std::ostream& out, const StudyReport& report);
void write_meta(std::ostream& out, const StudyReport& report);

/// study.csv, study.txt and meta.txt in config.out_dir (created if missing).
void write_report(const StudyReport& report);

} // namespace lsqrbf

#endif
