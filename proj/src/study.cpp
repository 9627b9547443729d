#include "lsqrbf/study.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lsqrbf {

const char* const kCsvHeader =
   "tau,level,h_label,h_fill,N,l2_rms,l2_order,bdry_l2,bdry_order,residual_l2,residual_order,"
   "energy,energy_order,cond,cond_order,warn";

namespace {

constexpr int kDim = 2;
constexpr double kWarnCond = 1.0e13;
constexpr int kMaxGaussPoints = 512;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
   return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string join(const std::vector<double>& values)
{
   std::ostringstream out;
   out << std::setprecision(17);
   for (std::size_t k = 0; k < values.size(); ++k) { out << (k ? "," : "") << values[k]; }
   return out.str();
}

std::string join(const std::vector<int>& values)
{
   std::ostringstream out;
   for (std::size_t k = 0; k < values.size(); ++k) { out << (k ? "," : "") << values[k]; }
   return out.str();
}

/// The value a reader of the CSV sees.
double printed(double x) { return std::stod(format_value(x)); }

std::optional<double> order_or_empty(double e1, double e2, double h1, double h2)
{
   try
   {
      return convergence_order(printed(e1), printed(e2), printed(h1), printed(h2));
   }
   catch (const std::domain_error&)
   {
      return std::nullopt;
   }
}

LevelOrders orders_between(const LevelResult& coarse, const LevelResult& fine)
{
   LevelOrders o;
   if (coarse.errors && fine.errors)
   {
      const ErrorReport& a = *coarse.errors;
      const ErrorReport& b = *fine.errors;
      o.l2 = order_or_empty(a.l2_rms, b.l2_rms, coarse.h_fill, fine.h_fill);
      o.bdry = order_or_empty(a.bdry_l2, b.bdry_l2, coarse.h_fill, fine.h_fill);
      o.residual = order_or_empty(a.residual_l2, b.residual_l2, coarse.h_fill, fine.h_fill);
      o.energy = order_or_empty(a.energy, b.energy, coarse.h_fill, fine.h_fill);
   }
   if (coarse.spectrum && fine.spectrum)
   {
      o.cond = order_or_empty(coarse.spectrum->cond, fine.spectrum->cond, coarse.h_fill, fine.h_fill);
   }
   return o;
}

std::optional<LevelOrders> theory_orders(const StudyConfig& config, double tau)
{
   if (config.solution != SolutionKind::radial_power) { return std::nullopt; }
   const double k = config.kappa + 0.5 * kDim;
   if (tau < k || k < 4.0) { return std::nullopt; }
   LevelOrders t;
   t.l2 = k;
   t.bdry = k - 0.5;
   t.residual = k - 2.0;
   t.energy = k - 2.0;
   t.cond = -4.0 * tau;
   return t;
}

std::optional<double> fit_slope(const std::vector<double>& x, const std::vector<double>& y)
{
   if (x.size() < 2) { return std::nullopt; }
   const double n = static_cast<double>(x.size());
   double mx = 0.0;
   double my = 0.0;
   for (std::size_t k = 0; k < x.size(); ++k)
   {
      mx += x[k] / n;
      my += y[k] / n;
   }
   double sxy = 0.0;
   double sxx = 0.0;
   for (std::size_t k = 0; k < x.size(); ++k)
   {
      sxy += (x[k] - mx) * (y[k] - my);
      sxx += (x[k] - mx) * (x[k] - mx);
   }
   if (sxx == 0.0) { return std::nullopt; }
   return sxy / sxx;
}

std::string system_file(const StudyConfig& config, double tau, int level, const char* stem, const char* ext)
{
   std::ostringstream name;
   name << stem << "_tau" << tau << "_k" << level << ext;
   return (config.out_dir / name.str()).string();
}

std::string opt_value(const std::optional<double>& x) { return x ? format_value(*x) : ""; }
std::string opt_order(const std::optional<double>& x) { return x ? format_order(*x) : ""; }

SolveOutcome run_level_impl(const StudyConfig& config, double tau, int level, bool solve,
                            const PointList& eval_interior, const PointList& eval_boundary)
{
   const auto start = Clock::now();
   const KernelSpec spec(tau, config.epsilon, kDim);
   spec.require_second_derivatives();
   const DiskDomain domain;
   const double spacing = config.base_spacing / level;
   const NodeSet nodes = regular_disk_nodes(domain, spacing);

   SolveOutcome out;
   LevelResult& row = out.row;
   row.tau = tau;
   row.level = level;
   row.h_label = spacing;
   row.h_fill = nodes.h_fill;
   row.q_sep = nodes.q_sep;
   row.n = nodes.size();

   const ManufacturedProblem problem = make_problem(config, spec, nodes);
   const double weight = std::pow(nodes.h_fill, -config.weight_exponent);
   row.quadrature_check = choose_quadrature(config, spacing, spec, nodes, problem.op(), weight);
   row.quadrature = row.quadrature_check.resolution;
   if (!row.quadrature_check.converged) { row.warnings = row.warnings | Warning::quadrature_unconverged; }

   const QuadratureRule q_in = disk_rule(domain, row.quadrature.n_r, row.quadrature.n_theta);
   const QuadratureRule q_bd = circle_rule(domain, row.quadrature.n_b);
   AssemblyOptions options;
   options.weight_exponent = config.weight_exponent;
   const LsqSystem system = solve ? assemble_system(spec, nodes, problem, q_in, q_bd, options)
                                  : assemble_matrix(spec, nodes, problem.op(), q_in, q_bd, options);

   if (config.dump_system)
   {
      std::filesystem::create_directories(config.out_dir);
      write_matrix(system_file(config, tau, level, "A", ".mat"), system.A);
      if (solve) { write_matrix(system_file(config, tau, level, "b", ".vec"), system.b); }
   }

   ConditionOptions cond_options;
   cond_options.dense_limit = config.dense_limit;
   try
   {
      const SpdFactorization factor(system.A);
      if (solve)
      {
         const Eigen::VectorXd c = factor.solve(system.b);
         const double bnorm = system.b.norm();
         const double rnorm = (system.A * c - system.b).norm();
         row.relative_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
         out.solution = DiscreteSolution{c, spec, nodes.points};
      }
      if (!solve || config.with_cond)
      {
         row.spectrum = condition_number(system.A, factor, cond_options);
         if (!row.spectrum->converged) { row.warnings = row.warnings | Warning::cond_unconverged; }
         if (row.spectrum->cond > kWarnCond) { row.warnings = row.warnings | Warning::ill_conditioned; }
      }
      else if (1.0 / factor.rcond() > kWarnCond)
      {
         row.warnings = row.warnings | Warning::ill_conditioned;
      }
   }
   catch (const NotPositiveDefiniteError& e)
   {
      row.warnings = row.warnings | Warning::solve_failed | Warning::ill_conditioned;
      std::ostringstream msg;
      msg << "tau " << tau << " level " << level << ": " << e.what();
      row.failure = msg.str();
      out.solution.reset();
   }

   if (out.solution)
   {
      row.errors = error_report(*out.solution, problem, eval_interior, eval_boundary, system);
      if (row.spectrum) { row.errors->cond = row.spectrum->cond; }
   }
   row.wall_seconds = seconds_since(start);
   return out;
}

StudyReport run_study(const StudyConfig& config, StudyReport::Kind kind)
{
   config.validate();
   const auto start = Clock::now();
   const DiskDomain domain;
   const bool solve = kind != StudyReport::Kind::conditioning;
   const PointList eval_interior = solve ? interior_evaluation_points(domain) : PointList{};
   const PointList eval_boundary = solve ? boundary_evaluation_points(domain) : PointList{};

   StudyReport report;
   report.kind = kind;
   report.config = config;
   for (double tau : config.taus)
   {
      for (int level : config.levels)
      {
         report.rows.push_back(run_level_impl(config, tau, level, solve, eval_interior, eval_boundary).row);
      }
   }
   compute_orders(report);
   report.wall_seconds = seconds_since(start);
   return report;
}

void require_key(bool ok, const std::string& message)
{
   if (!ok) { throw std::invalid_argument("invalid configuration: " + message); }
}

} // namespace

void StudyConfig::validate() const
{
   require_key(!taus.empty(), "tau list is empty");
   for (double tau : taus)
   {
      std::ostringstream msg;
      msg << "tau = " << tau << " must exceed d/2 + 1 = " << 0.5 * kDim + 1.0
          << " so that the kernel has classical second derivatives";
      require_key(std::isfinite(tau) && tau > 0.5 * kDim + 1.0, msg.str());
      std::ostringstream reg;
      reg << "tau = " << tau << " must be at least regularity + 2 = " << regularity + 2;
      require_key(tau >= regularity + 2.0, reg.str());
   }
   require_key(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be positive");
   require_key(std::isfinite(kappa) && kappa >= 2.0, "kappa must be at least 2");
   require_key(std::isfinite(base_spacing) && base_spacing > 0.0, "base_spacing must be positive");
   require_key(!levels.empty(), "levels list is empty");
   for (std::size_t k = 0; k < levels.size(); ++k)
   {
      require_key(levels[k] > 0, "levels must be positive integers");
      require_key(k == 0 || levels[k] > levels[k - 1], "levels must be strictly increasing");
   }
   require_key(std::isfinite(weight_exponent), "weight_exp must be finite");
   require_key(std::isfinite(quad_scale) && quad_scale > 0.0, "quad_scale must be positive");
   require_key(quad_tolerance > 0.0, "quad_tol must be positive");
   require_key(quad_max_doublings >= 0, "quad_max_doublings must be nonnegative");
   require_key(regularity >= 0, "regularity must be nonnegative");
   require_key(dense_limit >= 0, "dense_limit must be nonnegative");
}

void write_config(std::ostream& out, const StudyConfig& c)
{
   out << std::setprecision(17);
   out << "tau = " << join(c.taus) << '\n'
       << "epsilon = " << c.epsilon << '\n'
       << "kappa = " << c.kappa << '\n'
       << "base_spacing = " << c.base_spacing << '\n'
       << "levels = " << join(c.levels) << '\n'
       << "weight_exp = " << c.weight_exponent << '\n'
       << "quad_scale = " << c.quad_scale << '\n'
       << "quad_tol = " << c.quad_tolerance << '\n'
       << "quad_max_doublings = " << c.quad_max_doublings << '\n'
       << "quad_max_points = " << c.quad_max_points << '\n'
       << "regularity = " << c.regularity << '\n'
       << "seed = " << c.seed << '\n'
       << "solution = " << (c.solution == SolutionKind::kernel ? "kernel" : "power") << '\n'
       << "kernel_center = " << c.kernel_center << '\n'
       << "cond = " << (c.with_cond ? "true" : "false") << '\n'
       << "dense_limit = " << c.dense_limit << '\n'
       << "dump_system = " << (c.dump_system ? "true" : "false") << '\n';
}

std::string warning_text(Warning w)
{
   std::string text;
   auto add = [&](Warning flag, const char* name) {
      if (has(w, flag)) { text += (text.empty() ? "" : ";") + std::string(name); }
   };
   add(Warning::ill_conditioned, "ill_conditioned");
   add(Warning::solve_failed, "solve_failed");
   add(Warning::quadrature_unconverged, "quadrature_unconverged");
   add(Warning::cond_unconverged, "cond_unconverged");
   return text;
}

ManufacturedProblem make_problem(const StudyConfig& config, const KernelSpec& spec, const NodeSet& nodes)
{
   const EllipticOperator op = model_operator();
   if (config.solution == SolutionKind::kernel)
   {
      if (config.kernel_center >= nodes.size())
      {
         throw std::invalid_argument("kernel_center is not a node index at this level");
      }
      return kernel_solution(spec, nodes.points[config.kernel_center], op);
   }
   return radial_power_solution(config.kappa, op, kDim);
}

QuadratureCheck choose_quadrature(const StudyConfig& config, double spacing, const KernelSpec& spec,
                                  const NodeSet& nodes, const EllipticOperator& op, double boundary_weight)
{
   const DiskDomain domain;
   QuadratureResolution res = QuadratureResolution::for_spacing(spacing, config.quad_scale);
   for (int doubling = 0;; ++doubling)
   {
      QuadratureCheck check = check_quadrature_convergence(spec, nodes, op, domain, res, boundary_weight,
                                                           config.quad_tolerance);
      const QuadratureResolution next = res.doubled();
      const std::size_t next_points = static_cast<std::size_t>(next.n_r) * next.n_theta;
      if (check.converged || doubling >= config.quad_max_doublings || next_points > config.quad_max_points
          || 2 * next.n_r > kMaxGaussPoints)
      {
         return check;
      }
      res = next;
   }
}

SolveOutcome run_level(const StudyConfig& config, double tau, int level)
{
   config.validate();
   const DiskDomain domain;
   return run_level_impl(config, tau, level, true, interior_evaluation_points(domain),
                         boundary_evaluation_points(domain));
}

SolveOutcome run_solve(const StudyConfig& config)
{
   if (config.taus.size() != 1 || config.levels.size() != 1)
   {
      throw std::invalid_argument("solve takes exactly one tau and one level (use --tau and --levels)");
   }
   return run_level(config, config.taus.front(), config.levels.front());
}

StudyReport run_convergence_study(const StudyConfig& config)
{
   return run_study(config, StudyReport::Kind::convergence);
}

StudyReport run_cond_study(const StudyConfig& config)
{
   return run_study(config, StudyReport::Kind::conditioning);
}

void compute_orders(StudyReport& report)
{
   report.summaries.clear();
   report.cond_fits.clear();
   for (double tau : report.config.taus)
   {
      std::vector<LevelResult*> block;
      for (LevelResult& row : report.rows)
      {
         if (row.tau == tau) { block.push_back(&row); }
      }
      const LevelResult* last_errors = nullptr;
      const LevelResult* last_cond = nullptr;
      const LevelResult* finer = nullptr;
      const LevelResult* coarser = nullptr;
      std::vector<double> log_h;
      std::vector<double> log_cond;
      for (LevelResult* row : block)
      {
         row->orders = {};
         if (row->errors && last_errors)
         {
            const LevelOrders o = orders_between(*last_errors, *row);
            row->orders.l2 = o.l2;
            row->orders.bdry = o.bdry;
            row->orders.residual = o.residual;
            row->orders.energy = o.energy;
         }
         if (row->spectrum && last_cond)
         {
            row->orders.cond = orders_between(*last_cond, *row).cond;
         }
         if (row->errors)
         {
            coarser = last_errors;
            finer = row;
            last_errors = row;
         }
         if (row->spectrum)
         {
            last_cond = row;
            if (row->n > 1)
            {
               log_h.push_back(std::log(printed(row->h_fill)));
               log_cond.push_back(std::log(printed(row->spectrum->cond)));
            }
         }
      }
      if (report.kind != StudyReport::Kind::conditioning)
      {
         OrderSummary summary;
         summary.tau = tau;
         if (coarser && finer)
         {
            summary.coarse_level = coarser->level;
            summary.fine_level = finer->level;
            summary.observed = finer->orders;
         }
         summary.theory = theory_orders(report.config, tau);
         report.summaries.push_back(summary);
      }
      CondFit fit;
      fit.tau = tau;
      fit.theory = -4.0 * tau;
      fit.points = log_h.size();
      fit.slope = fit_slope(log_h, log_cond);
      report.cond_fits.push_back(fit);
   }
}

std::string format_value(double x)
{
   char buf[32];
   std::snprintf(buf, sizeof buf, "%.5e", x);
   return buf;
}

std::string format_order(double p)
{
   char buf[32];
   std::snprintf(buf, sizeof buf, "%.4f", p);
   std::string s = buf;
   if (s == "-0.0000") { s = "0.0000"; }
   return s;
}

void write_csv(std::ostream& out, const StudyReport& report)
{
   out << kCsvHeader << '\n';
   for (const LevelResult& row : report.rows)
   {
      const auto& e = row.errors;
      out << row.tau << ',' << row.level << ',' << format_value(row.h_label) << ','
          << format_value(row.h_fill) << ',' << row.n << ','
          << opt_value(e ? std::optional(e->l2_rms) : std::nullopt) << ',' << opt_order(row.orders.l2) << ','
          << opt_value(e ? std::optional(e->bdry_l2) : std::nullopt) << ',' << opt_order(row.orders.bdry) << ','
          << opt_value(e ? std::optional(e->residual_l2) : std::nullopt) << ','
          << opt_order(row.orders.residual) << ','
          << opt_value(e ? std::optional(e->energy) : std::nullopt) << ',' << opt_order(row.orders.energy)
          << ',' << opt_value(row.spectrum ? std::optional(row.spectrum->cond) : std::nullopt) << ','
          << opt_order(row.orders.cond) << ',' << warning_text(row.warnings) << '\n';
   }
}

void write_table(std::ostream& out, const StudyReport& report)
{
   const bool errors = report.kind != StudyReport::Kind::conditioning;
   auto cell = [&](const std::string& s, int width) { out << std::setw(width) << (s.empty() ? "-" : s); };
   for (double tau : report.config.taus)
   {
      out << "tau = " << tau << "  (epsilon = " << report.config.epsilon << ", kappa = " << report.config.kappa
          << ")\n";
      out << std::setw(5) << "k" << std::setw(13) << "h" << std::setw(13) << "h_fill" << std::setw(7) << "N";
      if (errors)
      {
         out << std::setw(13) << "L2" << std::setw(9) << "order" << std::setw(13) << "bdry" << std::setw(9)
             << "order" << std::setw(13) << "residual" << std::setw(9) << "order" << std::setw(13) << "energy"
             << std::setw(9) << "order";
      }
      out << std::setw(13) << "cond" << std::setw(10) << "order" << "  warn\n";
      for (const LevelResult& row : report.rows)
      {
         if (row.tau != tau) { continue; }
         const auto& e = row.errors;
         out << std::setw(5) << row.level;
         cell(format_value(row.h_label), 13);
         cell(format_value(row.h_fill), 13);
         out << std::setw(7) << row.n;
         if (errors)
         {
            cell(opt_value(e ? std::optional(e->l2_rms) : std::nullopt), 13);
            cell(opt_order(row.orders.l2), 9);
            cell(opt_value(e ? std::optional(e->bdry_l2) : std::nullopt), 13);
            cell(opt_order(row.orders.bdry), 9);
            cell(opt_value(e ? std::optional(e->residual_l2) : std::nullopt), 13);
            cell(opt_order(row.orders.residual), 9);
            cell(opt_value(e ? std::optional(e->energy) : std::nullopt), 13);
            cell(opt_order(row.orders.energy), 9);
         }
         cell(opt_value(row.spectrum ? std::optional(row.spectrum->cond) : std::nullopt), 13);
         cell(opt_order(row.orders.cond), 10);
         out << "  " << warning_text(row.warnings) << '\n';
      }
      for (const OrderSummary& s : report.summaries)
      {
         if (s.tau != tau) { continue; }
         if (s.theory)
         {
            out << std::setw(5) << "" << std::setw(33) << std::left << "theory" << std::right;
            cell("", 13);
            cell(opt_order(s.theory->l2), 9);
            cell("", 13);
            cell(opt_order(s.theory->bdry), 9);
            cell("", 13);
            cell(opt_order(s.theory->residual), 9);
            cell("", 13);
            cell(opt_order(s.theory->energy), 9);
            out << '\n';
         }
         if (s.fine_level)
         {
            out << "observed orders between k = " << *s.coarse_level << " and k = " << *s.fine_level
                << ": L2 " << (s.observed.l2 ? format_order(*s.observed.l2) : "-") << ", bdry "
                << (s.observed.bdry ? format_order(*s.observed.bdry) : "-") << ", residual "
                << (s.observed.residual ? format_order(*s.observed.residual) : "-") << ", energy "
                << (s.observed.energy ? format_order(*s.observed.energy) : "-") << '\n';
         }
      }
      for (const CondFit& f : report.cond_fits)
      {
         if (f.tau != tau || !f.slope) { continue; }
         out << "log cond vs log h_fill slope over " << f.points << " levels: " << format_order(*f.slope)
             << " (theory " << format_order(f.theory) << ")\n";
      }
      out << '\n';
   }
}

void write_meta(std::ostream& out, const StudyReport& report)
{
   const char* kind = report.kind == StudyReport::Kind::conditioning ? "cond"
                      : report.kind == StudyReport::Kind::solve   ? "solve"
                                                                  : "study";
   out << "# lsqrbf " << kind << "\n";
   out << "# eigen " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION << '\n';
#ifdef __VERSION__
   out << "# compiler " << __VERSION__ << '\n';
#endif
   write_config(out, report.config);
   out << "\n# per level\n";
   for (const LevelResult& row : report.rows)
   {
      out << "tau " << row.tau << " level " << row.level << ": N " << row.n << ", q_sep "
          << format_value(row.q_sep) << ", quadrature " << row.quadrature.n_r << 'x' << row.quadrature.n_theta
          << " + " << row.quadrature.n_b << ", entry change on doubling "
          << format_value(row.quadrature_check.max_relative_change);
      if (row.spectrum)
      {
         out << ", cond method "
             << (row.spectrum->method == SpectrumEstimate::Method::dense ? "jacobi" : "power/inverse")
             << ", lambda_min " << format_value(row.spectrum->lambda_min) << ", lambda_max "
             << format_value(row.spectrum->lambda_max);
      }
      if (row.errors)
      {
         out << ", relative residual " << format_value(row.relative_residual) << ", boundary quadrature error "
             << format_value(row.errors->bdry_l2_quadrature);
      }
      out << ", wall " << std::fixed << std::setprecision(2) << row.wall_seconds << " s" << std::defaultfloat
          << std::setprecision(6);
      if (!row.failure.empty()) { out << ", failed: " << row.failure; }
      out << '\n';
   }
   out << "total wall " << std::fixed << std::setprecision(2) << report.wall_seconds << " s\n"
       << std::defaultfloat;
}

void write_report(const StudyReport& report)
{
   const std::filesystem::path& dir = report.config.out_dir;
   std::filesystem::create_directories(dir);
   auto open = [&](const char* name) {
      std::ofstream out(dir / name);
      if (!out) { throw std::runtime_error("cannot write " + (dir / name).string()); }
      return out;
   };
   std::ofstream csv = open("study.csv");
   write_csv(csv, report);
   std::ofstream txt = open("study.txt");
   write_table(txt, report);
   std::ofstream meta = open("meta.txt");
   write_meta(meta, report);
}

} // namespace lsqrbf
