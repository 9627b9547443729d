// Command-line driver: solve, study, cond, selftest.
#include "lsqrbf/selftest.hpp"
#include "lsqrbf/study.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

using namespace lsqrbf;

namespace {

void add_config_options(CLI::App& app, StudyConfig& config)
{
   app.set_config("--config", "", "flat key = value file; command-line flags override it");

   app.add_option("--out,--out_dir", config.out_dir, "output directory");
   app.add_option("--tau", config.taus, "smoothness list, e.g. 3,4,5")->delimiter(',');
   app.add_option("--epsilon", config.epsilon, "kernel shape parameter");
   app.add_option("--kappa", config.kappa, "exponent of the exact solution |x|^kappa");
   app.add_option("--base-spacing,--base_spacing", config.base_spacing, "lattice spacing of level 1");
   app.add_option("--levels", config.levels, "refinement divisors k (spacing = base / k)")->delimiter(',');
   app.add_option("--weight-exp,--weight_exp", config.weight_exponent, "boundary weight exponent");
   app.add_flag("--dump-system,--dump_system", config.dump_system, "write A and b of every level");
   app.add_option("--quad-scale,--quad_scale", config.quad_scale, "multiplier on the default quadrature");
   app.add_option("--quad-tol,--quad_tol", config.quad_tolerance, "accepted relative entry change on doubling");
   app.add_option("--quad-max-doublings,--quad_max_doublings", config.quad_max_doublings);
   app.add_option("--quad-max-points,--quad_max_points", config.quad_max_points);
   app.add_option("--regularity", config.regularity, "regularity index q (requires tau >= q + 2)");
   app.add_option("--seed", config.seed);
   app.add_option("--solution", config.solution, "exact solution: power or kernel")
      ->transform(CLI::CheckedTransformer(
         std::map<std::string, SolutionKind>{{"power", SolutionKind::radial_power}, {"kernel", SolutionKind::kernel}}));
   app.add_option("--kernel-center,--kernel_center", config.kernel_center, "node index for solution = kernel");
   app.add_option("--cond", config.with_cond, "estimate cond_2(A) in studies");
   app.add_option("--dense-limit,--dense_limit", config.dense_limit, "largest size for the Jacobi eigensolver");
}

void print_row(const LevelResult& row)
{
   std::cout << "tau " << row.tau << ", level " << row.level << ", N " << row.n
             << ", h_fill " << format_value(row.h_fill) << '\n';
   if (row.errors)
   {
      std::cout << "  l2_rms      " << format_value(row.errors->l2_rms) << '\n'
                << "  bdry_l2     " << format_value(row.errors->bdry_l2) << '\n'
                << "  residual_l2 " << format_value(row.errors->residual_l2) << '\n'
                << "  energy      " << format_value(row.errors->energy) << '\n';
   }
   if (row.spectrum) { std::cout << "  cond        " << format_value(row.spectrum->cond) << '\n'; }
   if (row.warnings != Warning::none) { std::cout << "  warnings    " << warning_text(row.warnings) << '\n'; }
   if (!row.failure.empty()) { std::cout << "  failure     " << row.failure << '\n'; }
}

} // namespace

int main(int argc, char** argv)
{
   CLI::App app{"Weighted least-squares kernel solver for elliptic Dirichlet problems on the unit disk"};
   app.require_subcommand(1);
   StudyConfig config;
   add_config_options(app, config);

   CLI::App* solve = app.add_subcommand("solve", "one solve at a single tau and level");
   CLI::App* study = app.add_subcommand("study", "errors and orders over tau x levels");
   CLI::App* cond = app.add_subcommand("cond", "condition numbers over tau x levels");
   CLI::App* selftest = app.add_subcommand("selftest", "check the numerics against reference values");
   for (CLI::App* sub : {solve, study, cond, selftest}) { sub->fallthrough(); }

   CLI11_PARSE(app, argc, argv);

   try
   {
      if (selftest->parsed()) { return run_selftest(std::cout) == 0 ? 0 : 1; }
      if (solve->parsed())
      {
         const SolveOutcome outcome = run_solve(config);
         StudyReport report;
         report.kind = StudyReport::Kind::solve;
         report.config = config;
         report.rows.push_back(outcome.row);
         report.wall_seconds = outcome.row.wall_seconds;
         compute_orders(report);
         write_report(report);
         print_row(outcome.row);
         return outcome.solution ? 0 : 2;
      }
      const StudyReport report = study->parsed() ? run_convergence_study(config) : run_cond_study(config);
      write_report(report);
      write_table(std::cout, report);
      std::cout << "wrote " << (config.out_dir / "study.csv").string() << '\n';
   }
   catch (const std::exception& e)
   {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
   }
   return 0;
}
