#include "lsqrbf/study.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

using namespace lsqrbf;

namespace {

StudyConfig small_config()
{
   StudyConfig c;
   c.taus = {5.0};
   c.base_spacing = 0.5;
   c.levels = {1, 2};
   c.out_dir = std::filesystem::temp_directory_path() / "lsqrbf_test_study";
   return c;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
   std::vector<std::vector<std::string>> rows;
   std::istringstream in(text);
   std::string line;
   while (std::getline(in, line))
   {
      std::vector<std::string> fields;
      std::string field;
      std::istringstream cells(line);
      while (std::getline(cells, field, ',')) { fields.push_back(field); }
      if (!line.empty() && line.back() == ',') { fields.emplace_back(); }
      rows.push_back(fields);
   }
   return rows;
}

std::string csv_of(const StudyReport& report)
{
   std::ostringstream out;
   write_csv(out, report);
   return out.str();
}

} // namespace

TEST_CASE("config validation")
{
   CHECK_NOTHROW(StudyConfig{}.validate());
   auto rejects = [](auto mutate) {
      StudyConfig c;
      mutate(c);
      CHECK_THROWS_AS(c.validate(), std::invalid_argument);
   };
   rejects([](StudyConfig& c) { c.taus = {2.0}; });
   rejects([](StudyConfig& c) { c.taus = {}; });
   rejects([](StudyConfig& c) { c.epsilon = 0.0; });
   rejects([](StudyConfig& c) { c.kappa = 1.5; });
   rejects([](StudyConfig& c) { c.base_spacing = -0.25; });
   rejects([](StudyConfig& c) { c.levels = {2, 2}; });
   rejects([](StudyConfig& c) { c.levels = {0, 1}; });
   rejects([](StudyConfig& c) { c.levels = {}; });
   rejects([](StudyConfig& c) {
      c.taus = {4.0};
      c.regularity = 3;
   });
   rejects([](StudyConfig& c) { c.quad_scale = 0.0; });

   StudyConfig low;
   low.taus = {2.0};
   try
   {
      low.validate();
   }
   catch (const std::invalid_argument& e)
   {
      CHECK(std::string(e.what()).find("second derivatives") != std::string::npos);
   }
}

TEST_CASE("csv header and number formats")
{
   CHECK(std::string(kCsvHeader) == "tau,level,h_label,h_fill,N,l2_rms,l2_order,bdry_l2,bdry_order,residual_l2,"
                                    "residual_order,energy,energy_order,cond,cond_order,warn");
   CHECK(format_value(0.0123456789) == "1.23457e-02");
   CHECK(format_value(2.5e13) == "2.50000e+13");
   CHECK(format_order(5.960712) == "5.9607");
   CHECK(format_order(-10.63964) == "-10.6396");
   CHECK(format_order(-0.00001) == "0.0000");
   CHECK(warning_text(Warning::none).empty());
   CHECK(warning_text(Warning::ill_conditioned | Warning::solve_failed) == "ill_conditioned;solve_failed");
}

TEST_CASE("single solve")
{
   StudyConfig c = small_config();
   c.base_spacing = 0.25;
   c.levels = {1};
   const SolveOutcome out = run_solve(c);
   REQUIRE(out.row.errors);
   REQUIRE(out.solution);
   CHECK(std::isfinite(out.row.errors->l2_rms));
   CHECK(std::isfinite(out.row.errors->bdry_l2));
   CHECK(std::isfinite(out.row.errors->residual_l2));
   CHECK(std::isfinite(out.row.errors->energy));
   CHECK(out.row.relative_residual <= 1e-10);

   c.levels = {1, 2};
   CHECK_THROWS_AS(run_solve(c), std::invalid_argument);
}

TEST_CASE("trial-space truth through the pipeline")
{
   StudyConfig c = small_config();
   c.taus = {4.0};
   c.base_spacing = 0.3;
   c.levels = {1};
   c.solution = SolutionKind::kernel;
   c.kernel_center = 3;
   const SolveOutcome out = run_solve(c);
   REQUIRE(out.row.errors);
   CHECK(out.row.errors->l2_rms <= 1e-7);
   REQUIRE(out.solution);
   const Eigen::Index n = out.solution->coefficients.size();
   CHECK((out.solution->coefficients - Eigen::VectorXd::Unit(n, 3)).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("one-level study has no orders")
{
   StudyConfig c = small_config();
   c.levels = {1};
   const StudyReport r = run_convergence_study(c);
   REQUIRE(r.rows.size() == 1);
   const LevelOrders& o = r.rows[0].orders;
   CHECK_FALSE(o.l2);
   CHECK_FALSE(o.bdry);
   CHECK_FALSE(o.residual);
   CHECK_FALSE(o.energy);
   CHECK_FALSE(o.cond);
   const auto csv = parse_csv(csv_of(r));
   REQUIRE(csv.size() == 2);
   REQUIRE(csv[1].size() == 16);
   for (int col : {6, 8, 10, 12, 14}) { CHECK(csv[1][col].empty()); }
}

TEST_CASE("study is deterministic and its orders follow from its own columns")
{
   StudyConfig c = small_config();
   c.taus = {4.0, 5.0};
   c.levels = {1, 2, 3};
   const std::string first = csv_of(run_convergence_study(c));
   const std::string second = csv_of(run_convergence_study(c));
   CHECK(first == second);

   const auto csv = parse_csv(first);
   REQUIRE(csv.size() == 7);
   CHECK(csv[0].size() == 16);
   for (std::size_t r = 2; r < csv.size(); ++r)
   {
      if (csv[r][0] != csv[r - 1][0]) { continue; }
      const double h1 = std::stod(csv[r - 1][3]);
      const double h2 = std::stod(csv[r][3]);
      for (int col : {5, 7, 9, 11, 13})
      {
         const double e1 = std::stod(csv[r - 1][col]);
         const double e2 = std::stod(csv[r][col]);
         CHECK(csv[r][col + 1] == format_order(convergence_order(e1, e2, h1, h2)));
      }
   }
   // the first row of each tau block carries no order
   CHECK(csv[1][6].empty());
   CHECK(csv[4][6].empty());
}

TEST_CASE("condition numbers agree with a recomputation on dumped matrices")
{
   StudyConfig c = small_config();
   c.levels = {2};
   c.dump_system = true;
   std::filesystem::remove_all(c.out_dir);
   const StudyReport r = run_cond_study(c);
   REQUIRE(r.rows.size() == 1);
   REQUIRE(r.rows[0].spectrum);
   const Eigen::MatrixXd A = read_matrix((c.out_dir / "A_tau5_k2.mat").string());
   REQUIRE(static_cast<std::size_t>(A.rows()) == r.rows[0].n);
   const Eigen::VectorXd eig = jacobi_eigenvalues(A);
   const double ref = eig(eig.size() - 1) / eig(0);
   CHECK(r.rows[0].spectrum->cond == doctest::Approx(ref).epsilon(1e-6));

   c.dense_limit = 0;
   const StudyReport it = run_cond_study(c);
   REQUIRE(it.rows[0].spectrum);
   CHECK(it.rows[0].spectrum->method == SpectrumEstimate::Method::iterative);
   CHECK(it.rows[0].spectrum->cond == doctest::Approx(ref).epsilon(1e-6));
   std::filesystem::remove_all(c.out_dir);
}

TEST_CASE("a single node gives cond 1")
{
   StudyConfig c = small_config();
   c.base_spacing = 2.0;
   c.levels = {1};
   const StudyReport r = run_cond_study(c);
   REQUIRE(r.rows.size() == 1);
   CHECK(r.rows[0].n == 1);
   REQUIRE(r.rows[0].spectrum);
   CHECK(r.rows[0].spectrum->cond == 1.0);
}

TEST_CASE("report files")
{
   StudyConfig c = small_config();
   c.levels = {1};
   std::filesystem::remove_all(c.out_dir);
   write_report(run_convergence_study(c));
   for (const char* name : {"study.csv", "study.txt", "meta.txt"})
   {
      CHECK(std::filesystem::exists(c.out_dir / name));
   }
   std::filesystem::remove_all(c.out_dir);
}
