// Command-line driver for the thin plate spline power-function experiments.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "tpsmix/tpsmix.hpp"

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  std::cerr << "wrote " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Univariate thin plate spline interpolation: power functions, Peano kernels, decay rates"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string n_list_text;
  std::string mu_list_text;
  std::string out_dir;
  int threads = 0;
  int eval_density = 0;
  bool deterministic = false;
  bool quiet = false;

  app.add_option("--config", config_path, "key=value config file (flags override it)");
  app.add_option("--n-list", n_list_text, "comma-separated knot-interval counts, e.g. 128,256,512");
  app.add_option("--mu-list", mu_list_text, "comma-separated exponents in (0,4), e.g. 1/3,3,10/3");
  app.add_option("--out", out_dir, "output directory for CSV files");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--eval-density", eval_density, "points per knot interval for profiles and lebesgue")
      ->check(CLI::PositiveNumber);
  app.add_flag("--deterministic", deterministic, "serial evaluation, fixed summation order");
  app.add_flag("-q,--quiet", quiet, "no progress messages");

  auto* tables = app.add_subcommand("tables", "max of the mixed power function over midpoints (tables 1-4)");
  auto* peano = app.add_subcommand("peano-table", "L1 norm of the Peano kernel at h/2 and (1-h)/2");
  auto* profile = app.add_subcommand("profile", "pointwise profile of one quantity for a single n");
  std::string kind_text;
  int profile_n = 0;
  profile->add_option("--kind", kind_text, "mixed3, standard or peano_l1")->required();
  profile->add_option("--n", profile_n, "knot-interval count")->required()->check(CLI::PositiveNumber);
  auto* demo = app.add_subcommand("interp-demo", "uniform interpolation error for a builtin target");
  std::string target_name;
  demo->add_option("--target", target_name, "exp, sin2pi, runge, cubic or linear")->required();
  auto* lebesgue = app.add_subcommand("lebesgue", "max over x of the sum of squared Lagrange values");

  CLI11_PARSE(app, argc, argv);

  tpsmix::ExperimentConfig config;
  try {
    if (!config_path.empty()) tpsmix::apply_config_file(config, config_path);
    if (!n_list_text.empty()) config.n_list = tpsmix::parse_n_list(n_list_text);
    if (!mu_list_text.empty()) config.mu_list = tpsmix::parse_mu_list(mu_list_text);
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (threads > 0) config.threads = static_cast<unsigned>(threads);
    if (eval_density > 0) config.eval_density = eval_density;
    if (deterministic) config.deterministic = true;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const tpsmix::ProgressFn progress = [quiet](const std::string& msg) {
    if (!quiet) std::cerr << msg << "\n";
  };
  const std::filesystem::path dir{config.output_dir};

  try {
    std::filesystem::create_directories(dir);
    if (*tables) {
      const auto result = tpsmix::compute_tables(config, progress);
      for (int t = 1; t <= 4; ++t) {
        write_file(dir / ("table" + std::to_string(t) + ".csv"), tpsmix::tables_csv(result, t));
      }
      const std::string summary = tpsmix::tables_summary(result);
      write_file(dir / "summary.txt", summary);
      std::cout << summary;
      int status = 0;
      for (const auto& col : result.columns) {
        if (!col.ok()) {
          std::cerr << "error: mu = " << col.mu.text << ": " << col.error << "\n";
          status = 1;
        }
      }
      return status;
    }
    if (*peano) {
      const auto table = tpsmix::compute_peano_table(config, progress);
      const std::string csv = tpsmix::peano_table_csv(table);
      write_file(dir / "table5.csv", csv);
      std::cout << csv;
      return 0;
    }
    if (*profile) {
      const auto kind = tpsmix::parse_profile_kind(kind_text);
      const auto points = tpsmix::compute_profile(config, kind, profile_n);
      write_file(dir / ("profile_" + kind_text + "_n" + std::to_string(profile_n) + ".csv"),
                 tpsmix::profile_csv(points));
      return 0;
    }
    if (*demo) {
      const auto result = tpsmix::compute_interp_demo(config, target_name, progress);
      const std::string csv = tpsmix::interp_demo_csv(result);
      write_file(dir / ("interp_" + target_name + ".csv"), csv);
      std::cout << csv;
      return 0;
    }
    if (*lebesgue) {
      const auto rows = tpsmix::compute_lebesgue(config, progress);
      const std::string csv = tpsmix::lebesgue_csv(rows);
      write_file(dir / "lebesgue.csv", csv);
      std::cout << csv;
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
