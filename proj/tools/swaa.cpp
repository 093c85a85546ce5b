#include <iostream>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "swaa/cli/config.hpp"
#include "swaa/cli/run.hpp"
#include "swaa/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Shallow-water solver by the method of an additional argument"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;
  bool serial = false;

  for (const char* name : {"check", "solve", "compare", "breaking"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--threads", threads, "OpenMP thread count")->check(CLI::PositiveNumber);
    sub->add_flag("--serial", serial, "use the serial column kernels");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : swaa::exit_code(swaa::ErrorKind::config);
  }

  const auto command = swaa::cli::parse_command(app.get_subcommands().front()->get_name());
  if (threads > 0) omp_set_num_threads(threads);

  try {
    swaa::cli::RunConfig config = swaa::cli::parse_config(config_path);
    if (serial) config.solver.exec = swaa::Exec::serial;
    if (!out_dir.empty()) config.output_dir = out_dir;
    return swaa::cli::run(config, *command, config.output_dir, std::cout);
  } catch (const swaa::Error& e) {
    std::cerr << "error (" << swaa::to_string(e.kind()) << "): " << e.what() << '\n';
    return swaa::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
