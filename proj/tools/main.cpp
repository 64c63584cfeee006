#include "oran_aml/app/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return oran_aml::app::run_command(args).exit_status;
}
