#include "spinhall/cli.hpp"

int main(int argc, char** argv) {
  return spinhall::cli::run_command(std::vector<std::string>(argv + 1, argv + argc));
}
