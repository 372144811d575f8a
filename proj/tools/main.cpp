#include <unistd.h>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const auto style = knnreal::cli::default_style(isatty(STDERR_FILENO) != 0);
  return knnreal::cli::run(std::move(args), std::cout, std::cerr, style);
}
