// Entry point for the affmet command-line tool.
#include <iostream>
#include <string>
#include <vector>

#include <affmet/cli.hpp>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return affmet::run_cli(args, std::cout, std::cerr);
}
