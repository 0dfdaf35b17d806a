#include <clocale>
#include <iostream>
#include <string>
#include <vector>

#include "maxplus/cli.hpp"

int main(int argc, char** argv) {
  std::setlocale(LC_NUMERIC, "C");
  std::vector<std::string> args(argv + 1, argv + argc);
  return maxplus::dispatch(std::move(args), std::cout, std::cerr);
}
