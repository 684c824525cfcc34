#include <iostream>

#include "hidwa/cli.hpp"

int main(int argc, char **argv)
{
  return hidwa::run_cli(argc, argv, std::cout, std::cerr);
}
