#include <string>
#include <vector>

#include "liouville/model.hpp"

int main(int argc, char** argv) {
  return liouville::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
