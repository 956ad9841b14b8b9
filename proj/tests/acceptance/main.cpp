#include <cstdlib>
#include <iostream>
#include <string>

#include "suite.hpp"

int main(int argc, char** argv) {
  dlmorse::acceptance::Options opt;
  for (int i = 1; i < argc; ++i) opt.only.push_back(std::stoi(argv[i]));
  const auto results = dlmorse::acceptance::run(opt, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << results.size() - failed << "/" << results.size() << "\n";
  return failed ? EXIT_FAILURE : EXIT_SUCCESS;
}
