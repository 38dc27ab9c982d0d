// Standalone acceptance runner: one pass/fail line per criterion, nonzero
// exit when any criterion fails. Also reachable as `qcflow --suite`.

#include <cstdlib>
#include <cstring>
#include <iostream>

#include "qcflow/acceptance/acceptance.hpp"

int main(int argc, char** argv) {
  qcflow::acceptance::Options opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--filter") == 0 && i + 1 < argc) opt.filter = argv[++i];
    if (std::strcmp(argv[i], "--tol-scale") == 0 && i + 1 < argc)
      opt.tol_scale = std::atof(argv[++i]);
  }
  const int failures = qcflow::acceptance::run_and_report(opt, std::cout);
  return failures == 0 ? 0 : 1;
}
