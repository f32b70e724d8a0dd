// Acceptance gate: runs every top-level criterion and prints one PASS/FAIL
// line per criterion.  Exit code 0 iff all passed.
//
// Usage: toricqs_acceptance [--convention derived|printed]

#include <cstring>
#include <iostream>
#include <string>

#include "toricqs/selftest.hpp"

int main(int argc, char** argv) {
  toricqs::Convention convention = toricqs::Convention::Derived;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--convention" && i + 1 < argc) {
      std::string v = argv[++i];
      if (v == "printed")
        convention = toricqs::Convention::Printed;
      else if (v == "derived")
        convention = toricqs::Convention::Derived;
      else {
        std::cerr << "unknown convention: " << v << "\n";
        return 1;
      }
    } else {
      std::cerr << "unknown argument: " << arg << "\n";
      return 1;
    }
  }
  bool ok = toricqs::run_acceptance(std::cout, convention);
  return ok ? 0 : 1;
}
