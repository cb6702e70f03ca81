// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails. Usage: acceptance [quick|full]

#include <cstring>
#include <iostream>

#include "qabacus/verify.hpp"

int main(int argc, char** argv) {
  qabacus::VerifyOptions o;
  if (argc > 1 && std::strcmp(argv[1], "full") == 0) o.level = qabacus::VerifyLevel::full;
  int failed = 0;
  for (const auto& r : qabacus::run_verification(o)) {
    std::cout << qabacus::format_result(r) << '\n';
    failed += r.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "acceptance: all 9 criteria PASS" : "acceptance: FAILED") << '\n';
  return failed == 0 ? 0 : 1;
}
