// acceptance_main.cpp - runs every verification criterion and prints one
// pass/fail line per entry; nonzero exit on any failure.

#include <cstdio>

#include "cglab/acceptance.hpp"

int main() {
  auto results = cglab::run_acceptance();
  std::fputs(cglab::format_results(results).c_str(), stdout);
  return cglab::all_passed(results) ? 0 : 1;
}
