// Runs every acceptance criterion at its pinned tolerance.
#include <cstdio>

#include "riggedframes/acceptance.hpp"

int main() {
  const auto results = rigged::run_acceptance();
  int failed = 0;
  for (const auto& r : results) {
    std::printf("[%s] %d %s (%.2fs)\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
    if (!r.passed) {
      std::printf("       %s\n", r.detail.c_str());
      ++failed;
    }
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
