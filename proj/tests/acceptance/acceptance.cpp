// Runs the acceptance criteria and prints one line per criterion.
// Usage: acceptance [fast|full] [criterion ids...]
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "lorentz/validate.hpp"

int main(int argc, char** argv) {
  lorentz::Level level = lorentz::Level::fast;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "fast" || a == "full") level = lorentz::parse_level(a);
    else ids.push_back(std::atoi(a.c_str()));
  }
  if (ids.empty()) ids = lorentz::criterion_ids();
  int failed = 0;
  for (int id : ids) {
    const lorentz::CriterionResult r = lorentz::run_criterion(id, level);
    std::printf("%s\n", lorentz::format_result(r).c_str());
    std::fflush(stdout);
    failed += r.pass ? 0 : 1;
  }
  std::printf("%zu criteria, %d failed\n", ids.size(), failed);
  return failed == 0 ? 0 : 1;
}
