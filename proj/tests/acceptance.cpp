// Runs the acceptance criteria and prints one line per criterion. Optional
// arguments select criteria by number. Exit status 0 iff every selected
// criterion passes.
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "screenbie/acceptance.hpp"

int main(int argc, char** argv) {
  using namespace screenbie;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  std::vector<CriterionResult> rs;
  for (int id : ids) {
    rs.push_back(run_criterion(id));
    std::printf("%s\n", format_line(rs.back()).c_str());
    for (const auto& w : rs.back().warnings) std::printf("    warning: %s\n", w.c_str());
    std::fflush(stdout);
  }
  const Verdict v = overall(rs);
  std::printf("overall: %s\n", to_string(v));
  return v == Verdict::Pass ? 0 : 1;
}
