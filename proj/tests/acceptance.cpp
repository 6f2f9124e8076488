#include "ahlab/acceptance.hpp"

#include <cstdio>

int main() {
  int failed = 0;
  for (int id = 1; id <= ahlab::kAcceptanceCriteria; ++id) {
    const ahlab::CriterionResult r = ahlab::run_criterion(id);
    std::printf("%s\n", ahlab::format_line(r).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  std::printf("%d/%d criteria passed\n", ahlab::kAcceptanceCriteria - failed, ahlab::kAcceptanceCriteria);
  return failed == 0 ? 0 : 1;
}
