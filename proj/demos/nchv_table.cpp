// All 64 predefined-outcome assignments and their classical Mermin sums.

#include "ghzn/ghz_logic.hpp"

#include <cstdio>
#include <map>

int main() {
  using namespace ghzn;
  std::printf("%5s  %4s %4s %4s %4s %4s %4s  %3s\n", "index", "sx", "sy", "px", "py", "ex", "ey", "M");
  std::map<int, int> histogram;
  for (int idx = 0; idx < kNchvAssignments; ++idx) {
    const auto a = NchvAssignment::from_index(idx);
    const int m = a.mermin_sum();
    ++histogram[m];
    std::printf("%5d  %+4d %+4d %+4d %+4d %+4d %+4d  %+3d\n", idx, a.m[0][0], a.m[0][1], a.m[1][0], a.m[1][1], a.m[2][0],
                a.m[2][1], m);
  }
  const auto r = enumerate_nchv();
  std::printf("\nM histogram:");
  for (const auto& [m, n] : histogram) std::printf("  %+d: %d", m, n);
  std::printf("\nassignments satisfying all four relations: %d/%d\n", r.satisfying, r.total);
  std::printf("max |M| = %d\n", r.max_abs_mermin);
}
