#include "irg/rng.hpp"

#include <algorithm>
#include <numeric>

namespace irg {

std::vector<int> RngStream::sample_subset(int n, int size) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < size; ++i) {
    int j = i + next_int(n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(size);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace irg
