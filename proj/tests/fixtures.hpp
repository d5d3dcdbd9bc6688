// Small named structures shared by the tests.
#ifndef GISO_TESTS_FIXTURES_HPP
#define GISO_TESTS_FIXTURES_HPP

#include <utility>
#include <vector>

#include "giso/relstruct.hpp"

namespace fixture {

using Edges = std::vector<std::pair<int, int>>;

inline Edges cycle(int n) {
  Edges e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return e;
}

inline Edges path(int n) {
  Edges e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return e;
}

inline Edges complete(int n) {
  Edges e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return e;
}

// 2-subsets of {0..4}, adjacent when disjoint.
inline Edges petersen() {
  std::vector<std::pair<int, int>> pts;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) pts.emplace_back(a, b);
  Edges e;
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) {
      auto [a, b] = pts[i];
      auto [c, d] = pts[j];
      if (a != c && a != d && b != c && b != d) e.emplace_back(i, j);
    }
  return e;
}

inline giso::Configuration graph(int n, const Edges& e) {
  return giso::graph_configuration(n, e);
}

// Points 0..v-1 then blocks v..v+b-1. Colors: vertex, white, belongs, not.
// With `split`, the colors are further told apart by side.
inline giso::Configuration design(int v, const std::vector<std::vector<int>>& blocks,
                                  bool split) {
  int b = static_cast<int>(blocks.size()), n = v + b;
  std::vector<int> col(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      bool xv = x < v, yv = y < v;
      int c;
      if (x == y) c = split && !xv ? 1 : 0;
      else if (xv == yv) c = split && !xv ? 3 : 2;
      else {
        int p = xv ? x : y, blk = (xv ? y : x) - v;
        bool in = false;
        for (int q : blocks[blk]) in = in || q == p;
        c = in ? 4 : 6;
        if (split && !xv) ++c;
      }
      col[static_cast<std::size_t>(x) * n + y] = c;
    }
  return giso::Configuration::from_colors(n, 2, col);
}

inline std::vector<std::vector<int>> fano() {
  return {{0, 1, 3}, {1, 2, 4}, {2, 3, 5}, {3, 4, 6}, {4, 5, 0}, {5, 6, 1}, {6, 0, 2}};
}

}  // namespace fixture

#endif
