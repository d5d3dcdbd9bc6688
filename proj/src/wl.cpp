#include "giso/wl.hpp"

#include <algorithm>
#include <array>

#include "giso/errors.hpp"

namespace giso {

namespace {

using Key = std::array<int, 4>;

struct Strides {
  int m, k;
  std::vector<std::size_t> w;  // w[i] = m^(k-1-i)
  Strides(int m_, int k_) : m(m_), k(k_), w(k_) {
    std::size_t p = 1;
    for (int i = k - 1; i >= 0; --i) w[i] = p, p *= m;
  }
};

// Sorted (k-vector, count) pairs for tuple idx: over z, the colors of the
// k tuples obtained by substituting z at each position.
std::vector<std::pair<Key, int>> count_profile(const Configuration& c, const Strides& s,
                                               std::size_t idx, std::vector<Key>& scratch) {
  Tuple t = c.tuple_at(idx);
  scratch.clear();
  for (int z = 0; z < s.m; ++z) {
    Key key{-1, -1, -1, -1};
    for (int i = 0; i < s.k; ++i) {
      std::size_t j = idx - t[i] * s.w[i] + z * s.w[i];
      key[i] = c.color(j);
    }
    scratch.push_back(key);
  }
  std::sort(scratch.begin(), scratch.end());
  std::vector<std::pair<Key, int>> out;
  for (const auto& key : scratch) {
    if (!out.empty() && out.back().first == key) ++out.back().second;
    else out.emplace_back(key, 1);
  }
  return out;
}

std::vector<int> key_vec(const Key& key, int k) { return std::vector<int>(key.begin(), key.begin() + k); }

}  // namespace

int CoherenceReport::gamma(const std::vector<int>& kvec, int j) const {
  if (!table_present) throw InputError("intersection table not available");
  auto it = intersection_numbers.find({kvec, j});
  return it == intersection_numbers.end() ? 0 : it->second;
}

CoherenceReport check_coherent(const Configuration& c) {
  CoherenceReport rep;
  int k = c.arity();
  if (k < 1) {
    rep.is_coherent = true;
    return rep;
  }
  Strides s(c.gamma_size(), k);
  std::vector<std::vector<std::pair<Key, int>>> ref(c.num_colors());
  std::vector<std::size_t> ref_idx(c.num_colors(), 0);
  std::vector<char> seen(c.num_colors(), 0);
  std::vector<Key> scratch;
  for (std::size_t idx = 0; idx < c.tuple_count(); ++idx) {
    int col = c.color(idx);
    auto prof = count_profile(c, s, idx, scratch);
    if (!seen[col]) {
      seen[col] = 1;
      ref[col] = std::move(prof);
      ref_idx[col] = idx;
      continue;
    }
    if (prof == ref[col]) continue;
    // Least k-vector on which the two profiles disagree.
    const auto& a = ref[col];
    std::size_t i = 0, j = 0;
    CoherenceWitness w;
    w.first = c.tuple_at(ref_idx[col]);
    w.second = c.tuple_at(idx);
    while (true) {
      bool ha = i < a.size(), hb = j < prof.size();
      if (ha && hb && a[i].first == prof[j].first) {
        if (a[i].second != prof[j].second) {
          w.kvec = key_vec(a[i].first, k);
          w.count_first = a[i].second;
          w.count_second = prof[j].second;
          break;
        }
        ++i, ++j;
      } else if (ha && (!hb || a[i].first < prof[j].first)) {
        w.kvec = key_vec(a[i].first, k);
        w.count_first = a[i].second;
        break;
      } else {
        w.kvec = key_vec(prof[j].first, k);
        w.count_second = prof[j].second;
        break;
      }
    }
    rep.witness = w;
    return rep;
  }
  rep.is_coherent = true;
  if (c.num_colors() <= 64) {
    rep.table_present = true;
    for (int col = 0; col < c.num_colors(); ++col)
      for (const auto& [key, cnt] : ref[col]) rep.intersection_numbers[{key_vec(key, k), col}] = cnt;
  }
  return rep;
}

int intersection_number(const Configuration& c, const std::vector<int>& kvec, int j) {
  int k = c.arity();
  if (static_cast<int>(kvec.size()) != k) throw InputError("k-vector of wrong length");
  for (std::size_t idx = 0; idx < c.tuple_count(); ++idx) {
    if (c.color(idx) != j) continue;
    Strides s(c.gamma_size(), k);
    Tuple t = c.tuple_at(idx);
    int cnt = 0;
    for (int z = 0; z < s.m; ++z) {
      bool ok = true;
      for (int i = 0; i < k && ok; ++i)
        ok = c.color(idx - t[i] * s.w[i] + z * s.w[i]) == kvec[i];
      cnt += ok;
    }
    return cnt;
  }
  throw InputError("color " + std::to_string(j) + " is empty");
}

WLResult wl_rounds(const Configuration& input) {
  WLResult res;
  res.config = input;
  int k = input.arity();
  if (k < 1) {
    res.rounds = 1;
    res.history.push_back(input.num_colors());
    return res;
  }
  Strides s(input.gamma_size(), k);
  std::vector<Key> scratch;
  while (true) {
    const Configuration& c = res.config;
    std::vector<Configuration::Description> d(c.tuple_count());
    for (std::size_t idx = 0; idx < c.tuple_count(); ++idx) {
      auto prof = count_profile(c, s, idx, scratch);
      auto& desc = d[idx];
      desc.reserve(1 + prof.size() * (k + 1));
      desc.push_back(c.color(idx));
      for (const auto& [key, cnt] : prof) {
        for (int i = 0; i < k; ++i) desc.push_back(key[i]);
        desc.push_back(cnt);
      }
    }
    Configuration next =
        Configuration::from_descriptions(c.gamma_size(), k, d, c.signature());
    ++res.rounds;
    res.history.push_back(next.num_colors());
    // The old color leads each description, so equal class counts mean the
    // partition is unchanged.
    bool stable = next.num_colors() == c.num_colors();
    if (stable) break;
    res.config = std::move(next);
  }
  return res;
}

Configuration wl(const Configuration& c) { return wl_rounds(c).config; }

Configuration canonical_refinement(const RelStructure& s) {
  return wl(f2_config(f1_refine(s)));
}

}  // namespace giso
