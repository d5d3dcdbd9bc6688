#include "giso/relstruct.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <boost/container_hash/hash.hpp>

#include "giso/errors.hpp"

namespace giso {

void RelStructure::check() const {
  if (gamma_size < 0 || arity < 0) throw InputError("negative size");
  for (const auto& rel : relations)
    for (const auto& t : rel) {
      if (static_cast<int>(t.size()) != arity) throw InputError("tuple of wrong arity");
      for (int v : t)
        if (v < 0 || v >= gamma_size) throw InputError("tuple entry out of range");
    }
}

std::size_t dense_size(int m, int k) {
  if (k < 0 || k > 4) throw ResourceError("arity " + std::to_string(k) + " exceeds 4");
  std::size_t n = 1;
  for (int i = 0; i < k; ++i) {
    n *= static_cast<std::size_t>(m);
    if (n > 10'000'000) throw ResourceError("more than 10^7 tuples");
  }
  return n;
}

std::size_t Configuration::index_of(const Tuple& t) const {
  std::size_t idx = 0;
  for (int v : t) idx = idx * m_ + v;
  return idx;
}

Tuple Configuration::tuple_at(std::size_t index) const {
  Tuple t(k_);
  for (int i = k_ - 1; i >= 0; --i) {
    t[i] = static_cast<int>(index % m_);
    index /= m_;
  }
  return t;
}

int Configuration::vertex_color(int v) const { return color(Tuple(k_, v)); }

std::vector<std::size_t> Configuration::class_sizes() const {
  std::vector<std::size_t> s(palette_.size(), 0);
  for (int c : color_) ++s[c];
  return s;
}

bool Configuration::same_partition(const Configuration& o) const {
  if (o.color_.size() != color_.size() || o.num_colors() != num_colors()) return false;
  std::vector<int> map(palette_.size(), -1);
  for (std::size_t i = 0; i < color_.size(); ++i) {
    int& m = map[color_[i]];
    if (m == -1) m = o.color_[i];
    else if (m != o.color_[i]) return false;
  }
  return true;
}

Configuration Configuration::from_descriptions(int m, int k,
                                               const std::vector<Description>& per_tuple,
                                               std::uint64_t parent_signature) {
  if (per_tuple.size() != dense_size(m, k)) throw InputError("description count mismatch");
  Configuration c;
  c.m_ = m;
  c.k_ = k;
  std::vector<std::size_t> order(per_tuple.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return per_tuple[a] < per_tuple[b];
  });
  c.color_.assign(per_tuple.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || per_tuple[order[i]] != per_tuple[order[i - 1]])
      c.palette_.push_back(per_tuple[order[i]]);
    c.color_[order[i]] = static_cast<int>(c.palette_.size()) - 1;
  }
  std::size_t h = parent_signature;
  boost::hash_combine(h, m);
  boost::hash_combine(h, k);
  for (const auto& d : c.palette_) boost::hash_combine(h, boost::hash_range(d.begin(), d.end()));
  c.signature_ = h;
  return c;
}

Configuration Configuration::from_colors(int m, int k, std::vector<int> colors) {
  std::vector<Description> d(colors.size());
  for (std::size_t i = 0; i < colors.size(); ++i) d[i] = {colors[i]};
  return from_descriptions(m, k, d);
}

std::vector<int> equality_pattern(const Tuple& t) {
  std::vector<int> rho(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    rho[i] = static_cast<int>(i);
    for (std::size_t j = 0; j < i; ++j)
      if (t[j] == t[i]) {
        rho[i] = static_cast<int>(j);
        break;
      }
  }
  return rho;
}

Configuration f1_refine(const RelStructure& s) {
  s.check();
  std::size_t n = dense_size(s.gamma_size, s.arity);
  std::vector<Configuration::Description> d(n, Configuration::Description(s.relations.size(), 0));
  for (std::size_t r = 0; r < s.relations.size(); ++r)
    for (const auto& t : s.relations[r]) {
      std::size_t idx = 0;
      for (int v : t) idx = idx * s.gamma_size + v;
      d[idx][r] = 1;
    }
  return Configuration::from_descriptions(s.gamma_size, s.arity, d);
}

namespace {

// All maps {0..k-1} -> {0..k-1}, in lexicographic order.
std::vector<std::vector<int>> all_maps(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> phi(k, 0);
  while (true) {
    out.push_back(phi);
    int i = k - 1;
    while (i >= 0 && phi[i] == k - 1) phi[i--] = 0;
    if (i < 0) break;
    ++phi[i];
  }
  return out;
}

Configuration recolor(const Configuration& c, int m, int k,
                      const std::vector<int>& old_color_per_tuple) {
  std::vector<Configuration::Description> d(old_color_per_tuple.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = {old_color_per_tuple[i]};
  return Configuration::from_descriptions(m, k, d, c.signature());
}

}  // namespace

Configuration f2_config(const Configuration& p) {
  int m = p.gamma_size(), k = p.arity();
  auto maps = all_maps(k);
  std::vector<Configuration::Description> d(p.tuple_count());
  Tuple img(k);
  for (std::size_t idx = 0; idx < d.size(); ++idx) {
    Tuple t = p.tuple_at(idx);
    auto rho = equality_pattern(t);
    auto& desc = d[idx];
    desc.assign(rho.begin(), rho.end());
    for (const auto& phi : maps) {
      for (int i = 0; i < k; ++i) img[i] = t[phi[i]];
      desc.push_back(p.color(img));
    }
  }
  return Configuration::from_descriptions(m, k, d, p.signature());
}

bool is_configuration(const Configuration& c) {
  int k = c.arity();
  auto maps = all_maps(k);
  std::vector<std::vector<int>> rho_of(c.num_colors());
  std::vector<std::vector<int>> eta(maps.size(), std::vector<int>(c.num_colors(), -1));
  Tuple img(k);
  for (std::size_t idx = 0; idx < c.tuple_count(); ++idx) {
    Tuple t = c.tuple_at(idx);
    int col = c.color(idx);
    auto rho = equality_pattern(t);
    if (rho_of[col].empty()) rho_of[col] = rho;
    else if (rho_of[col] != rho) return false;
    for (std::size_t f = 0; f < maps.size(); ++f) {
      for (int i = 0; i < k; ++i) img[i] = t[maps[f][i]];
      int target = c.color(img);
      int& e = eta[f][col];
      if (e == -1) e = target;
      else if (e != target) return false;
    }
  }
  return true;
}

Configuration skeleton(const Configuration& c, int l) {
  int k = c.arity();
  if (l < 0 || l > k) throw InputError("skeleton level out of range");
  if (l == k) return c;
  int m = c.gamma_size();
  std::size_t n = dense_size(m, l);
  std::vector<int> col(n, 0);
  if (l == 0) return recolor(c, m, 0, col);  // the single reserved color
  Tuple full(k);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t r = idx;
    for (int i = l - 1; i >= 0; --i) {
      full[i] = static_cast<int>(r % m);
      r /= m;
    }
    for (int i = l; i < k; ++i) full[i] = full[l - 1];
    col[idx] = c.color(full);
  }
  return recolor(c, m, l, col);
}

Configuration induced(const Configuration& c, const std::vector<int>& subset) {
  if (subset.empty()) throw InputError("induced substructure on empty set");
  for (int v : subset)
    if (v < 0 || v >= c.gamma_size()) throw InputError("subset point out of range");
  int s = static_cast<int>(subset.size()), k = c.arity();
  std::size_t n = dense_size(s, k);
  std::vector<int> col(n);
  Tuple t(k);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t r = idx;
    for (int i = k - 1; i >= 0; --i) {
      t[i] = subset[r % s];
      r /= s;
    }
    col[idx] = c.color(t);
  }
  return recolor(c, s, k, col);
}

Configuration restrict_by_tuple(const Configuration& c, const Tuple& prefix) {
  int k = c.arity(), l = static_cast<int>(prefix.size()), m = c.gamma_size();
  if (l >= k) throw InputError("prefix must be shorter than the arity");
  for (int v : prefix)
    if (v < 0 || v >= m) throw InputError("prefix point out of range");
  std::size_t n = dense_size(m, k - l);
  std::size_t base = c.index_of(prefix) * n;
  std::vector<int> col(n);
  for (std::size_t idx = 0; idx < n; ++idx) col[idx] = c.color(base + idx);
  return recolor(c, m, k - l, col);
}

bool are_twins(const Configuration& c, int a, int b) {
  if (a == b) return true;
  int k = c.arity(), m = c.gamma_size();
  // Only tuples containing a or b can change; enumerate those.
  Tuple t(k), u(k);
  std::function<bool(int)> rest = [&](int i) -> bool {
    if (i == k) {
      for (int j = 0; j < k; ++j) u[j] = t[j] == a ? b : t[j] == b ? a : t[j];
      return c.color(t) == c.color(u);
    }
    for (int v = 0; v < m; ++v) {
      t[i] = v;
      if (!rest(i + 1)) return false;
    }
    return true;
  };
  if (k == 0) return true;
  // Place the first occurrence of a or b at position p; earlier entries avoid
  // both, later entries are free.
  for (int p = 0; p < k; ++p) {
    std::function<bool(int)> prefix = [&](int i) -> bool {
      if (i == p) {
        for (int v : {a, b}) {
          t[p] = v;
          if (!rest(p + 1)) return false;
        }
        return true;
      }
      for (int v = 0; v < m; ++v) {
        if (v == a || v == b) continue;
        t[i] = v;
        if (!prefix(i + 1)) return false;
      }
      return true;
    };
    if (!prefix(0)) return false;
  }
  return true;
}

std::vector<std::vector<int>> twin_classes(const Configuration& c) {
  int m = c.gamma_size();
  std::vector<int> cls(m, -1);
  std::vector<std::vector<int>> out;
  for (int a = 0; a < m; ++a) {
    if (cls[a] != -1) continue;
    cls[a] = static_cast<int>(out.size());
    out.push_back({a});
    for (int b = a + 1; b < m; ++b)
      if (cls[b] == -1 && are_twins(c, a, b)) {
        cls[b] = cls[a];
        out.back().push_back(b);
      }
  }
  // Twinness is an equivalence relation, so comparing with the class
  // minimum suffices; spot-check transitivity inside each class.
  for (const auto& cl : out)
    if (cl.size() >= 3 && !are_twins(c, cl[1], cl.back()))
      throw InternalError("twin relation not transitive");
  return out;
}

Configuration relabel(const Configuration& c, const std::vector<int>& sigma) {
  int m = c.gamma_size(), k = c.arity();
  if (static_cast<int>(sigma.size()) != m) throw InputError("relabel: wrong degree");
  std::vector<Configuration::Description> d(c.tuple_count());
  Tuple t(k);
  for (std::size_t idx = 0; idx < c.tuple_count(); ++idx) {
    Tuple x = c.tuple_at(idx);
    for (int i = 0; i < k; ++i) t[i] = sigma[x[i]];
    d[c.index_of(t)] = c.palette()[c.color(idx)];
  }
  Configuration out = Configuration::from_descriptions(m, k, d);
  out.signature_ = c.signature_;
  return out;
}

Configuration graph_configuration(int n, const std::vector<std::pair<int, int>>& edges,
                                  bool directed) {
  std::size_t N = dense_size(n, 2);
  std::vector<int> col(N, 2);
  for (int v = 0; v < n; ++v) col[static_cast<std::size_t>(v) * n + v] = 0;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw InputError("edge endpoint out of range");
    if (u == v) continue;
    col[static_cast<std::size_t>(u) * n + v] = 1;
    if (!directed) col[static_cast<std::size_t>(v) * n + u] = 1;
  }
  return Configuration::from_colors(n, 2, col);
}

namespace {

std::string strip_comment(const std::string& line) {
  auto p = line.find('#');
  return p == std::string::npos ? line : line.substr(0, p);
}

}  // namespace

RelStructure read_structure(std::istream& in) {
  RelStructure s;
  std::string line;
  bool header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(strip_comment(line));
    std::vector<long long> nums;
    long long v;
    while (ls >> v) nums.push_back(v);
    if (!ls.eof()) throw InputError("structure line " + std::to_string(lineno) + ": bad token");
    if (nums.empty()) continue;
    if (!header) {
      if (nums.size() != 2 || nums[0] < 0 || nums[1] < 1)
        throw InputError("structure header must be 'gamma k'");
      s.gamma_size = static_cast<int>(nums[0]);
      s.arity = static_cast<int>(nums[1]);
      header = true;
      continue;
    }
    if (static_cast<int>(nums.size()) != s.arity + 1)
      throw InputError("structure line " + std::to_string(lineno) + ": expected color and " +
                       std::to_string(s.arity) + " points");
    if (nums[0] < 0 || nums[0] > 1'000'000) throw InputError("color label out of range");
    std::size_t col = static_cast<std::size_t>(nums[0]);
    if (s.relations.size() <= col) s.relations.resize(col + 1);
    s.relations[col].emplace_back(nums.begin() + 1, nums.end());
  }
  if (!header) throw InputError("empty structure file");
  s.check();
  return s;
}

RelStructure read_structure_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  return read_structure(f);
}

void write_configuration(std::ostream& out, const Configuration& c) {
  out << c.gamma_size() << ' ' << c.arity() << '\n';
  for (std::size_t idx = 0; idx < c.tuple_count(); ++idx) {
    out << c.color(idx);
    for (int v : c.tuple_at(idx)) out << ' ' << v;
    out << '\n';
  }
}

Configuration read_configuration(std::istream& in) {
  RelStructure s = read_structure(in);
  std::size_t total = dense_size(s.gamma_size, s.arity);
  std::vector<int> colors(total, -1);
  Configuration probe = Configuration::from_colors(s.gamma_size, s.arity, std::vector<int>(total, 0));
  for (std::size_t col = 0; col < s.relations.size(); ++col)
    for (const auto& t : s.relations[col]) {
      auto idx = probe.index_of(t);
      if (colors[idx] >= 0) throw InputError("configuration: tuple listed twice");
      colors[idx] = static_cast<int>(col);
    }
  for (int c : colors)
    if (c < 0) throw InputError("configuration: some tuple has no color");
  return Configuration::from_colors(s.gamma_size, s.arity, std::move(colors));
}

Configuration read_configuration_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_configuration(in);
}

RelStructure as_structure(const Configuration& c) {
  RelStructure s;
  s.gamma_size = c.gamma_size();
  s.arity = c.arity();
  s.relations.resize(c.num_colors());
  for (std::size_t idx = 0; idx < c.tuple_count(); ++idx)
    s.relations[c.color(idx)].push_back(c.tuple_at(idx));
  return s;
}

}  // namespace giso
