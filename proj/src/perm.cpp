#include "giso/perm.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "giso/errors.hpp"

namespace giso {

Permutation::Permutation(int degree) : images_(degree) {
  for (int i = 0; i < degree; ++i) images_[i] = i;
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<char> seen(images_.size(), 0);
  for (int v : images_) {
    if (v < 0 || v >= degree() || seen[v])
      throw InputError("permutation image list is not a bijection");
    seen[v] = 1;
  }
}

Permutation Permutation::from_cycles(
    int degree, const std::vector<std::vector<int>>& cycles) {
  std::vector<int> img(degree);
  for (int i = 0; i < degree; ++i) img[i] = i;
  std::vector<char> used(degree, 0);
  for (const auto& c : cycles) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      int a = c[i];
      if (a < 0 || a >= degree || used[a])
        throw InputError("bad cycle point " + std::to_string(a));
      used[a] = 1;
      img[a] = c[(i + 1) % c.size()];
    }
  }
  return Permutation(std::move(img));
}

bool Permutation::is_identity() const {
  for (int i = 0; i < degree(); ++i)
    if (images_[i] != i) return false;
  return true;
}

Permutation Permutation::operator*(const Permutation& rhs) const {
  if (rhs.degree() != degree()) throw InputError("degree mismatch in product");
  Permutation r;
  r.images_.resize(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i)
    r.images_[i] = rhs.images_[images_[i]];
  return r;
}

Permutation Permutation::inverse() const {
  Permutation r;
  r.images_.resize(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) r.images_[images_[i]] = i;
  return r;
}

Permutation Permutation::pow(long long e) const {
  Permutation base = e < 0 ? inverse() : *this;
  if (e < 0) e = -e;
  Permutation result(degree());
  while (e > 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

int Permutation::sign() const {
  std::vector<char> seen(images_.size(), 0);
  int parity = 0;
  for (int i = 0; i < degree(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = images_[j]) {
      seen[j] = 1;
      ++len;
    }
    parity ^= (len - 1) & 1;
  }
  return parity ? -1 : 1;
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(images_.size(), 0);
  for (int i = 0; i < degree(); ++i) {
    if (seen[i] || images_[i] == i) continue;
    std::vector<int> c;
    for (int j = i; !seen[j]; j = images_[j]) {
      seen[j] = 1;
      c.push_back(j);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string Permutation::str() const {
  auto cs = cycles();
  if (cs.empty()) return "()";
  std::ostringstream os;
  for (const auto& c : cs) {
    os << '(';
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i];
    os << ')';
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Permutation& p) {
  return os << p.str();
}

std::size_t PermutationHash::operator()(const Permutation& p) const {
  std::size_t h = 1469598103934665603ull;
  for (int v : p.images()) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

GenSet::GenSet(int n, std::vector<Permutation> g) : degree(n), gens(std::move(g)) {
  check();
}

void GenSet::check() const {
  for (const auto& g : gens)
    if (g.degree() != degree) throw InputError("generator degree mismatch");
}

Permutation restrict_to(const Permutation& g, const std::vector<int>& domain,
                        const std::vector<int>& index_of) {
  std::vector<int> img(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    int j = index_of[g[domain[i]]];
    if (j < 0) throw InputError("domain is not invariant under permutation");
    img[i] = j;
  }
  return Permutation(std::move(img));
}

Permutation parse_permutation(const std::string& text, int degree) {
  std::string s = text;
  if (auto pos = s.find('#'); pos != std::string::npos) s.erase(pos);
  if (s.find('(') != std::string::npos) {
    std::vector<std::vector<int>> cycles;
    std::vector<int> cur;
    bool open = false;
    std::string num;
    auto flush = [&] {
      if (!num.empty()) {
        cur.push_back(std::stoi(num));
        num.clear();
      }
    };
    for (char ch : s) {
      if (ch == '(') {
        if (open) throw InputError("nested '(' in cycle notation");
        open = true;
        cur.clear();
      } else if (ch == ')') {
        if (!open) throw InputError("unbalanced ')' in cycle notation");
        flush();
        open = false;
        if (!cur.empty()) cycles.push_back(cur);
      } else if (std::isdigit(static_cast<unsigned char>(ch))) {
        if (!open) throw InputError("point outside a cycle");
        num += ch;
      } else if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
        flush();
      } else {
        throw InputError(std::string("unexpected character '") + ch + "'");
      }
    }
    if (open) throw InputError("unterminated cycle");
    return Permutation::from_cycles(degree, cycles);
  }
  std::istringstream is(s);
  std::vector<int> img;
  std::string tok;
  while (is >> tok) {
    try {
      img.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw InputError("bad image token '" + tok + "'");
    }
  }
  if (static_cast<int>(img.size()) != degree)
    throw InputError("image list has " + std::to_string(img.size()) +
                     " entries, expected " + std::to_string(degree));
  return Permutation(std::move(img));
}

}  // namespace giso
