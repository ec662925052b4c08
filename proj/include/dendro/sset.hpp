#pragma once

// Finite simplicial sets truncated at a degree bound, cube complexes
// (Δ¹)^axes, horn checks and π0.
//
// A simplicial set is tabulated degreewise up to its dimension bound: every
// simplex (degenerate ones included) gets an id, and the face and degeneracy
// operators are stored as lookup tables. Censuses count the nondegenerate
// simplices.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "dendro/error.hpp"
#include "dendro/omega.hpp"

namespace dendro {

class SimplicialSet {
 public:
  SimplicialSet() = default;

  int dimension() const { return static_cast<int>(sizes_.size()) - 1; }
  std::size_t size(int n) const { return n <= dimension() ? sizes_[n] : 0; }

  // d_i : X_n -> X_{n-1}
  Id face(int n, int i, Id x) const { return faces_[n][i][x]; }
  // s_i : X_n -> X_{n+1}; requires n < dimension()
  Id degen(int n, int i, Id x) const { return degens_[n][i][x]; }

  const std::string& label(int n, Id x) const { return labels_[n][x]; }

  bool is_degenerate(int n, Id x) const { return n > 0 && degenerate_[n][x]; }

  // θ*(x) for a monotone θ: [m] -> [n] (given by its values).
  Id act(const std::vector<int>& theta, int n, Id x) const {
    std::vector<char> hit(n + 1, 0);
    for (int v : theta) hit[v] = 1;
    int k = n;
    for (int i = n; i >= 0; --i) {
      if (!hit[i]) x = face(k--, i, x);
    }
    for (std::size_t p = 0; p + 1 < theta.size(); ++p) {
      if (theta[p] == theta[p + 1]) x = degen(k++, static_cast<int>(p), x);
    }
    return x;
  }

  // Number of nondegenerate simplices in each degree 0..dimension().
  std::vector<std::size_t> census() const {
    std::vector<std::size_t> out(sizes_.size(), 0);
    for (int n = 0; n <= dimension(); ++n) {
      for (Id x = 0; x < sizes_[n]; ++x) out[n] += is_degenerate(n, x) ? 0 : 1;
    }
    return out;
  }

  // Builds the tables from a keyed description: `simplices(n)` lists keys of
  // all n-simplices; `face`/`degen` act on keys.
  static SimplicialSet tabulate(int dim, const std::function<std::vector<Key>(int)>& simplices,
                                const std::function<Key(const Key&, int, int)>& face,
                                const std::function<Key(const Key&, int, int)>& degen,
                                const std::function<std::string(const Key&, int)>& label) {
    SimplicialSet s;
    std::vector<std::vector<Key>> keys(dim + 1);
    std::vector<std::unordered_map<Key, Id, VectorHash>> index(dim + 1);
    s.sizes_.resize(dim + 1);
    s.labels_.resize(dim + 1);
    for (int n = 0; n <= dim; ++n) {
      keys[n] = simplices(n);
      s.sizes_[n] = keys[n].size();
      for (Id x = 0; x < keys[n].size(); ++x) {
        if (!index[n].emplace(keys[n][x], x).second) fail("internal", "duplicate simplex key");
        s.labels_[n].push_back(label(keys[n][x], n));
      }
    }
    auto lookup = [&](int n, const Key& k) -> Id {
      auto it = index[n].find(k);
      if (it == index[n].end()) fail("internal", "simplex not closed under operators");
      return it->second;
    };
    s.faces_.resize(dim + 1);
    s.degens_.resize(dim + 1);
    s.degenerate_.resize(dim + 1);
    for (int n = 0; n <= dim; ++n) {
      s.degenerate_[n].assign(keys[n].size(), 0);
      if (n > 0) {
        s.faces_[n].resize(n + 1);
        for (int i = 0; i <= n; ++i) {
          for (const auto& k : keys[n]) s.faces_[n][i].push_back(lookup(n - 1, face(k, n, i)));
        }
      }
      if (n < dim) {
        s.degens_[n].resize(n + 1);
        for (int i = 0; i <= n; ++i) {
          for (const auto& k : keys[n]) s.degens_[n][i].push_back(lookup(n + 1, degen(k, n, i)));
        }
      }
    }
    for (int n = 0; n < dim; ++n) {
      for (const auto& table : s.degens_[n]) {
        for (Id y : table) s.degenerate_[n + 1][y] = 1;
      }
    }
    return s;
  }

  // Truncates to a lower dimension bound.
  SimplicialSet truncate(int dim) const {
    if (dim > dimension()) fail("bound", "cannot extend a truncated simplicial set");
    SimplicialSet s = *this;
    s.sizes_.resize(dim + 1);
    s.labels_.resize(dim + 1);
    s.faces_.resize(dim + 1);
    s.degenerate_.resize(dim + 1);
    s.degens_.resize(dim + 1);
    s.degens_[dim].clear();
    return s;
  }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<std::vector<Id>>> faces_;
  std::vector<std::vector<std::vector<Id>>> degens_;
  std::vector<std::vector<char>> degenerate_;
};

using SSetPtr = std::shared_ptr<const SimplicialSet>;

struct SimplicialMap {
  SSetPtr source;
  SSetPtr target;
  std::vector<std::vector<Id>> maps;  // per degree

  Id operator()(int n, Id x) const { return maps[n][x]; }
};

// ---------------------------------------------------------------------------
// Simplices, horns and boundaries as subcomplexes of Δ^n.

namespace detail {

inline void monotone_sequences(int len, int top, std::vector<Key>& out, Key& cur) {
  if (static_cast<int>(cur.size()) == len) {
    out.push_back(cur);
    return;
  }
  int from = cur.empty() ? 0 : cur.back();
  for (int v = from; v <= top; ++v) {
    cur.push_back(v);
    monotone_sequences(len, top, out, cur);
    cur.pop_back();
  }
}

inline Key drop(const Key& k, int i) {
  Key out = k;
  out.erase(out.begin() + i);
  return out;
}

inline Key repeat(const Key& k, int i) {
  Key out = k;
  out.insert(out.begin() + i, k[i]);
  return out;
}

inline std::string sequence_label(const Key& k) {
  std::string s = "[";
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
  return s + "]";
}

// Subcomplex of Δ^top (truncated at dim) of simplices whose vertex set
// satisfies `keep`.
inline SimplicialSet simplex_subcomplex(int top, int dim,
                                        const std::function<bool(const std::set<int>&)>& keep) {
  return SimplicialSet::tabulate(
      dim,
      [&](int n) {
        std::vector<Key> all, out;
        Key cur;
        monotone_sequences(n + 1, top, all, cur);
        for (auto& k : all) {
          if (keep(std::set<int>(k.begin(), k.end()))) out.push_back(k);
        }
        return out;
      },
      [](const Key& k, int, int i) { return drop(k, i); },
      [](const Key& k, int, int i) { return repeat(k, i); },
      [](const Key& k, int) { return sequence_label(k); });
}

}  // namespace detail

inline constexpr int kSimplicialBound = 8;

inline void check_simplicial_bound(int n) {
  if (n < 0) fail("argument", "negative simplicial degree");
  if (n > kSimplicialBound) {
    fail("bound", "simplicial degree " + std::to_string(n) + " exceeds bound " +
                      std::to_string(kSimplicialBound));
  }
}

// Δ^n tabulated up to degree `dim` (default n).
inline SimplicialSet standard_simplex(int n, int dim = -1) {
  check_simplicial_bound(n);
  if (dim < 0) dim = n;
  return detail::simplex_subcomplex(n, dim, [](const std::set<int>&) { return true; });
}

inline SimplicialSet boundary(int n, int dim = -1) {
  check_simplicial_bound(n);
  if (dim < 0) dim = n;
  return detail::simplex_subcomplex(
      n, dim, [n](const std::set<int>& vs) { return static_cast<int>(vs.size()) < n + 1; });
}

// Λ^n_k: simplices missing some vertex other than k.
inline SimplicialSet horn(int n, int k, int dim = -1) {
  check_simplicial_bound(n);
  if (k < 0 || k > n) fail("argument", "horn index out of range");
  if (dim < 0) dim = n;
  return detail::simplex_subcomplex(n, dim, [n, k](const std::set<int>& vs) {
    for (int v = 0; v <= n; ++v) {
      if (v != k && !vs.count(v)) return true;
    }
    return false;
  });
}

inline SimplicialSet product(const SimplicialSet& x, const SimplicialSet& y) {
  const int dim = std::min(x.dimension(), y.dimension());
  return SimplicialSet::tabulate(
      dim,
      [&](int n) {
        std::vector<Key> out;
        for (Id a = 0; a < x.size(n); ++a) {
          for (Id b = 0; b < y.size(n); ++b) out.push_back({static_cast<int>(a), static_cast<int>(b)});
        }
        return out;
      },
      [&](const Key& k, int n, int i) {
        return Key{static_cast<int>(x.face(n, i, k[0])), static_cast<int>(y.face(n, i, k[1]))};
      },
      [&](const Key& k, int n, int i) {
        return Key{static_cast<int>(x.degen(n, i, k[0])), static_cast<int>(y.degen(n, i, k[1]))};
      },
      [&](const Key& k, int n) { return "(" + x.label(n, k[0]) + "," + y.label(n, k[1]) + ")"; });
}

// ---------------------------------------------------------------------------
// Cubes

// (Δ¹)^axes: n-simplices are weakly increasing chains of n+1 vertices of the
// poset {0,1}^axes; vertices are bitmasks over the sorted axis list.
class CubeComplex {
 public:
  explicit CubeComplex(std::set<std::string> axes, int dim = -1)
      : axes_(axes.begin(), axes.end()) {
    const int k = axis_count();
    if (k > 10) fail("bound", "cube with more than 10 axes");
    if (dim < 0) dim = k;
    const unsigned full = (1u << k) - 1;
    sset_ = std::make_shared<const SimplicialSet>(SimplicialSet::tabulate(
        dim,
        [full](int n) {
          std::vector<Key> out;
          Key cur;
          std::function<void()> rec = [&] {
            if (static_cast<int>(cur.size()) == n + 1) {
              out.push_back(cur);
              return;
            }
            for (unsigned v = 0; v <= full; ++v) {
              if (!cur.empty() && (static_cast<unsigned>(cur.back()) & ~v) != 0) continue;
              cur.push_back(static_cast<int>(v));
              rec();
              cur.pop_back();
            }
          };
          rec();
          return out;
        },
        [](const Key& key, int, int i) { return detail::drop(key, i); },
        [](const Key& key, int, int i) { return detail::repeat(key, i); },
        [this](const Key& key, int) {
          std::string s = "[";
          for (std::size_t i = 0; i < key.size(); ++i) s += (i ? "," : "") + vertex_label(key[i]);
          return s + "]";
        }));
  }

  const std::vector<std::string>& axes() const { return axes_; }
  int axis_count() const { return static_cast<int>(axes_.size()); }
  unsigned vertex_count() const { return 1u << axis_count(); }
  const SimplicialSet& sset() const { return *sset_; }
  const SSetPtr& sset_ptr() const { return sset_; }

  int axis(std::string_view name) const {
    auto it = std::lower_bound(axes_.begin(), axes_.end(), name);
    if (it == axes_.end() || *it != name) return -1;
    return static_cast<int>(it - axes_.begin());
  }

  std::string vertex_label(int v) const {
    std::string s;
    for (int i = 0; i < axis_count(); ++i) s += (v >> i) & 1 ? '1' : '0';
    return s.empty() ? "*" : s;
  }

 private:
  std::vector<std::string> axes_;
  SSetPtr sset_;
};

// A map of cubes given by a monotone rule on vertices (bitmask -> bitmask).
struct CubeMap {
  std::vector<std::string> source_axes;
  std::vector<std::string> target_axes;
  std::vector<unsigned> rule;  // indexed by source vertex

  friend bool operator==(const CubeMap&, const CubeMap&) = default;
};

inline bool is_monotone(const CubeMap& m) {
  const unsigned n = static_cast<unsigned>(m.rule.size());
  for (unsigned u = 0; u < n; ++u) {
    for (unsigned v = 0; v < n; ++v) {
      if ((u & ~v) == 0 && (m.rule[u] & ~m.rule[v]) != 0) return false;
    }
  }
  return true;
}

// g ∘ f on vertex rules.
inline CubeMap compose(const CubeMap& g, const CubeMap& f) {
  if (f.target_axes != g.source_axes) fail("argument", "cube map boundary mismatch");
  CubeMap out{f.source_axes, g.target_axes, {}};
  for (unsigned r : f.rule) out.rule.push_back(g.rule[r]);
  return out;
}

// The induced simplicial map on chains.
inline SimplicialMap cube_map(const CubeComplex& source, const CubeComplex& target,
                              const CubeMap& rule) {
  if (rule.source_axes != source.axes() || rule.target_axes != target.axes()) {
    fail("argument", "cube map axes do not match");
  }
  if (!is_monotone(rule)) fail("argument", "vertex rule is not monotone");
  const int dim = std::min(source.sset().dimension(), target.sset().dimension());
  SimplicialMap out{source.sset_ptr(), target.sset_ptr(), std::vector<std::vector<Id>>(dim + 1)};
  // Chains are determined by their vertices; rebuild the index of the target.
  for (int n = 0; n <= dim; ++n) {
    std::unordered_map<std::string, Id> target_index;
    for (Id y = 0; y < target.sset().size(n); ++y) target_index.emplace(target.sset().label(n, y), y);
    for (Id x = 0; x < source.sset().size(n); ++x) {
      // Recover the chain from the simplex: its vertices are the images of
      // the n+1 vertex inclusions.
      std::string label = "[";
      for (int i = 0; i <= n; ++i) {
        Id v = source.sset().act(std::vector<int>{i}, n, x);
        int mask = 0;
        const std::string& vl = source.sset().label(0, v);
        for (int a = 0; a < source.axis_count(); ++a) mask |= (vl[1 + a] == '1') << a;
        label += (i ? "," : "") + target.vertex_label(static_cast<int>(rule.rule[mask]));
      }
      label += "]";
      out.maps[n].push_back(target_index.at(label));
    }
  }
  return out;
}

// Vertex rule that copies shared axes and fixes the others to `fill`.
inline CubeMap padding_map(const std::vector<std::string>& source_axes,
                           const std::vector<std::string>& target_axes,
                           const std::map<std::string, std::string>& rename = {}, int fill = 0) {
  CubeMap m{source_axes, target_axes, {}};
  std::vector<int> src_of(target_axes.size(), -1);
  for (std::size_t a = 0; a < source_axes.size(); ++a) {
    auto it = rename.find(source_axes[a]);
    const std::string& name = it == rename.end() ? source_axes[a] : it->second;
    auto pos = std::find(target_axes.begin(), target_axes.end(), name);
    if (pos == target_axes.end()) fail("argument", "padding map drops axis " + name);
    src_of[pos - target_axes.begin()] = static_cast<int>(a);
  }
  for (unsigned v = 0; v < (1u << source_axes.size()); ++v) {
    unsigned out = 0;
    for (std::size_t b = 0; b < target_axes.size(); ++b) {
      int bit = src_of[b] < 0 ? fill : static_cast<int>((v >> src_of[b]) & 1);
      out |= static_cast<unsigned>(bit) << b;
    }
    m.rule.push_back(out);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Horn conditions and π0

struct HornInstance {
  int n = 0;
  int k = 0;
  std::vector<Id> faces;  // x_i for i != k, in order
};

namespace detail {

// Enumerates compatible tuples (x_i)_{i != k} of (n-1)-simplices of `x`:
// d_i x_j = d_{j-1} x_i for i < j.
inline void for_each_horn(const SimplicialSet& x, int n, int k,
                          const std::function<bool(const std::vector<Id>&)>& visit) {
  std::vector<int> idx;
  for (int i = 0; i <= n; ++i) {
    if (i != k) idx.push_back(i);
  }
  std::vector<Id> tuple(n + 1, 0);
  std::function<bool(std::size_t)> rec = [&](std::size_t p) -> bool {
    if (p == idx.size()) {
      std::vector<Id> faces;
      for (int i : idx) faces.push_back(tuple[i]);
      return visit(faces);
    }
    int j = idx[p];
    for (Id c = 0; c < x.size(n - 1); ++c) {
      bool ok = true;
      for (std::size_t q = 0; q < p && ok; ++q) {
        int i = idx[q];  // i < j
        if (n - 1 > 0) ok = x.face(n - 1, i, c) == x.face(n - 1, j - 1, tuple[i]);
      }
      if (!ok) continue;
      tuple[j] = c;
      if (!rec(p + 1)) return false;
    }
    return true;
  };
  rec(0);
}

}  // namespace detail

// Right lifting of p against Λ^n_k ⊂ Δ^n for all n <= degree and the (n,k)
// selected by `which`. Returns the first failing instance.
inline std::optional<HornInstance> horn_lifting(const SimplicialMap& p, int degree,
                                                const std::function<bool(int, int)>& which) {
  const SimplicialSet& x = *p.source;
  const SimplicialSet& s = *p.target;
  if (degree > x.dimension() || degree > s.dimension()) fail("bound", "degree exceeds tabulation");
  std::optional<HornInstance> failure;
  for (int n = 1; n <= degree && !failure; ++n) {
    for (int k = 0; k <= n && !failure; ++k) {
      if (!which(n, k)) continue;
      auto restrict_x = [&](Id a) {
        Key out{static_cast<int>(p(n, a))};
        for (int i = 0; i <= n; ++i) {
          if (i != k) out.push_back(static_cast<int>(x.face(n, i, a)));
        }
        return out;
      };
      std::unordered_map<Key, char, VectorHash> fillers;
      for (Id a = 0; a < x.size(n); ++a) fillers.emplace(restrict_x(a), 1);
      detail::for_each_horn(x, n, k, [&](const std::vector<Id>& faces) {
        for (Id b = 0; b < s.size(n); ++b) {
          bool matches = true;
          std::size_t q = 0;
          for (int i = 0; i <= n && matches; ++i) {
            if (i == k) continue;
            matches = s.face(n, i, b) == p(n - 1, faces[q++]);
          }
          if (!matches) continue;
          Key key{static_cast<int>(b)};
          for (Id f : faces) key.push_back(static_cast<int>(f));
          if (!fillers.count(key)) {
            failure = HornInstance{n, k, faces};
            return false;
          }
        }
        return true;
      });
    }
  }
  return failure;
}

inline SimplicialSet point(int dim = 0) { return standard_simplex(0, dim); }

inline SimplicialMap to_point(const SSetPtr& x) {
  auto pt = std::make_shared<const SimplicialSet>(point(x->dimension()));
  SimplicialMap m{x, pt, {}};
  for (int n = 0; n <= x->dimension(); ++n) m.maps.emplace_back(x->size(n), 0);
  return m;
}

// Kan condition up to `degree`: every horn Λ^n_k → X with n <= degree
// extends to Δ^n.
inline std::optional<HornInstance> kan_check(const SSetPtr& x, int degree) {
  return horn_lifting(to_point(x), degree, [](int, int) { return true; });
}

inline std::optional<HornInstance> inner_kan_check(const SSetPtr& x, int degree) {
  return horn_lifting(to_point(x), degree, [](int n, int k) { return 0 < k && k < n; });
}

// Equivalence classes of vertices under the relation generated by 1-simplices.
inline std::vector<std::vector<Id>> pi0(const SimplicialSet& x) {
  std::vector<Id> parent(x.size(0));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<Id(Id)> find = [&](Id a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  if (x.dimension() >= 1) {
    for (Id e = 0; e < x.size(1); ++e) {
      Id a = find(x.face(1, 0, e)), b = find(x.face(1, 1, e));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<Id, std::vector<Id>> classes;
  for (Id v = 0; v < x.size(0); ++v) classes[find(v)].push_back(v);
  std::vector<std::vector<Id>> out;
  for (auto& [root, members] : classes) out.push_back(std::move(members));
  return out;
}

// ---------------------------------------------------------------------------
// Maps of truncated simplicial sets and the hom-space Map(K, L)

// Calls `visit` on every map a -> b (values on all simplices, per degree).
// Values are chosen on nondegenerate simplices in increasing degree; a
// degenerate s_i z takes s_i of the value at z.
inline std::size_t for_each_simplicial_map(
    const SimplicialSet& a, const SimplicialSet& b,
    const std::function<bool(const std::vector<std::vector<Id>>&)>& visit) {
  const int dim = a.dimension();
  if (b.dimension() < dim) fail("bound", "target is tabulated below the source dimension");
  // Simplices of b grouped by their face tuple.
  std::vector<std::unordered_map<Key, std::vector<Id>, VectorHash>> by_faces(dim + 1);
  for (int n = 1; n <= dim; ++n) {
    for (Id y = 0; y < b.size(n); ++y) {
      Key k;
      for (int i = 0; i <= n; ++i) k.push_back(static_cast<int>(b.face(n, i, y)));
      by_faces[n][k].push_back(y);
    }
  }
  std::vector<Id> all_vertices(b.size(0));
  std::iota(all_vertices.begin(), all_vertices.end(), 0);

  std::vector<std::vector<Id>> f(dim + 1);
  for (int n = 0; n <= dim; ++n) f[n].assign(a.size(n), 0);
  std::size_t count = 0;
  bool stop = false;

  auto fill_degenerate = [&](int n) {
    for (Id x = 0; x < a.size(n); ++x) {
      if (!a.is_degenerate(n, x)) continue;
      for (int i = 0; i < n; ++i) {
        const Id z = a.face(n, i, x);
        if (a.degen(n - 1, i, z) == x) {
          f[n][x] = b.degen(n - 1, i, f[n - 1][z]);
          break;
        }
      }
    }
  };

  std::function<void(int, Id)> rec = [&](int n, Id x) {
    if (stop) return;
    while (n <= dim && x < a.size(n) && a.is_degenerate(n, x)) ++x;
    if (n <= dim && x == a.size(n)) {
      fill_degenerate(n);
      rec(n + 1, 0);
      return;
    }
    if (n > dim) {
      ++count;
      if (!visit(f)) stop = true;
      return;
    }
    const std::vector<Id>* candidates = &all_vertices;
    if (n > 0) {
      Key k;
      for (int i = 0; i <= n; ++i) k.push_back(static_cast<int>(f[n - 1][a.face(n, i, x)]));
      auto it = by_faces[n].find(k);
      if (it == by_faces[n].end()) return;
      candidates = &it->second;
    }
    for (Id y : *candidates) {
      f[n][x] = y;
      rec(n, x + 1);
      if (stop) return;
    }
  };
  rec(0, 0);
  return count;
}

inline std::vector<SimplicialMap> simplicial_maps(const SSetPtr& a, const SSetPtr& b,
                                                  std::size_t limit = 1000000) {
  std::vector<SimplicialMap> out;
  for_each_simplicial_map(*a, *b, [&](const std::vector<std::vector<Id>>& m) {
    out.push_back({a, b, m});
    if (out.size() >= limit) fail("bound", "more than " + std::to_string(limit) + " simplicial maps");
    return true;
  });
  return out;
}

// Map(K, L)_m = sSet(K × Δ^m, L) for m <= degree, with K × Δ^m truncated at
// K's dimension. An m-simplex is keyed by its values on all simplices of
// K × Δ^m; faces and degeneracies precompose with id × δ^i and id × σ^i.
inline SimplicialSet simplicial_mapping_space(const SSetPtr& k, const SSetPtr& l, int degree) {
  check_simplicial_bound(degree);
  const int dim = k->dimension();
  std::vector<SimplicialSet> prisms;
  // seq_index[m][j]: monotone sequence of length j+1 into [m] -> its id.
  std::vector<std::vector<std::map<Key, int>>> seq_index(degree + 1);
  for (int m = 0; m <= degree; ++m) {
    prisms.push_back(product(*k, standard_simplex(m, std::max(m, dim))));
    seq_index[m].resize(dim + 1);
    for (int j = 0; j <= dim; ++j) {
      std::vector<Key> seqs;
      Key cur;
      detail::monotone_sequences(j + 1, m, seqs, cur);
      for (std::size_t q = 0; q < seqs.size(); ++q) seq_index[m][j].emplace(seqs[q], static_cast<int>(q));
    }
  }
  std::vector<std::vector<Key>> elements(degree + 1);
  for (int m = 0; m <= degree; ++m) {
    for_each_simplicial_map(prisms[m], *l, [&](const std::vector<std::vector<Id>>& f) {
      Key key;
      for (const auto& level : f) key.insert(key.end(), level.begin(), level.end());
      elements[m].push_back(std::move(key));
      return true;
    });
  }
  // Precompose a key on K × Δ^m with id × θ for θ: [m'] -> [m].
  auto pull = [&](const Key& key, int m, int m2, const std::function<int(int)>& theta) {
    Key out;
    std::size_t offset = 0;
    std::vector<std::size_t> offsets(dim + 1);
    for (int j = 0; j <= dim; ++j) {
      offsets[j] = offset;
      offset += k->size(j) * seq_index[m][j].size();
    }
    for (int j = 0; j <= dim; ++j) {
      const std::size_t width2 = seq_index[m2][j].size();
      std::vector<int> image(width2);
      for (const auto& [seq, q] : seq_index[m2][j]) {
        Key moved;
        for (int v : seq) moved.push_back(theta(v));
        image[q] = seq_index[m][j].at(moved);
      }
      const std::size_t width = seq_index[m][j].size();
      for (Id x = 0; x < k->size(j); ++x) {
        for (std::size_t q = 0; q < width2; ++q) out.push_back(key[offsets[j] + x * width + image[q]]);
      }
    }
    return out;
  };
  return SimplicialSet::tabulate(
      degree, [&](int m) { return elements[m]; },
      [&](const Key& key, int m, int i) {
        return pull(key, m, m - 1, [i](int v) { return v < i ? v : v + 1; });
      },
      [&](const Key& key, int m, int i) {
        return pull(key, m, m + 1, [i](int v) { return v <= i ? v : v - 1; });
      },
      [&](const Key& key, int) {
        std::string s = "{";
        for (std::size_t q = 0; q < key.size(); ++q) s += (q ? "," : "") + std::to_string(key[q]);
        return s + "}";
      });
}

}  // namespace dendro
