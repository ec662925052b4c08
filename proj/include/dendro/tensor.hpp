#pragma once

// X ⊗ i_!(Δ^n) and the mapping spaces Map_S(X, Y).
//
// For a representable Ω[T] the dendrices of Ω[T] ⊗ Ω[L_n] are the colour maps
// col(S) -> col(T) × [n] that factor through some shuffle of T with L_n. The
// shuffles are the formal trees built from T-vertices at a fixed level and
// unary level steps, rooted at (root, n) with leaves (leaf, 0).
//
// Supported X: representables and their face unions (pulled back along the
// projection to Ω[T]), i_!(K) (computed as i_!(K × Δ^n)), and coproducts of
// these. Every tensor element has a key [part indices..., payload...,
// level per edge]; simplex operators act on the trailing levels.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "dendro/dset.hpp"
#include "dendro/error.hpp"
#include "dendro/omega.hpp"
#include "dendro/skeleton.hpp"
#include "dendro/sset.hpp"
#include "dendro/tree.hpp"

namespace dendro {

// A shuffle: a tree whose edge e carries the colour (edge[e], level[e]).
struct Shuffle {
  TreePtr tree;
  std::vector<int> edge;
  std::vector<int> level;
};

// All formal trees of T against L_n, rooted at (root, n).
inline std::vector<Shuffle> shuffles(const Tree& t, int n) {
  check_simplicial_bound(n);
  auto label = [&](int c, int i) { return t.name(c) + "_" + std::to_string(i); };
  std::function<std::vector<TreeNode>(int, int)> grow = [&](int c, int i) {
    std::vector<TreeNode> out;
    if (t.has_vertex(c)) {
      std::vector<std::vector<TreeNode>> choices;
      for (int x : t.children(c)) choices.push_back(grow(x, i));
      std::vector<TreeNode> partial{TreeNode{label(c, i), true, {}}};
      for (const auto& options : choices) {
        std::vector<TreeNode> next;
        for (const auto& p : partial) {
          for (const auto& o : options) {
            TreeNode q = p;
            q.children.push_back(o);
            next.push_back(std::move(q));
          }
        }
        partial = std::move(next);
      }
      out.insert(out.end(), partial.begin(), partial.end());
    }
    if (i > 0) {
      for (auto& below : grow(c, i - 1)) out.push_back(TreeNode{label(c, i), true, {std::move(below)}});
    }
    if (!t.has_vertex(c) && i == 0) out.push_back(TreeNode{label(c, 0), false, {}});
    return out;
  };
  std::unordered_map<std::string, std::pair<int, int>> colour;
  for (int c = 0; c < t.edge_count(); ++c) {
    for (int i = 0; i <= n; ++i) colour.emplace(label(c, i), std::make_pair(c, i));
  }
  std::vector<Shuffle> out;
  for (auto& node : grow(t.root(), n)) {
    Shuffle s{share(Tree(node)), {}, {}};
    for (int e = 0; e < s.tree->edge_count(); ++e) {
      auto [c, i] = colour.at(s.tree->name(e));
      s.edge.push_back(c);
      s.level.push_back(i);
    }
    out.push_back(std::move(s));
  }
  return out;
}

// Colour maps col(S) -> col(T) × [n] of the dendrices of Ω[T] ⊗ Ω[L_n] at
// shape S, encoded as [edge..., level...] over the edges of S.
inline std::set<Key> tensor_colour_maps(const Tree& s, const std::vector<Shuffle>& shs) {
  std::set<Key> out;
  const int k = s.edge_count();
  for (const auto& sh : shs) {
    TreeOperations ops(*sh.tree);
    for_each_hom(s, *sh.tree, ops, [&](const std::vector<int>& m) {
      Key key(2 * k);
      for (int e = 0; e < k; ++e) {
        key[e] = sh.edge[m[e]];
        key[k + e] = sh.level[m[e]];
      }
      out.insert(std::move(key));
    });
  }
  return out;
}

struct TensorResult {
  DSetPtr input;
  int simplex = 0;
  DSetPtr result;
  DendrMap projection;  // to input
  std::vector<std::vector<Key>> keys;
  std::vector<std::unordered_map<Key, Id, VectorHash>> index;
};

namespace detail {

// Payload length of a key for X at shape s (excluding levels).
struct TensorCells {
  std::function<std::vector<Key>(int)> keys;               // full keys at shape s
  std::function<Key(const Key&, int)> act;                  // generator action on full keys
  std::function<Id(const Key&, int)> project;               // element of X
  std::function<std::string(const Key&, int)> label;
};

inline Key act_levels(const Key& key, const MorphismRecord& r, std::size_t head, std::size_t payload) {
  // key = [head..., payload..., levels over target edges]
  Key out(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(head + payload));
  const std::size_t lv = head + payload;
  for (int e : r.edge_map) out.push_back(key[lv + e]);
  return out;
}

inline TensorCells cells(const DSetPtr& x, int n) {
  const Skeleton& sk = x->skeleton();
  const Presentation& p = x->presentation();
  switch (p.kind) {
    case Presentation::Kind::SubRepresentable: {
      const int ti = p.tree_index;
      auto shs = std::make_shared<std::vector<Shuffle>>(shuffles(sk.tree(ti), n));
      auto element_of = std::make_shared<std::unordered_map<int, Id>>();
      for (int s = 0; s < sk.tree_count(); ++s) {
        for (Id e = 0; e < p.morphism_of[s].size(); ++e) element_of->emplace(p.morphism_of[s][e], e);
      }
      const auto inv = invert(p.iso);
      TensorCells c;
      c.keys = [&sk, shs, element_of, ti](int s) {
        std::vector<Key> out;
        const int k = sk.tree(s).edge_count();
        for (const auto& cm : tensor_colour_maps(sk.tree(s), *shs)) {
          std::vector<int> proj(cm.begin(), cm.begin() + k);
          const int m = sk.find(s, ti, proj);
          if (m < 0) fail("internal", "tensor projection is not a morphism");
          if (element_of->count(m)) out.push_back(cm);
        }
        return out;
      };
      c.act = [&sk](const Key& key, int m) {
        const auto& r = sk.morphism(m);
        const std::size_t k = sk.tree(r.target).edge_count();
        Key out;
        for (int e : r.edge_map) out.push_back(key[e]);
        for (int e : r.edge_map) out.push_back(key[k + e]);
        return out;
      };
      c.project = [&sk, element_of, ti](const Key& key, int s) {
        const int k = sk.tree(s).edge_count();
        std::vector<int> proj(key.begin(), key.begin() + k);
        return element_of->at(sk.find(s, ti, proj));
      };
      c.label = [&sk, named = p.tree, inv](const Key& key, int s) {
        const int k = sk.tree(s).edge_count();
        std::string out = "{";
        for (int e = 0; e < k; ++e) {
          out += (e ? "," : "") + sk.tree(s).name(e) + ":(" + named->name(inv[key[e]]) + "," +
                 std::to_string(key[k + e]) + ")";
        }
        return out + "}";
      };
      return c;
    }
    case Presentation::Kind::Simplicial: {
      SSetPtr k = p.simplicial;
      TensorCells c;
      c.keys = [&sk, k, n](int s) {
        std::vector<Key> out;
        const Tree& tr = sk.tree(s);
        if (!tr.is_linear()) return out;
        const int deg = tr.vertex_count();
        const auto pos = Skeleton::linear_positions(tr);
        std::vector<Key> seqs;
        Key cur;
        detail::monotone_sequences(deg + 1, n, seqs, cur);
        for (Id x = 0; x < k->size(deg); ++x) {
          for (const auto& seq : seqs) {
            Key key{static_cast<int>(x)};
            for (int e = 0; e < tr.edge_count(); ++e) key.push_back(seq[pos[e]]);
            out.push_back(std::move(key));
          }
        }
        return out;
      };
      c.act = [&sk, k](const Key& key, int m) {
        const auto theta = linear_theta(sk, m);
        const int deg = sk.tree(sk.morphism(m).target).vertex_count();
        Key out = act_levels(key, sk.morphism(m), 0, 1);
        out[0] = static_cast<int>(k->act(theta, deg, key[0]));
        return out;
      };
      c.project = [](const Key& key, int) { return static_cast<Id>(key[0]); };
      c.label = [&sk, k](const Key& key, int s) {
        const Tree& tr = sk.tree(s);
        const auto pos = Skeleton::linear_positions(tr);
        std::vector<int> seq(tr.edge_count());
        for (int e = 0; e < tr.edge_count(); ++e) seq[pos[e]] = key[1 + e];
        return "(" + k->label(tr.vertex_count(), key[0]) + "," + detail::sequence_label(seq) + ")";
      };
      return c;
    }
    case Presentation::Kind::Coproduct: {
      auto parts = std::make_shared<std::vector<TensorCells>>();
      for (const auto& part : p.parts) parts->push_back(cells(part, n));
      TensorCells c;
      c.keys = [parts](int s) {
        std::vector<Key> out;
        for (std::size_t i = 0; i < parts->size(); ++i) {
          for (auto& key : (*parts)[i].keys(s)) {
            key.insert(key.begin(), static_cast<int>(i));
            out.push_back(std::move(key));
          }
        }
        return out;
      };
      c.act = [parts](const Key& key, int m) {
        Key inner((*parts)[key[0]].act(Key(key.begin() + 1, key.end()), m));
        inner.insert(inner.begin(), key[0]);
        return inner;
      };
      c.project = [parts, x](const Key& key, int s) {
        Id offset = 0;
        for (int i = 0; i < key[0]; ++i) offset += static_cast<Id>(x->presentation().parts[i]->size(s));
        return offset + (*parts)[key[0]].project(Key(key.begin() + 1, key.end()), s);
      };
      c.label = [parts](const Key& key, int s) {
        return std::to_string(key[0]) + ":" + (*parts)[key[0]].label(Key(key.begin() + 1, key.end()), s);
      };
      return c;
    }
    case Presentation::Kind::Opaque:
      break;
  }
  fail("argument",
       "the tensor with a simplex is implemented for representables, their face unions, "
       "i_!(K) and coproducts of these");
}

}  // namespace detail

inline TensorResult tensor_with_simplex(const DSetPtr& x, int n) {
  check_simplicial_bound(n);
  const SkeletonPtr& skel = x->skeleton_ptr();
  auto c = detail::cells(x, n);
  TensorResult r;
  r.input = x;
  r.simplex = n;
  auto result = DendroidalSet::tabulate(skel, c.keys, c.act, c.label, &r.keys);
  Presentation pr;
  result.set_presentation(pr);
  r.result = share(std::move(result));
  r.projection = DendrMap{r.result, x, std::vector<std::vector<Id>>(skel->tree_count())};
  r.index.resize(skel->tree_count());
  for (int s = 0; s < skel->tree_count(); ++s) {
    for (Id e = 0; e < r.keys[s].size(); ++e) {
      r.projection.maps[s].push_back(c.project(r.keys[s][e], s));
      r.index[s].emplace(r.keys[s][e], e);
    }
  }
  return r;
}

// The map X ⊗ Δ^m -> X ⊗ Δ^n induced by a monotone θ: [m] -> [n].
inline DendrMap tensor_simplex_map(const TensorResult& from, const TensorResult& to,
                                   const std::vector<int>& theta) {
  if (from.input != to.input) fail("argument", "tensor maps need a common input");
  if (static_cast<int>(theta.size()) != from.simplex + 1) fail("argument", "θ has the wrong source");
  const Skeleton& sk = from.result->skeleton();
  DendrMap f{from.result, to.result, std::vector<std::vector<Id>>(sk.tree_count())};
  for (int s = 0; s < sk.tree_count(); ++s) {
    const std::size_t k = sk.tree(s).edge_count();
    for (const auto& key : from.keys[s]) {
      Key image = key;
      for (std::size_t j = key.size() - k; j < key.size(); ++j) {
        if (image[j] < 0 || image[j] > from.simplex) fail("internal", "level out of range");
        image[j] = theta[image[j]];
      }
      auto it = to.index[s].find(image);
      if (it == to.index[s].end()) fail("internal", "θ does not preserve tensor dendrices");
      f.maps[s].push_back(it->second);
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Mapping spaces

// Map_S(X, Y) up to degree d: n-simplices are the maps X ⊗ i_!(Δ^n) -> Y over
// S, where the tensor maps to S through the projection to X.
inline SimplicialSet mapping_space(const DendrMap& x, const DendrMap& y, int d) {
  check_simplicial_bound(d);
  if (x.target != y.target) fail("argument", "mapping space over different bases");
  std::vector<TensorResult> tensors;
  for (int n = 0; n <= d; ++n) tensors.push_back(tensor_with_simplex(x.source, n));
  std::vector<std::vector<Key>> simplices(d + 1);
  auto flatten = [](const std::vector<std::vector<Id>>& m) {
    Key k;
    for (const auto& v : m) k.insert(k.end(), v.begin(), v.end());
    return k;
  };
  for (int n = 0; n <= d; ++n) {
    DendrMap to_base = compose(x, tensors[n].projection);
    MapSearch search(tensors[n].result, y.source);
    search.over(to_base, y);
    search.for_each([&](const auto& m) {
      simplices[n].push_back(flatten(m));
      return true;
    });
  }
  std::map<std::vector<int>, DendrMap> along_cache;
  auto pull = [&](const Key& k, int n, const std::vector<int>& theta) {
    const int m = static_cast<int>(theta.size()) - 1;
    auto it = along_cache.find(theta);
    if (it == along_cache.end()) it = along_cache.emplace(theta, tensor_simplex_map(tensors[m], tensors[n], theta)).first;
    const DendrMap& along = it->second;
    std::vector<std::size_t> offset_n{0};
    const Skeleton& sk = x.source->skeleton();
    for (int s = 0; s < sk.tree_count(); ++s) offset_n.push_back(offset_n.back() + tensors[n].result->size(s));
    Key out;
    for (int s = 0; s < sk.tree_count(); ++s) {
      for (Id e : along.maps[s]) out.push_back(k[offset_n[s] + e]);
    }
    return out;
  };
  return SimplicialSet::tabulate(
      d, [&](int n) { return simplices[n]; },
      [&](const Key& k, int n, int i) {
        std::vector<int> theta;
        for (int j = 0; j <= n; ++j) {
          if (j != i) theta.push_back(j);
        }
        return pull(k, n, theta);
      },
      [&](const Key& k, int n, int i) {
        std::vector<int> theta;
        for (int j = 0; j <= n + 1; ++j) theta.push_back(j <= i ? j : j - 1);
        return pull(k, n, theta);
      },
      [](const Key& k, int) {
        std::string s = "[";
        for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
        return s + "]";
      });
}

}  // namespace dendro
