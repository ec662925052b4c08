#pragma once

// Finite coloured symmetric operads in sets. Operations are opaque integer
// keys interpreted by the operad; every operad answers "which operations have
// output c and arity n", composes, and applies the symmetric-group action.

#include <algorithm>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "dendro/error.hpp"
#include "dendro/omega.hpp"
#include "dendro/tree.hpp"

namespace dendro {

using OpKey = std::vector<int>;

struct Signature {
  std::vector<int> inputs;
  int output = 0;

  friend bool operator==(const Signature&, const Signature&) = default;
};

class FiniteOperad {
 public:
  virtual ~FiniteOperad() = default;

  virtual std::string name() const = 0;
  virtual int colour_count() const = 0;
  virtual std::string colour_name(int c) const = 0;
  virtual Signature signature(const OpKey& f) const = 0;
  // All operations with the given output and arity, in a fixed order.
  virtual std::vector<OpKey> operations(int output, int arity) const = 0;
  virtual OpKey unit(int c) const = 0;
  // γ(f; g_1, ..., g_n); the output of g_i is the i-th input of f. Inputs of
  // the composite are the inputs of g_1, ..., g_n concatenated.
  virtual OpKey compose(const OpKey& f, const std::vector<OpKey>& gs) const = 0;
  // σ*(f): input i of the result is input sigma[i] of f.
  virtual OpKey act(const OpKey& f, const std::vector<int>& sigma) const = 0;
  virtual std::string label(const OpKey& f) const = 0;

  std::vector<OpKey> operations(const Signature& s) const {
    std::vector<OpKey> out;
    for (auto& f : operations(s.output, static_cast<int>(s.inputs.size()))) {
      if (signature(f).inputs == s.inputs) out.push_back(std::move(f));
    }
    return out;
  }

  int colour_index(std::string_view name) const {
    for (int c = 0; c < colour_count(); ++c) {
      if (colour_name(c) == name) return c;
    }
    fail("argument", "unknown colour '" + std::string(name) + "' of operad " + this->name());
  }

  void check_composable(const OpKey& f, const std::vector<OpKey>& gs) const {
    const auto sf = signature(f);
    if (sf.inputs.size() != gs.size()) fail("argument", "composition arity mismatch");
    for (std::size_t i = 0; i < gs.size(); ++i) {
      if (signature(gs[i]).output != sf.inputs[i]) fail("argument", "composition colour mismatch");
    }
  }
};

using OperadPtr = std::shared_ptr<const FiniteOperad>;

// The terminal operad: one colour, one operation of each arity. Key {n}.
class CommOperad final : public FiniteOperad {
 public:
  std::string name() const override { return "comm"; }
  int colour_count() const override { return 1; }
  std::string colour_name(int) const override { return "*"; }
  Signature signature(const OpKey& f) const override { return {std::vector<int>(f[0], 0), 0}; }
  std::vector<OpKey> operations(int output, int arity) const override {
    if (output != 0 || arity < 0) return {};
    return {{arity}};
  }
  OpKey unit(int) const override { return {1}; }
  OpKey compose(const OpKey& f, const std::vector<OpKey>& gs) const override {
    check_composable(f, gs);
    int n = 0;
    for (const auto& g : gs) n += g[0];
    return {n};
  }
  OpKey act(const OpKey& f, const std::vector<int>&) const override { return f; }
  std::string label(const OpKey& f) const override { return "mu" + std::to_string(f[0]); }
};

// One colour; arity-n operations are the linear orders of n inputs, stored
// as the word listing input indices in product order.
class AssocOperad final : public FiniteOperad {
 public:
  std::string name() const override { return "assoc"; }
  int colour_count() const override { return 1; }
  std::string colour_name(int) const override { return "*"; }
  Signature signature(const OpKey& f) const override {
    return {std::vector<int>(f.size(), 0), 0};
  }
  std::vector<OpKey> operations(int output, int arity) const override {
    if (output != 0 || arity < 0) return {};
    std::vector<OpKey> out;
    OpKey w(arity);
    std::iota(w.begin(), w.end(), 0);
    do {
      out.push_back(w);
    } while (std::next_permutation(w.begin(), w.end()));
    return out;
  }
  OpKey unit(int) const override { return {0}; }
  OpKey compose(const OpKey& f, const std::vector<OpKey>& gs) const override {
    check_composable(f, gs);
    std::vector<int> offset(gs.size() + 1, 0);
    for (std::size_t i = 0; i < gs.size(); ++i) offset[i + 1] = offset[i] + static_cast<int>(gs[i].size());
    OpKey out;
    for (int letter : f) {
      for (int x : gs[letter]) out.push_back(offset[letter] + x);
    }
    return out;
  }
  OpKey act(const OpKey& f, const std::vector<int>& sigma) const override {
    std::vector<int> inverse(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) inverse[sigma[i]] = static_cast<int>(i);
    OpKey out;
    for (int letter : f) out.push_back(inverse[letter]);
    return out;
  }
  std::string label(const OpKey& f) const override {
    if (f.empty()) return "1";
    std::string s;
    for (int letter : f) s += "x" + std::to_string(letter + 1);
    return s;
  }
};

// Ω(T): colours are the edges of T; P(c_1..c_n; c) holds the subtree with
// root c and leaves {c_i} (if any), presented in that input order, or the
// unit when the signature is (c; c). Key {output, inputs...}.
class FreeTreeOperad final : public FiniteOperad {
 public:
  explicit FreeTreeOperad(TreePtr t) : tree_(std::move(t)), ops_(*tree_) {}

  const Tree& tree() const { return *tree_; }
  const TreePtr& tree_ptr() const { return tree_; }

  std::string name() const override { return "free(" + tree_->to_string() + ")"; }
  int colour_count() const override { return tree_->edge_count(); }
  std::string colour_name(int c) const override { return tree_->name(c); }
  Signature signature(const OpKey& f) const override {
    return {std::vector<int>(f.begin() + 1, f.end()), f[0]};
  }
  std::vector<OpKey> operations(int output, int arity) const override {
    std::vector<OpKey> out;
    if (output < 0 || output >= colour_count()) return out;
    if (arity == 1) out.push_back({output, output});
    for (const Subtree& s : ops_.rooted_at(output)) {
      if (static_cast<int>(s.leaves.size()) != arity) continue;
      std::vector<int> order = s.leaves;
      do {
        OpKey k{output};
        k.insert(k.end(), order.begin(), order.end());
        out.push_back(std::move(k));
      } while (std::next_permutation(order.begin(), order.end()));
    }
    return out;
  }
  OpKey unit(int c) const override { return {c, c}; }
  OpKey compose(const OpKey& f, const std::vector<OpKey>& gs) const override {
    check_composable(f, gs);
    OpKey out{f[0]};
    for (const auto& g : gs) out.insert(out.end(), g.begin() + 1, g.end());
    return out;
  }
  OpKey act(const OpKey& f, const std::vector<int>& sigma) const override {
    OpKey out{f[0]};
    for (int i : sigma) out.push_back(f[1 + i]);
    return out;
  }
  std::string label(const OpKey& f) const override {
    std::string s = tree_->name(f[0]) + "<-(";
    for (std::size_t i = 1; i < f.size(); ++i) s += (i > 1 ? "," : "") + tree_->name(f[i]);
    return s + ")";
  }

 private:
  TreePtr tree_;
  TreeOperations ops_;
};

inline OperadPtr comm() { return std::make_shared<const CommOperad>(); }
inline OperadPtr assoc() { return std::make_shared<const AssocOperad>(); }
inline OperadPtr free_tree_operad(const TreePtr& t) { return std::make_shared<const FreeTreeOperad>(t); }

// ---------------------------------------------------------------------------
// Operad maps Ω(T) -> P

// A map Ω(T) -> P: a colour per edge and an operation per vertex whose
// signature is (colours of the children; colour of the vertex).
struct OperadMap {
  std::vector<int> colours;            // per edge of T
  std::vector<OpKey> operations;       // per edge; empty key for edges without a vertex
};

// All operad maps Ω(T) -> P, assigned top-down from the root colour.
inline std::vector<OperadMap> enumerate_operad_maps(const Tree& t, const FiniteOperad& p) {
  std::vector<OperadMap> out;
  OperadMap cur{std::vector<int>(t.edge_count(), -1), std::vector<OpKey>(t.edge_count())};
  std::vector<int> order;  // vertices in preorder
  for (int e = 0; e < t.edge_count(); ++e) {
    if (t.has_vertex(e)) order.push_back(e);
  }
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == order.size()) {
      out.push_back(cur);
      return;
    }
    const int v = order[i];
    const auto children = t.children(v);
    for (auto& f : p.operations(cur.colours[v], static_cast<int>(children.size()))) {
      const auto sig = p.signature(f);
      for (std::size_t j = 0; j < children.size(); ++j) cur.colours[children[j]] = sig.inputs[j];
      cur.operations[v] = f;
      rec(i + 1);
    }
    cur.operations[v].clear();
  };
  for (int c = 0; c < p.colour_count(); ++c) {
    cur.colours[t.root()] = c;
    rec(0);
  }
  return out;
}

// The operation of P assigned to the subtree `s` of T by the map `x`,
// presented with inputs in the order `inputs` (the leaves of s, possibly
// permuted).
inline OpKey evaluate_subtree(const Tree& t, const FiniteOperad& p, const OperadMap& x,
                              const Subtree& s, const std::vector<int>& inputs) {
  if (s.is_unit()) return p.unit(x.colours[s.root]);
  std::vector<int> natural;  // leaves in the order the composite produces them
  std::function<OpKey(int)> rec = [&](int e) -> OpKey {
    if (std::binary_search(s.leaves.begin(), s.leaves.end(), e)) {
      natural.push_back(e);
      return p.unit(x.colours[e]);
    }
    std::vector<OpKey> gs;
    for (int c : t.children(e)) gs.push_back(rec(c));
    return p.compose(x.operations[e], gs);
  };
  OpKey f = rec(s.root);
  std::vector<int> sigma(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    sigma[i] = static_cast<int>(std::find(natural.begin(), natural.end(), inputs[i]) - natural.begin());
  }
  return p.act(f, sigma);
}

// x·m for a morphism m: S -> T.
inline OperadMap pull_back(const TreeMorphism& m, const FiniteOperad& p, const OperadMap& x) {
  const Tree& s = m.source();
  OperadMap out{std::vector<int>(s.edge_count()), std::vector<OpKey>(s.edge_count())};
  for (int e = 0; e < s.edge_count(); ++e) out.colours[e] = x.colours[m(e)];
  for (int v : s.vertices()) {
    std::vector<int> inputs;
    for (int c : s.children(v)) inputs.push_back(m(c));
    out.operations[v] = evaluate_subtree(m.target(), p, x, m.vertex_image(v), inputs);
  }
  return out;
}

inline Key encode(const OperadMap& x) {
  Key k = x.colours;
  for (const auto& f : x.operations) {
    k.push_back(static_cast<int>(f.size()));
    k.insert(k.end(), f.begin(), f.end());
  }
  return k;
}

inline OperadMap decode_operad_map(const Key& k, int edges) {
  OperadMap x{std::vector<int>(k.begin(), k.begin() + edges), std::vector<OpKey>(edges)};
  std::size_t pos = edges;
  for (int e = 0; e < edges; ++e) {
    int len = k[pos++];
    x.operations[e].assign(k.begin() + pos, k.begin() + pos + len);
    pos += len;
  }
  return x;
}

inline std::string describe(const Tree& t, const FiniteOperad& p, const OperadMap& x) {
  std::string s = "{";
  for (int e = 0; e < t.edge_count(); ++e) {
    s += (e ? "," : "") + t.name(e) + ":" + p.colour_name(x.colours[e]);
    if (t.has_vertex(e)) s += "[" + p.label(x.operations[e]) + "]";
  }
  return s + "}";
}

inline OperadPtr operad_by_name(std::string_view name) {
  if (name == "comm") return comm();
  if (name == "assoc") return assoc();
  if (name.starts_with("free(") && name.ends_with(")")) {
    return free_tree_operad(share(parse_tree(name.substr(5, name.size() - 6))));
  }
  fail("argument", "unknown operad '" + std::string(name) + "'");
}

}  // namespace dendro
