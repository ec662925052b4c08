#pragma once

// The W-construction W(Ω(T)) and the straightening St(id) of a
// representable, both as cube complexes with named axes and vertex rules.
//
// Operation space at (c_1..c_n; c): cube over the inner edges of the subtree
// S with root c and leaves c_i; composition copies coordinates and puts 1 on
// the grafting edges. St(id)(c) is the cube over the edges strictly above c.
// A morphism f: R -> T acts on axes by
//   (f x)[a'] = max { x[a] : f(a) = a' },   0 when no axis maps to a',
// which pads faces with 0 and merges the axes a degeneracy identifies.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <string>
#include <vector>

#include "dendro/error.hpp"
#include "dendro/omega.hpp"
#include "dendro/operad.hpp"
#include "dendro/sset.hpp"
#include "dendro/tree.hpp"

namespace dendro {

inline std::vector<std::string> sorted_names(const Tree& t, const std::vector<int>& edges) {
  std::vector<std::string> out;
  for (int e : edges) out.push_back(t.name(e));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::string> merge_axes(const std::vector<std::vector<std::string>>& parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) fail("internal", "overlapping cube axes");
  return out;
}

// Vertex rule copying shared axes and setting the others to 1.
inline CubeMap graft_rule(const std::vector<std::string>& source, const std::vector<std::string>& target) {
  return padding_map(source, target, {}, 1);
}

// ---------------------------------------------------------------------------
// W(Ω(T))

class WOperad {
 public:
  explicit WOperad(TreePtr t) : tree_(std::move(t)) {}

  const Tree& tree() const { return *tree_; }

  // The subtree for a signature (inputs in any order); nullopt when the
  // operation space is empty.
  std::optional<Subtree> subtree(const Signature& sig) const {
    std::vector<int> leaves = sig.inputs;
    std::sort(leaves.begin(), leaves.end());
    if (std::adjacent_find(leaves.begin(), leaves.end()) != leaves.end()) return std::nullopt;
    return find_subtree(*tree_, sig.output, leaves);
  }

  // Axes of the operation space, or nullopt when it is empty.
  std::optional<std::vector<std::string>> space(const Signature& sig) const {
    auto s = subtree(sig);
    if (!s) return std::nullopt;
    return sorted_names(*tree_, subtree_inner_edges(*tree_, *s));
  }

  std::vector<std::string> space_or_fail(const Signature& sig) const {
    auto axes = space(sig);
    if (!axes) fail("argument", "signature " + describe(sig) + " has an empty operation space");
    return *axes;
  }

  // Every inhabited signature with inputs in sorted order.
  std::vector<Signature> signatures() const {
    std::vector<Signature> out;
    const TreeOperations ops(*tree_);
    for (int c = 0; c < tree_->edge_count(); ++c) {
      out.push_back({{c}, c});
      for (const Subtree& s : ops.rooted_at(c)) out.push_back({s.leaves, c});
    }
    return out;
  }

  std::string describe(const Signature& sig) const {
    std::string s = "(";
    for (std::size_t i = 0; i < sig.inputs.size(); ++i) s += (i ? "," : "") + tree_->name(sig.inputs[i]);
    return s + ";" + tree_->name(sig.output) + ")";
  }

  Signature parse_signature(std::string_view text) const {
    auto semi = text.find(';');
    if (semi == std::string_view::npos) fail("syntax", "signature needs the form \"c1,c2;c\"");
    Signature sig;
    std::string_view ins = text.substr(0, semi);
    while (!ins.empty()) {
      auto comma = ins.find(',');
      std::string_view name = ins.substr(0, comma);
      sig.inputs.push_back(tree_->index(trim(name)));
      if (comma == std::string_view::npos) break;
      ins.remove_prefix(comma + 1);
    }
    sig.output = tree_->index(trim(text.substr(semi + 1)));
    return sig;
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  }

  TreePtr tree_;
};

inline WOperad w_construction(const TreePtr& t) { return WOperad(t); }

inline Signature composite_signature(const Signature& outer, const std::vector<Signature>& inners) {
  if (outer.inputs.size() != inners.size()) fail("argument", "composition arity mismatch");
  Signature out{{}, outer.output};
  for (std::size_t i = 0; i < inners.size(); ++i) {
    if (inners[i].output != outer.inputs[i]) fail("argument", "composition colour mismatch");
    out.inputs.insert(out.inputs.end(), inners[i].inputs.begin(), inners[i].inputs.end());
  }
  return out;
}

// Composition W(outer) × Π W(inners[i]) -> W(composite) as a vertex rule.
inline CubeMap w_compose(const WOperad& w, const Signature& outer, const std::vector<Signature>& inners) {
  const Signature comp = composite_signature(outer, inners);
  std::vector<std::vector<std::string>> parts{w.space_or_fail(outer)};
  for (const auto& s : inners) parts.push_back(w.space_or_fail(s));
  return graft_rule(merge_axes(parts), w.space_or_fail(comp));
}

// ---------------------------------------------------------------------------
// St_{Ω[T]}(id)

class StraightAlgebra {
 public:
  explicit StraightAlgebra(TreePtr t) : tree_(std::move(t)), w_(tree_) {}

  const Tree& tree() const { return *tree_; }
  const WOperad& w() const { return w_; }

  // Axes of Δ[T/c]: the colours of T/c other than c.
  std::vector<std::string> axes(int c) const {
    std::vector<int> above;
    for (int e = 0; e < tree_->edge_count(); ++e) {
      if (e != c && tree_->is_above(e, c)) above.push_back(e);
    }
    return sorted_names(*tree_, above);
  }

  CubeComplex value(int c) const {
    auto a = axes(c);
    return CubeComplex(std::set<std::string>(a.begin(), a.end()));
  }

  // W(sig) × Π Δ[T/c_i] -> Δ[T/c]; the identity at unit signatures.
  CubeMap structure_map(const Signature& sig) const {
    std::vector<std::vector<std::string>> parts{w_.space_or_fail(sig)};
    for (int c : sig.inputs) parts.push_back(axes(c));
    return graft_rule(merge_axes(parts), axes(sig.output));
  }

 private:
  TreePtr tree_;
  WOperad w_;
};

inline StraightAlgebra straighten_identity(const TreePtr& t) { return StraightAlgebra(t); }

// ---------------------------------------------------------------------------
// Functoriality in the tree

// The max rule for f restricted to the given axes of source and target.
inline CubeMap axis_rule(const TreeMorphism& f, const std::vector<std::string>& source_axes,
                         const std::vector<std::string>& target_axes) {
  CubeMap m{source_axes, target_axes, {}};
  std::vector<int> dest(source_axes.size(), -1);
  for (std::size_t a = 0; a < source_axes.size(); ++a) {
    const std::string& image = f.target().name(f(f.source().index(source_axes[a])));
    auto it = std::find(target_axes.begin(), target_axes.end(), image);
    if (it != target_axes.end()) dest[a] = static_cast<int>(it - target_axes.begin());
  }
  for (unsigned v = 0; v < (1u << source_axes.size()); ++v) {
    unsigned out = 0;
    for (std::size_t a = 0; a < source_axes.size(); ++a) {
      if (dest[a] >= 0 && ((v >> a) & 1)) out |= 1u << dest[a];
    }
    m.rule.push_back(out);
  }
  return m;
}

// St(f) at the colour c of the source: Δ[R/c] -> Δ[T/f(c)].
inline CubeMap straighten_map(const TreeMorphism& f, int c) {
  StraightAlgebra sr(f.source_ptr()), st(f.target_ptr());
  return axis_rule(f, sr.axes(c), st.axes(f(c)));
}

// W(f) at a signature of the source: W(R)(sig) -> W(T)(f(sig)).
inline CubeMap w_map(const TreeMorphism& f, const Signature& sig) {
  WOperad wr(f.source_ptr()), wt(f.target_ptr());
  Signature image{{}, f(sig.output)};
  for (int c : sig.inputs) image.inputs.push_back(f(c));
  return axis_rule(f, wr.space_or_fail(sig), wt.space_or_fail(image));
}

// St(f) for an elementary face or degeneracy, up to renaming isos.
inline CubeMap straighten_face(const TreeMorphism& f, int c) {
  const Classification k = classify(f);
  const auto proper = std::count_if(k.factors.begin(), k.factors.end(),
                                    [](const Factor& x) { return x.kind != FactorKind::Iso; });
  if (proper > 1) fail("argument", "map is not an elementary face or degeneracy");
  return straighten_map(f, c);
}

inline std::string rule_string(const CubeMap& m, unsigned v) {
  std::string s;
  for (std::size_t a = 0; a < m.target_axes.size(); ++a) s += (m.rule[v] >> a) & 1 ? '1' : '0';
  return s.empty() ? "*" : s;
}

}  // namespace dendro
