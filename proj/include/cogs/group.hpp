#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cogs/error.hpp"

namespace cogs {

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

// Finite group given by its full multiplication table. Element ids are
// 0..order-1 with 0 the identity. Immutable after construction.
class FiniteGroup {
 public:
  static constexpr int kMaxOrder = 512;
  static constexpr int kId = 0;

  int order() const { return d_order; }
  int mul(int a, int b) const { return d_table[a * d_order + b]; }
  int inv(int a) const { return d_inv[a]; }
  int conj(int g, int x) const { return mul(mul(g, x), inv(g)); }

  int element_order(int g) const {
    int n = 1, x = g;
    while (x != kId) { x = mul(x, g); ++n; }
    return n;
  }

  friend GroupPtr group_from_table(const std::vector<std::vector<int>>& rows);

 private:
  FiniteGroup(int order, std::vector<int> table, std::vector<int> inv)
      : d_order(order), d_table(std::move(table)), d_inv(std::move(inv)) {}

  int d_order;
  std::vector<int> d_table;  // row-major
  std::vector<int> d_inv;
};

inline GroupPtr group_from_table(const std::vector<std::vector<int>>& rows) {
  const int n = static_cast<int>(rows.size());
  require(n >= 1, "NoIdentity", "empty table");
  require(n <= FiniteGroup::kMaxOrder,
          "TooLarge", "order " + std::to_string(n) + " exceeds cap " +
                          std::to_string(FiniteGroup::kMaxOrder));
  std::vector<int> table(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    require(static_cast<int>(rows[i].size()) == n, "MalformedTable",
            "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                " entries, expected " + std::to_string(n));
    for (int j = 0; j < n; ++j) {
      require(rows[i][j] >= 0 && rows[i][j] < n, "MalformedTable",
              "entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                  std::to_string(rows[i][j]) + " out of range");
      table[i * n + j] = rows[i][j];
    }
  }
  for (int j = 0; j < n; ++j)
    require(table[0 * n + j] == j && table[j * n + 0] == j, "NoIdentity",
            "element 0 does not act as identity at " + std::to_string(j));
  std::vector<int> inv(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (table[i * n + j] == 0 && table[j * n + i] == 0) { inv[i] = j; break; }
    require(inv[i] >= 0, "NoInverse", "element " + std::to_string(i));
  }
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k)
        require(table[table[g * n + h] * n + k] == table[g * n + table[h * n + k]],
                "NotAssociative",
                "(" + std::to_string(g) + "," + std::to_string(h) + "," +
                    std::to_string(k) + ")");
  return GroupPtr(new FiniteGroup(n, std::move(table), std::move(inv)));
}

// Closure of permutation generators under composition ((p*q)(i) = p(q(i))).
// Element ids follow breadth-first discovery from the identity, so they are
// reproducible given the generator list.
inline GroupPtr group_from_permutations(int degree,
                                        const std::vector<std::vector<int>>& gens) {
  require(degree >= 1, "MalformedPermutation", "degree must be positive");
  for (const auto& g : gens) {
    require(static_cast<int>(g.size()) == degree, "MalformedPermutation",
            "image list length != degree");
    std::vector<bool> seen(degree, false);
    for (int v : g) {
      require(v >= 0 && v < degree && !seen[v], "MalformedPermutation",
              "not a permutation");
      seen[v] = true;
    }
  }
  std::vector<int> ident(degree);
  for (int i = 0; i < degree; ++i) ident[i] = i;
  std::vector<std::vector<int>> elts{ident};
  std::map<std::vector<int>, int> id_of{{ident, 0}};
  for (size_t head = 0; head < elts.size(); ++head) {
    for (const auto& g : gens) {
      std::vector<int> prod(degree);
      for (int i = 0; i < degree; ++i) prod[i] = elts[head][g[i]];
      if (id_of.emplace(prod, static_cast<int>(elts.size())).second) {
        elts.push_back(prod);
        require(static_cast<int>(elts.size()) <= FiniteGroup::kMaxOrder, "TooLarge",
                "permutation closure exceeds cap");
      }
    }
  }
  const int n = static_cast<int>(elts.size());
  std::vector<std::vector<int>> rows(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<int> prod(degree);
      for (int i = 0; i < degree; ++i) prod[i] = elts[a][elts[b][i]];
      rows[a][b] = id_of.at(prod);
    }
  return group_from_table(rows);
}

// Subgroup as a sorted element-id list of a parent group.
struct Subgroup {
  GroupPtr parent;
  std::vector<int> elements;  // sorted ascending; always contains 0

  int order() const { return static_cast<int>(elements.size()); }
  bool contains(int g) const {
    return std::binary_search(elements.begin(), elements.end(), g);
  }
  // position of g within elements, -1 if absent
  int position(int g) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), g);
    return (it != elements.end() && *it == g) ? static_cast<int>(it - elements.begin())
                                              : -1;
  }
};

inline Subgroup subgroup_generated(GroupPtr G, const std::vector<int>& gens) {
  for (int g : gens)
    require(g >= 0 && g < G->order(), "UnknownElement", std::to_string(g));
  std::vector<bool> in(G->order(), false);
  in[0] = true;
  std::vector<int> queue{0};
  for (size_t head = 0; head < queue.size(); ++head)
    for (int g : gens) {
      int y = G->mul(queue[head], g);
      if (!in[y]) { in[y] = true; queue.push_back(y); }
    }
  std::vector<int> elems;
  for (int i = 0; i < G->order(); ++i)
    if (in[i]) elems.push_back(i);
  return Subgroup{std::move(G), std::move(elems)};
}

inline Subgroup trivial_subgroup(GroupPtr G) { return Subgroup{std::move(G), {0}}; }

inline Subgroup full_subgroup(GroupPtr G) {
  std::vector<int> all(G->order());
  for (int i = 0; i < G->order(); ++i) all[i] = i;
  return Subgroup{std::move(G), std::move(all)};
}

inline bool same_subgroup(const Subgroup& A, const Subgroup& B) {
  return A.elements == B.elements;
}

inline Subgroup conjugate_subgroup(const Subgroup& H, int g) {
  const auto& G = *H.parent;
  std::vector<int> elems;
  elems.reserve(H.elements.size());
  for (int h : H.elements) elems.push_back(G.conj(g, h));
  std::sort(elems.begin(), elems.end());
  return Subgroup{H.parent, std::move(elems)};
}

inline Subgroup normalizer(const Subgroup& H) {
  const auto& G = *H.parent;
  std::vector<int> elems;
  for (int g = 0; g < G.order(); ++g)
    if (same_subgroup(conjugate_subgroup(H, g), H)) elems.push_back(g);
  return Subgroup{H.parent, std::move(elems)};
}

inline Subgroup centralizer(const Subgroup& H) {
  const auto& G = *H.parent;
  std::vector<int> elems;
  for (int g = 0; g < G.order(); ++g) {
    bool central = true;
    for (int h : H.elements)
      if (G.mul(g, h) != G.mul(h, g)) { central = false; break; }
    if (central) elems.push_back(g);
  }
  return Subgroup{H.parent, std::move(elems)};
}

inline Subgroup intersect_subgroups(const Subgroup& A, const Subgroup& B) {
  std::vector<int> elems;
  std::set_intersection(A.elements.begin(), A.elements.end(), B.elements.begin(),
                        B.elements.end(), std::back_inserter(elems));
  return Subgroup{A.parent, std::move(elems)};
}

inline bool normalizes(const Subgroup& A, const Subgroup& B) {
  for (int a : A.elements)
    if (!same_subgroup(conjugate_subgroup(B, a), B)) return false;
  return true;
}

// Product set AB, required to be a subgroup (one factor must normalize the
// other, and closure is verified on top of that).
inline Subgroup subgroup_product(const Subgroup& A, const Subgroup& B) {
  const auto& G = *A.parent;
  require(normalizes(A, B) || normalizes(B, A), "NotASubgroup",
          "neither factor normalizes the other");
  std::vector<bool> in(G.order(), false);
  for (int a : A.elements)
    for (int b : B.elements) in[G.mul(a, b)] = true;
  std::vector<int> elems;
  for (int i = 0; i < G.order(); ++i)
    if (in[i]) elems.push_back(i);
  for (int x : elems)
    for (int y : elems)
      require(in[G.mul(x, y)], "NotASubgroup",
              "product set not closed at (" + std::to_string(x) + "," +
                  std::to_string(y) + ")");
  return Subgroup{A.parent, std::move(elems)};
}

// Left cosets gH, each sorted, listed by ascending minimal element (so the
// identity coset comes first).
inline std::vector<std::vector<int>> left_cosets(const Subgroup& H) {
  const auto& G = *H.parent;
  std::vector<std::vector<int>> cosets;
  std::vector<bool> assigned(G.order(), false);
  for (int g = 0; g < G.order(); ++g) {
    if (assigned[g]) continue;
    std::vector<int> coset;
    for (int h : H.elements) {
      int x = G.mul(g, h);
      assigned[x] = true;
      coset.push_back(x);
    }
    std::sort(coset.begin(), coset.end());
    cosets.push_back(std::move(coset));
  }
  return cosets;
}

inline bool is_normal(const Subgroup& H) {
  const auto& G = *H.parent;
  for (int g = 0; g < G.order(); ++g)
    if (!same_subgroup(conjugate_subgroup(H, g), H)) return false;
  return true;
}

// Group homomorphism as the full image array over source element ids.
struct GroupHom {
  GroupPtr source;
  GroupPtr target;
  std::vector<int> image;  // image[g] for every g in source

  int apply(int g) const { return image[g]; }
};

inline void validate_hom(const GroupHom& f) {
  require(static_cast<int>(f.image.size()) == f.source->order(), "NotAHomomorphism",
          "image array size mismatch");
  for (int v : f.image)
    require(v >= 0 && v < f.target->order(), "NotAHomomorphism",
            "image out of range");
  for (int a = 0; a < f.source->order(); ++a)
    for (int b = 0; b < f.source->order(); ++b)
      require(f.image[f.source->mul(a, b)] == f.target->mul(f.image[a], f.image[b]),
              "NotAHomomorphism",
              "at (" + std::to_string(a) + "," + std::to_string(b) + ")");
}

inline bool hom_injective(const GroupHom& f) {
  std::vector<bool> seen(f.target->order(), false);
  for (int v : f.image) {
    if (seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

inline Subgroup hom_image(const GroupHom& f) {
  std::vector<int> elems = f.image;
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return Subgroup{f.target, std::move(elems)};
}

inline GroupHom identity_hom(GroupPtr G) {
  std::vector<int> img(G->order());
  for (int i = 0; i < G->order(); ++i) img[i] = i;
  return GroupHom{G, G, std::move(img)};
}

// outer . inner
inline GroupHom compose_homs(const GroupHom& outer, const GroupHom& inner) {
  require(inner.target == outer.source, "NotComposable",
          "homomorphism targets/sources disagree");
  std::vector<int> img(inner.source->order());
  for (int i = 0; i < inner.source->order(); ++i) img[i] = outer.image[inner.image[i]];
  return GroupHom{inner.source, outer.target, std::move(img)};
}

// -1 where y has no preimage; requires injectivity for a functional inverse.
inline std::vector<int> hom_preimage_table(const GroupHom& f) {
  std::vector<int> pre(f.target->order(), -1);
  for (int g = 0; g < f.source->order(); ++g) pre[f.image[g]] = g;
  return pre;
}

// Subgroup repackaged as a standalone group; new ids are positions in the
// sorted element list (identity stays 0). to_parent maps new ids back.
struct SubgroupAsGroup {
  GroupPtr group;
  std::vector<int> to_parent;
  GroupHom embedding;  // group -> parent
};

// id inside a repackaged subgroup of an element given by its parent id
inline int subgroup_position(const SubgroupAsGroup& S, int parent_elt) {
  auto it = std::lower_bound(S.to_parent.begin(), S.to_parent.end(), parent_elt);
  require(it != S.to_parent.end() && *it == parent_elt, "UnknownElement",
          "element " + std::to_string(parent_elt) + " is not in the subgroup");
  return static_cast<int>(it - S.to_parent.begin());
}

inline SubgroupAsGroup subgroup_as_group(const Subgroup& S) {
  const auto& G = *S.parent;
  const int n = S.order();
  std::vector<std::vector<int>> rows(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int pos = S.position(G.mul(S.elements[i], S.elements[j]));
      require(pos >= 0, "NotASubgroup", "element set not closed");
      rows[i][j] = pos;
    }
  GroupPtr H = group_from_table(rows);
  GroupHom emb{H, S.parent, S.elements};
  return SubgroupAsGroup{H, S.elements, std::move(emb)};
}

// Quotient by a normal subgroup; coset representatives are minimal ids and the
// new element ids follow the ascending-representative order.
struct QuotientResult {
  GroupPtr group;
  GroupHom projection;        // parent -> quotient
  std::vector<int> reps;      // rep[i] = minimal element of coset i
};

inline QuotientResult quotient(const Subgroup& N) {
  const auto& G = *N.parent;
  for (int g = 0; g < G.order(); ++g)
    require(same_subgroup(conjugate_subgroup(N, g), N), "NotNormal",
            "conjugation by " + std::to_string(g));
  auto cosets = left_cosets(N);
  const int k = static_cast<int>(cosets.size());
  std::vector<int> coset_of(G.order());
  std::vector<int> reps(k);
  for (int i = 0; i < k; ++i) {
    reps[i] = cosets[i].front();
    for (int x : cosets[i]) coset_of[x] = i;
  }
  std::vector<std::vector<int>> rows(k, std::vector<int>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) rows[i][j] = coset_of[G.mul(reps[i], reps[j])];
  GroupPtr Q = group_from_table(rows);
  GroupHom proj{N.parent, Q, coset_of};
  return QuotientResult{Q, std::move(proj), std::move(reps)};
}

}  // namespace cogs
