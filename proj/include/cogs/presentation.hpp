#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cogs/cog.hpp"
#include "cogs/xpath.hpp"

namespace cogs {

// ---------------------------------------------------------------------------
// Coset enumeration (HLT style: relator scan-and-fill with a coincidence
// queue, deterministic definition order).  Letters are signed nonzero ints:
// +(i+1) is generator i, -(i+1) its inverse.
// ---------------------------------------------------------------------------

struct CosetEnumeration {
  bool complete = false;
  int created = 0;                      // cosets defined before stopping
  std::vector<std::vector<int>> table;  // [coset][column], compressed
  int ngens = 0;

  int size() const { return static_cast<int>(table.size()); }
  static int column(int letter) {
    return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1;
  }
  static int letter_of_column(int col) {
    return (col % 2 == 0) ? col / 2 + 1 : -(col / 2 + 1);
  }
  int trace(int coset, const std::vector<int>& word) const {
    for (int l : word) coset = table[coset][column(l)];
    return coset;
  }
};

namespace detail {

struct TcLimitReached {};

class Enumerator {
 public:
  Enumerator(int ngens, int limit) : d_cols(2 * ngens), d_limit(limit) {
    new_coset();
  }

  int new_coset() {
    if (static_cast<int>(d_tab.size()) >= d_limit) throw TcLimitReached{};
    d_tab.emplace_back(d_cols, -1);
    d_p.push_back(static_cast<int>(d_p.size()));
    return static_cast<int>(d_tab.size()) - 1;
  }

  int rep(int c) {
    int r = c;
    while (d_p[r] != r) r = d_p[r];
    while (d_p[c] != r) { int n = d_p[c]; d_p[c] = r; c = n; }
    return r;
  }

  int get(int c, int col) {
    int e = d_tab[c][col];
    if (e < 0) return -1;
    e = rep(e);
    d_tab[c][col] = e;
    return e;
  }

  void set(int c, int col, int d) {
    d_tab[c][col] = d;
    d_tab[d][col ^ 1] = c;
  }

  void join(int a, int b) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    d_p[b] = a;
    d_dead.push_back(b);
  }

  void process_coincidences() {
    for (size_t qi = 0; qi < d_dead.size(); ++qi) {
      int d = d_dead[qi];
      for (int col = 0; col < d_cols; ++col) {
        int e = d_tab[d][col];
        if (e < 0) continue;
        d_tab[d][col] = -1;
        int ee = rep(e);
        int m = rep(d);
        int cur = d_tab[m][col];
        if (cur < 0) {
          d_tab[m][col] = ee;
        } else if (rep(cur) != ee) {
          join(cur, ee);
        }
      }
    }
    d_dead.clear();
  }

  // Scan relator (given as column sequence) at coset c, defining cosets to
  // close any gap wider than one.
  void scan_and_fill(int c, const std::vector<int>& cols) {
    if (cols.empty()) return;
    int len = static_cast<int>(cols.size());
    int f = c, b = c, i = 0, j = len - 1;
    while (true) {
      while (i <= j) {
        int n = get(f, cols[i]);
        if (n < 0) break;
        f = n;
        ++i;
      }
      if (i > j) {
        if (f != b) { join(f, b); process_coincidences(); }
        return;
      }
      while (j >= i) {
        int n = get(b, cols[j] ^ 1);
        if (n < 0) break;
        b = n;
        --j;
      }
      if (j < i) {
        if (f != b) { join(f, b); process_coincidences(); }
        return;
      }
      if (j == i) {
        set(f, cols[i], b);
        return;
      }
      int n = new_coset();
      set(f, cols[i], n);
      f = n;
      ++i;
    }
  }

  bool alive(int c) { return rep(c) == c; }

  std::vector<std::vector<int>> d_tab;
  std::vector<int> d_p;
  std::vector<int> d_dead;
  int d_cols;
  int d_limit;
};

}  // namespace detail

inline CosetEnumeration enumerate_cosets(
    int ngens, const std::vector<std::vector<int>>& relators,
    const std::vector<std::vector<int>>& subgroup_words = {}, int limit = 20000) {
  CosetEnumeration out;
  out.ngens = ngens;
  std::vector<std::vector<int>> rel_cols;
  for (const auto& r : relators) {
    std::vector<int> cols;
    for (int l : r) {
      require(l != 0 && std::abs(l) <= ngens, "MalformedWord",
              "letter " + std::to_string(l));
      cols.push_back(CosetEnumeration::column(l));
    }
    rel_cols.push_back(std::move(cols));
  }
  std::vector<std::vector<int>> sub_cols;
  for (const auto& w : subgroup_words) {
    std::vector<int> cols;
    for (int l : w) {
      require(l != 0 && std::abs(l) <= ngens, "MalformedWord",
              "letter " + std::to_string(l));
      cols.push_back(CosetEnumeration::column(l));
    }
    sub_cols.push_back(std::move(cols));
  }

  detail::Enumerator E(ngens, limit);
  try {
    for (const auto& w : sub_cols) {
      E.scan_and_fill(E.rep(0), w);
      E.process_coincidences();
    }
    for (int idx = 0; idx < static_cast<int>(E.d_tab.size()); ++idx) {
      if (!E.alive(idx)) continue;
      bool died = false;
      for (const auto& r : rel_cols) {
        E.scan_and_fill(idx, r);
        E.process_coincidences();
        if (!E.alive(idx)) { died = true; break; }
      }
      if (died) continue;
      for (int col = 0; col < E.d_cols && E.alive(idx); ++col) {
        if (E.get(idx, col) < 0) {
          int n = E.new_coset();
          E.set(idx, col, n);
        }
      }
    }
  } catch (detail::TcLimitReached&) {
    out.created = static_cast<int>(E.d_tab.size());
    return out;
  }

  // compress live cosets, then validate the result: the table must be a
  // complete, mutually inverse action under which every relator closes.
  std::vector<int> newid(E.d_tab.size(), -1);
  int nlive = 0;
  for (int c = 0; c < static_cast<int>(E.d_tab.size()); ++c)
    if (E.alive(c)) newid[c] = nlive++;
  out.table.assign(nlive, std::vector<int>(E.d_cols, -1));
  for (int c = 0; c < static_cast<int>(E.d_tab.size()); ++c) {
    if (newid[c] < 0) continue;
    for (int col = 0; col < E.d_cols; ++col) {
      int e = E.get(c, col);
      require(e >= 0, "EnumerationInconsistent", "incomplete row survived");
      out.table[newid[c]][col] = newid[e];
    }
  }
  for (int c = 0; c < nlive; ++c)
    for (int col = 0; col < E.d_cols; ++col)
      require(out.table[out.table[c][col]][col ^ 1] == c, "EnumerationInconsistent",
              "table not mutually inverse");
  for (int c = 0; c < nlive; ++c)
    for (const auto& r : rel_cols) {
      int d = c;
      for (int col : r) d = out.table[d][col];
      require(d == c, "EnumerationInconsistent", "relator does not close");
    }
  for (const auto& w : sub_cols) {
    int d = 0;
    for (int col : w) d = out.table[d][col];
    require(d == 0, "EnumerationInconsistent", "subgroup word does not close");
  }
  out.complete = true;
  out.created = static_cast<int>(E.d_tab.size());
  return out;
}

// Shortest representative words (BFS from coset 0, columns in ascending
// order) for each coset.
inline std::vector<std::vector<int>> coset_rep_words(const CosetEnumeration& e) {
  std::vector<std::vector<int>> words(e.size());
  std::vector<bool> seen(e.size(), false);
  std::deque<int> q{0};
  seen[0] = true;
  while (!q.empty()) {
    int c = q.front();
    q.pop_front();
    for (int col = 0; col < 2 * e.ngens; ++col) {
      int d = e.table[c][col];
      if (seen[d]) continue;
      seen[d] = true;
      words[d] = words[c];
      words[d].push_back(CosetEnumeration::letter_of_column(col));
      q.push_back(d);
    }
  }
  for (bool s : seen)
    require(s, "EnumerationInconsistent", "coset graph not connected");
  return words;
}

// ---------------------------------------------------------------------------
// Fundamental group presentation of a complex of groups relative to a
// spanning tree: generators x_{sigma,g} (one per nontrivial local element)
// and t_a (one per edge); relators for local multiplication, edge slides,
// composite shortcuts, and killed tree edges.
// ---------------------------------------------------------------------------

struct PresGenerator {
  bool is_edge = false;
  int sigma_or_edge = -1;
  int g = -1;  // only for local generators
};

struct Pi1Presentation {
  CogPtr cog;
  int basepoint = -1;
  SpanningTree tree;
  std::vector<PresGenerator> gens;
  std::map<std::pair<int, int>, int> local_gen;  // (sigma, g) -> generator index
  std::map<int, int> edge_gen;                   // edge -> generator index
  std::vector<std::vector<int>> relators;        // signed letters

  int x(int sigma, int g) const { return local_gen.at({sigma, g}); }
  int t(int a) const { return edge_gen.at(a); }
};

inline Pi1Presentation build_presentation(CogPtr cog, int basepoint) {
  Pi1Presentation P;
  P.cog = cog;
  P.basepoint = basepoint;
  P.tree = spanning_tree(cog->base, basepoint);
  for (int sigma : cog->base->vertices())
    for (int g = 1; g < cog->group_at(sigma)->order(); ++g) {
      P.local_gen[{sigma, g}] = static_cast<int>(P.gens.size());
      P.gens.push_back({false, sigma, g});
    }
  for (const ScwolEdge& a : cog->base->edges()) {
    P.edge_gen[a.id] = static_cast<int>(P.gens.size());
    P.gens.push_back({true, a.id, -1});
  }
  auto X = [&](int sigma, int g) { return P.x(sigma, g) + 1; };
  auto T = [&](int a) { return P.t(a) + 1; };
  // local multiplication: x_{s,g} x_{s,h} = x_{s,gh}
  for (int sigma : cog->base->vertices()) {
    const auto& G = *cog->group_at(sigma);
    for (int g = 1; g < G.order(); ++g)
      for (int h = 1; h < G.order(); ++h) {
        std::vector<int> w{X(sigma, g), X(sigma, h)};
        if (int gh = G.mul(g, h); gh != FiniteGroup::kId) w.push_back(-X(sigma, gh));
        P.relators.push_back(std::move(w));
      }
  }
  // edge slide: t_a^-1 x_{i(a),g} t_a = x_{t(a),psi_a(g)}
  for (const ScwolEdge& a : cog->base->edges()) {
    const GroupHom& psi = cog->psi_at(a.id);
    for (int g = 1; g < psi.source->order(); ++g)
      P.relators.push_back(
          {-T(a.id), X(a.i, g), T(a.id), -X(a.t, psi.apply(g))});
  }
  // shortcut: t_b t_a x_{t(a),g_{a,b}} = t_{ab}
  for (const auto& [key, ab] : cog->base->composites()) {
    auto [a, b] = key;
    std::vector<int> w{T(b), T(a)};
    int tw = cog->twist_at(a, b);
    if (tw != FiniteGroup::kId) w.push_back(X(cog->base->terminal(a), tw));
    w.push_back(-T(ab));
    P.relators.push_back(std::move(w));
  }
  // killed tree edges
  for (const ScwolEdge& a : cog->base->edges())
    if (P.tree.contains_edge(a.id)) P.relators.push_back({T(a.id)});
  return P;
}

// X-path from the basepoint to v along the spanning tree (identity elements).
inline XPath tree_xpath(const Pi1Presentation& P, int v) {
  XPath p = constant_path(P.cog, P.basepoint);
  for (auto [edge, fwd] : tree_path(P.tree, v))
    p = concat(p, edge_path(P.cog, {edge, fwd}));
  return p;
}

// Word of a path: element g at sigma contributes x_{sigma,g} (nothing for the
// identity), a forward edge contributes t_a, a backward edge t_a^-1.
inline std::vector<int> word_of_path(const Pi1Presentation& P, const XPath& p) {
  require(p.cog == P.cog, "WrongCog", "path lives in a different complex");
  std::vector<int> w;
  for (int j = 0; j <= p.length(); ++j) {
    if (p.elts[j] != FiniteGroup::kId)
      w.push_back(P.x(p.vertex_at(j), p.elts[j]) + 1);
    if (j < p.length()) {
      int l = P.t(p.edges[j].edge) + 1;
      w.push_back(p.edges[j].plus ? l : -l);
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Enumerated fundamental group.
// ---------------------------------------------------------------------------

struct Pi1Group {
  Pi1Presentation pres;
  GroupPtr group;
  std::vector<std::vector<int>> rep_words;  // element -> word in the generators
  std::vector<int> gen_image;               // generator index -> element
  std::map<int, int> s_edge;                // edge a -> image of t_a
  std::map<int, GroupHom> iota;             // sigma -> G_sigma -> group
};

struct Pi1Outcome {
  bool complete = false;
  int cosets_at_limit = 0;
  std::optional<Pi1Group> pi1;
};

inline int eval_word(const Pi1Group& G, const std::vector<int>& word) {
  int e = FiniteGroup::kId;
  for (int l : word) {
    int img = G.gen_image[std::abs(l) - 1];
    e = G.group->mul(e, l > 0 ? img : G.group->inv(img));
  }
  return e;
}

inline Pi1Outcome compute_pi1(CogPtr cog, int basepoint, int limit = 20000) {
  Pi1Presentation P = build_presentation(cog, basepoint);
  CosetEnumeration e =
      enumerate_cosets(static_cast<int>(P.gens.size()), P.relators, {}, limit);
  if (!e.complete) return {false, e.created, std::nullopt};
  int n = e.size();
  require(n <= FiniteGroup::kMaxOrder, "TooLarge",
          "fundamental group has order " + std::to_string(n));
  auto words = coset_rep_words(e);
  std::vector<std::vector<int>> mult(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) mult[a][b] = e.trace(a, words[b]);
  Pi1Group G;
  G.pres = std::move(P);
  G.group = group_from_table(mult);
  G.rep_words = std::move(words);
  for (size_t i = 0; i < G.pres.gens.size(); ++i)
    G.gen_image.push_back(e.table[0][2 * static_cast<int>(i)]);
  for (const ScwolEdge& a : cog->base->edges())
    G.s_edge[a.id] = G.gen_image[G.pres.t(a.id)];
  for (int sigma : cog->base->vertices()) {
    GroupHom h{cog->group_at(sigma), G.group,
               std::vector<int>(cog->group_at(sigma)->order(), FiniteGroup::kId)};
    for (int g = 1; g < cog->group_at(sigma)->order(); ++g)
      h.image[g] = G.gen_image[G.pres.x(sigma, g)];
    validate_hom(h);
    G.iota[sigma] = std::move(h);
  }
  Pi1Outcome out;
  out.complete = true;
  out.cosets_at_limit = e.created;
  out.pi1 = std::move(G);
  return out;
}

// kappa_T: class of p_{i(p)} * p * p_{t(p)}^-1 in the enumerated group.
inline int class_of_path(const Pi1Group& G, const XPath& p) {
  std::vector<int> w = word_of_path(G.pres, tree_xpath(G.pres, p.initial()));
  std::vector<int> mid = word_of_path(G.pres, p);
  std::vector<int> back =
      word_of_path(G.pres, inverse_path(tree_xpath(G.pres, p.terminal())));
  w.insert(w.end(), mid.begin(), mid.end());
  w.insert(w.end(), back.begin(), back.end());
  return eval_word(G, w);
}

// Two paths are homotopic (relative to their endpoints) iff their endpoints
// agree and their classes agree.
inline bool are_homotopic(const Pi1Group& G, const XPath& p, const XPath& q) {
  return p.initial() == q.initial() && p.terminal() == q.terminal() &&
         class_of_path(G, p) == class_of_path(G, q);
}

// A path from `from` to `to` whose class is exactly `e`: conjugate the lift
// of a representative word of e by the tree paths.
inline XPath path_with_class(const Pi1Group& G, int from, int to, int e) {
  const Pi1Presentation& P = G.pres;
  XPath lift = constant_path(P.cog, P.basepoint);
  for (int l : G.rep_words.at(e)) {
    const PresGenerator& gen = P.gens[std::abs(l) - 1];
    XPath atom = constant_path(P.cog, P.basepoint);
    if (!gen.is_edge) {
      int sigma = gen.sigma_or_edge;
      int g = l > 0 ? gen.g : P.cog->group_at(sigma)->inv(gen.g);
      atom = concat(concat(tree_xpath(P, sigma), constant_path(P.cog, sigma, g)),
                    inverse_path(tree_xpath(P, sigma)));
    } else {
      int a = gen.sigma_or_edge;
      XPath mid = edge_path(P.cog, {a, l > 0});
      atom = concat(concat(tree_xpath(P, mid.initial()), mid),
                    inverse_path(tree_xpath(P, mid.terminal())));
    }
    lift = concat(lift, atom);
  }
  return concat(concat(inverse_path(tree_xpath(P, from)), lift), tree_xpath(P, to));
}

// Developability: every local group must embed in the fundamental group.
struct DevelopabilityWitness {
  bool developable = true;
  int sigma = -1;  // when not developable: iota_sigma kills g
  int g = -1;
};

inline DevelopabilityWitness check_developable(const Pi1Group& G) {
  for (const auto& [sigma, h] : G.iota)
    for (int g = 1; g < h.source->order(); ++g)
      if (h.apply(g) == FiniteGroup::kId) return {false, sigma, g};
  return {};
}

// Transport element along an edge: h_a = s_a^-1 (conjugation by h_a realizes
// psi_a inside the fundamental group: iota_{t(a)}(psi_a(g)) =
// h_a iota_{i(a)}(g) h_a^-1).
inline int h_edge(const Pi1Group& G, int a) { return G.group->inv(G.s_edge.at(a)); }

}  // namespace cogs
