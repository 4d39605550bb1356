#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cogs/error.hpp"

namespace cogs {

class Scwol;
using ScwolPtr = std::shared_ptr<const Scwol>;

struct ScwolEdge {
  int id;
  int i;  // initial vertex
  int t;  // terminal vertex
};

// Small category without loops: vertices, directed edges with i(a) != t(a),
// and a composition ab defined exactly when i(a) = t(b), satisfying
// i(ab) = i(b), t(ab) = t(a) and associativity on composable triples.
class Scwol {
 public:
  const std::vector<int>& vertices() const { return d_vertices; }
  const std::vector<ScwolEdge>& edges() const { return d_edges; }
  const std::map<std::pair<int, int>, int>& composites() const { return d_compose; }

  bool has_vertex(int v) const {
    return std::binary_search(d_vertices.begin(), d_vertices.end(), v);
  }
  bool has_edge(int e) const { return d_epos.count(e) > 0; }
  const ScwolEdge& edge(int e) const { return d_edges[d_epos.at(e)]; }
  int initial(int e) const { return edge(e).i; }
  int terminal(int e) const { return edge(e).t; }

  bool composable(int a, int b) const { return initial(a) == terminal(b); }
  int compose(int a, int b) const { return d_compose.at({a, b}); }

  // edge ids ascending
  const std::vector<int>& star_out(int v) const { return d_star_out.at(v); }
  const std::vector<int>& star_in(int v) const { return d_star_in.at(v); }

  // (a, b) pairs with i(a) = t(b), ascending lexicographically
  std::vector<std::pair<int, int>> composable_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [key, val] : d_compose) out.push_back(key);
    return out;
  }

  bool has_composable_triple() const {
    for (const auto& [key, val] : d_compose)
      if (!d_star_out.at(terminal(key.first)).empty()) return true;
    return false;
  }

  friend ScwolPtr make_scwol(std::vector<int> vertices, std::vector<ScwolEdge> edges,
                             std::map<std::pair<int, int>, int> compose);

 private:
  Scwol() = default;

  std::vector<int> d_vertices;  // sorted
  std::vector<ScwolEdge> d_edges;  // sorted by id
  std::map<std::pair<int, int>, int> d_compose;
  std::map<int, int> d_epos;
  std::map<int, std::vector<int>> d_star_out;
  std::map<int, std::vector<int>> d_star_in;
};

inline ScwolPtr make_scwol(std::vector<int> vertices, std::vector<ScwolEdge> edges,
                           std::map<std::pair<int, int>, int> compose) {
  auto s = std::shared_ptr<Scwol>(new Scwol());
  std::sort(vertices.begin(), vertices.end());
  require(std::adjacent_find(vertices.begin(), vertices.end()) == vertices.end(),
          "DuplicateVertex", "vertex ids must be unique");
  std::sort(edges.begin(), edges.end(),
            [](const ScwolEdge& x, const ScwolEdge& y) { return x.id < y.id; });
  s->d_vertices = std::move(vertices);
  for (int v : s->d_vertices) {
    s->d_star_out[v] = {};
    s->d_star_in[v] = {};
  }
  for (size_t k = 0; k < edges.size(); ++k) {
    const ScwolEdge& e = edges[k];
    require(k == 0 || edges[k - 1].id != e.id, "DuplicateEdge", std::to_string(e.id));
    require(s->has_vertex(e.i) && s->has_vertex(e.t), "UnknownVertex",
            "edge " + std::to_string(e.id));
    require(e.i != e.t, "LoopEdge", "edge " + std::to_string(e.id));
    s->d_epos[e.id] = static_cast<int>(k);
    s->d_star_out[e.i].push_back(e.id);
    s->d_star_in[e.t].push_back(e.id);
  }
  s->d_edges = std::move(edges);

  for (const auto& [key, ab] : compose) {
    auto [a, b] = key;
    require(s->has_edge(a) && s->has_edge(b) && s->has_edge(ab), "UnknownEdge",
            "composite (" + std::to_string(a) + "," + std::to_string(b) + ")");
    require(s->initial(a) == s->terminal(b), "BadComposite",
            "(" + std::to_string(a) + "," + std::to_string(b) + ") not composable");
    require(s->initial(ab) == s->initial(b) && s->terminal(ab) == s->terminal(a),
            "BadComposite",
            "endpoints of " + std::to_string(ab) + " do not match (" +
                std::to_string(a) + "," + std::to_string(b) + ")");
  }
  s->d_compose = std::move(compose);
  for (const ScwolEdge& a : s->d_edges)
    for (int b : s->d_star_in[a.i])
      require(s->d_compose.count({a.id, b}) > 0, "MissingComposite",
              "(" + std::to_string(a.id) + "," + std::to_string(b) + ")");
  // associativity (ab)c = a(bc) over composable triples
  for (const auto& [key, ab] : s->d_compose) {
    auto [a, b] = key;
    for (int c : s->d_star_in.at(s->initial(b))) {
      int bc = s->d_compose.at({b, c});
      require(s->d_compose.at({ab, c}) == s->d_compose.at({a, bc}), "NotAssociative",
              "(" + std::to_string(a) + "," + std::to_string(b) + "," +
                  std::to_string(c) + ")");
    }
  }
  return s;
}

// Morphism of scwols: commutes with i and t, preserves composition, and is
// bijective on each outgoing star (non-degeneracy).
struct ScwolMorphism {
  ScwolPtr source;
  ScwolPtr target;
  std::map<int, int> vmap;
  std::map<int, int> emap;

  int v(int x) const { return vmap.at(x); }
  int e(int x) const { return emap.at(x); }
};

inline void validate_scwol_morphism(const ScwolMorphism& f) {
  for (int v : f.source->vertices()) {
    require(f.vmap.count(v) > 0, "MissingImage", "vertex " + std::to_string(v));
    require(f.target->has_vertex(f.vmap.at(v)), "UnknownVertex",
            "image of vertex " + std::to_string(v));
  }
  for (const ScwolEdge& a : f.source->edges()) {
    require(f.emap.count(a.id) > 0, "MissingImage", "edge " + std::to_string(a.id));
    int fa = f.emap.at(a.id);
    require(f.target->has_edge(fa), "UnknownEdge",
            "image of edge " + std::to_string(a.id));
    require(f.target->initial(fa) == f.vmap.at(a.i) &&
                f.target->terminal(fa) == f.vmap.at(a.t),
            "IncidenceBroken", "edge " + std::to_string(a.id));
  }
  for (const auto& [key, ab] : f.source->composites()) {
    auto [a, b] = key;
    require(f.target->compose(f.emap.at(a), f.emap.at(b)) == f.emap.at(ab),
            "CompositeBroken",
            "(" + std::to_string(a) + "," + std::to_string(b) + ")");
  }
  for (int v : f.source->vertices()) {
    const auto& star = f.source->star_out(v);
    const auto& image_star = f.target->star_out(f.vmap.at(v));
    std::set<int> images;
    for (int a : star) images.insert(f.emap.at(a));
    require(images.size() == star.size() && images.size() == image_star.size(),
            "StarNotBijective", "vertex " + std::to_string(v));
  }
}

inline bool scwol_morphism_surjective(const ScwolMorphism& f) {
  std::set<int> vs, es;
  for (const auto& [k, v] : f.vmap) vs.insert(v);
  for (const auto& [k, v] : f.emap) es.insert(v);
  return vs.size() == f.target->vertices().size() &&
         es.size() == f.target->edges().size();
}

inline bool scwol_morphism_bijective(const ScwolMorphism& f) {
  return scwol_morphism_surjective(f) &&
         f.source->vertices().size() == f.target->vertices().size() &&
         f.source->edges().size() == f.target->edges().size();
}

inline ScwolMorphism identity_scwol_morphism(ScwolPtr s) {
  ScwolMorphism f{s, s, {}, {}};
  for (int v : s->vertices()) f.vmap[v] = v;
  for (const ScwolEdge& e : s->edges()) f.emap[e.id] = e.id;
  return f;
}

// outer . inner
inline ScwolMorphism compose_scwol_morphisms(const ScwolMorphism& outer,
                                             const ScwolMorphism& inner) {
  require(inner.target == outer.source, "NotComposable", "scwol morphisms");
  ScwolMorphism f{inner.source, outer.target, {}, {}};
  for (const auto& [k, v] : inner.vmap) f.vmap[k] = outer.vmap.at(v);
  for (const auto& [k, v] : inner.emap) f.emap[k] = outer.emap.at(v);
  return f;
}

// Breadth-first spanning tree of the undirected incidence graph. Neighbors are
// explored by ascending edge id, which pins down the tree and all derived
// representative paths.
struct SpanningTree {
  ScwolPtr scwol;
  int root = -1;
  std::map<int, int> parent;    // vertex -> parent vertex (root absent)
  std::map<int, int> via_edge;  // vertex -> connecting edge id
  std::map<int, bool> forward;  // true when the edge runs parent -> vertex
  std::vector<int> bfs_order;
  std::set<int> tree_edges;

  bool contains_edge(int e) const { return tree_edges.count(e) > 0; }
};

inline SpanningTree spanning_tree(ScwolPtr s, int root) {
  require(s->has_vertex(root), "UnknownVertex", std::to_string(root));
  SpanningTree T;
  T.scwol = s;
  T.root = root;
  std::set<int> seen{root};
  T.bfs_order.push_back(root);
  for (size_t head = 0; head < T.bfs_order.size(); ++head) {
    int v = T.bfs_order[head];
    std::vector<int> incident = s->star_out(v);
    const auto& in = s->star_in(v);
    incident.insert(incident.end(), in.begin(), in.end());
    std::sort(incident.begin(), incident.end());
    for (int e : incident) {
      bool fwd = s->initial(e) == v;  // v -> other runs along the edge
      int other = fwd ? s->terminal(e) : s->initial(e);
      if (seen.insert(other).second) {
        T.parent[other] = v;
        T.via_edge[other] = e;
        T.forward[other] = fwd;
        T.tree_edges.insert(e);
        T.bfs_order.push_back(other);
      }
    }
  }
  if (seen.size() != s->vertices().size()) {
    std::string missing;
    for (int v : s->vertices())
      if (!seen.count(v)) missing += (missing.empty() ? "" : ",") + std::to_string(v);
    fail("Disconnected", "unreached vertices " + missing);
  }
  return T;
}

// Oriented steps (edge id, traversed forward?) from the root to v.
inline std::vector<std::pair<int, bool>> tree_path(const SpanningTree& T, int v) {
  require(T.scwol->has_vertex(v), "UnknownVertex", std::to_string(v));
  std::vector<std::pair<int, bool>> steps;
  while (v != T.root) {
    steps.emplace_back(T.via_edge.at(v), T.forward.at(v));
    v = T.parent.at(v);
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

}  // namespace cogs
