#pragma once

// In-memory constructions shared by the test binaries, mirroring the files in
// data/, plus small randomization helpers for path fuzzing.

#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cogs/development.hpp"
#include "cogs/presentation.hpp"
#include "cogs/xpath.hpp"

namespace corpus {

using namespace cogs;

inline std::string data_path(const std::string& name) {
  return std::string(COGS_DATA_DIR) + "/" + name;
}

inline GroupPtr one() { return group_from_table({{0}}); }
inline GroupPtr z2() { return group_from_permutations(2, {{1, 0}}); }
inline GroupPtr z4() { return group_from_permutations(4, {{1, 2, 3, 0}}); }
inline GroupPtr klein() {
  return group_from_permutations(4, {{1, 0, 2, 3}, {0, 1, 3, 2}});
}

// generated by the reflections i -> -i and i -> 1-i; order 2m
inline GroupPtr dihedral(int m) {
  std::vector<int> r1(m), r2(m);
  for (int i = 0; i < m; ++i) {
    r1[i] = ((-i) % m + m) % m;
    r2[i] = ((1 - i) % m + m) % m;
  }
  return group_from_permutations(m, {r1, r2});
}

// Barycentric triangle scwol: 0 the face, 1..3 the edges, 4..6 the corners.
inline ScwolPtr triangle_scwol() {
  std::vector<int> vs{0, 1, 2, 3, 4, 5, 6};
  std::vector<ScwolEdge> es{{0, 0, 1}, {1, 0, 2}, {2, 0, 3},  {3, 0, 4},
                            {4, 0, 5}, {5, 0, 6}, {6, 1, 4},  {7, 1, 5},
                            {8, 2, 4}, {9, 2, 6}, {10, 3, 5}, {11, 3, 6}};
  std::map<std::pair<int, int>, int> comp{{{6, 0}, 3},  {{7, 0}, 4}, {{8, 1}, 3},
                                          {{9, 1}, 5},  {{10, 2}, 4}, {{11, 2}, 5}};
  return make_scwol(std::move(vs), std::move(es), std::move(comp));
}

// Triangle of groups for the (2,3,m) reflection triangle; its fundamental
// group is the full (2,3,m) triangle group.
inline CogPtr triangle_cog(int m) {
  ScwolPtr S = triangle_scwol();
  GroupPtr e = one(), c2 = z2(), v12 = klein(), v13 = dihedral(3), v23 = dihedral(m);
  std::map<int, GroupPtr> local{{0, e},   {1, c2},  {2, c2}, {3, c2},
                                {4, v12}, {5, v13}, {6, v23}};
  auto into = [&](const GroupPtr& src, const GroupPtr& dst, int g) {
    return GroupHom{src, dst, {FiniteGroup::kId, g}};
  };
  std::map<int, GroupHom> psi;
  for (int a = 0; a < 6; ++a) psi[a] = GroupHom{e, local.at(S->terminal(a)), {0}};
  psi[6] = into(c2, v12, 1);
  psi[7] = into(c2, v13, 1);
  psi[8] = into(c2, v12, 2);
  psi[9] = into(c2, v23, 1);
  psi[10] = into(c2, v13, 2);
  psi[11] = into(c2, v23, 2);
  std::map<std::pair<int, int>, int> twist;
  for (const auto& [key, ab] : S->composites()) twist[key] = FiniteGroup::kId;
  return make_cog(S, std::move(local), std::move(psi), std::move(twist));
}

// Z/2 -> Z/4 over a single edge; the fundamental group Z/4 acts on the
// development with kernel {0, 2}.
inline CogPtr segment_z4_cog() {
  ScwolPtr S = make_scwol({0, 1}, {{0, 0, 1}}, {});
  GroupPtr a = z2(), b = z4();
  std::map<int, GroupPtr> local{{0, a}, {1, b}};
  std::map<int, GroupHom> psi{{0, GroupHom{a, b, {0, 2}}}};
  return make_cog(S, std::move(local), std::move(psi), {});
}

// Six-vertex triangulation of the projective plane with trivial groups:
// cells 0..9 faces, 10..24 edges (pairs lexicographic), 25..30 vertices.
inline CogPtr rp2_cog() {
  static const int kFaces[10][3] = {{1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 6},
                                    {1, 2, 6}, {2, 3, 5}, {3, 4, 6}, {2, 4, 5},
                                    {3, 5, 6}, {2, 4, 6}};
  std::map<std::pair<int, int>, int> eid;
  int next = 10;
  for (int u = 1; u <= 6; ++u)
    for (int v = u + 1; v <= 6; ++v) eid[{u, v}] = next++;
  auto vid = [](int u) { return 24 + u; };
  std::vector<int> vs;
  for (int i = 0; i < 31; ++i) vs.push_back(i);
  std::vector<ScwolEdge> es;
  std::map<std::pair<int, int>, int> fe, fv, ev;
  for (int f = 0; f < 10; ++f) {
    int a = kFaces[f][0], b = kFaces[f][1], c = kFaces[f][2];
    for (auto [u, v] : {std::pair{a, b}, std::pair{a, c}, std::pair{b, c}}) {
      int id = static_cast<int>(es.size());
      es.push_back({id, f, eid.at({u, v})});
      fe[{f, eid.at({u, v})}] = id;
    }
  }
  for (int f = 0; f < 10; ++f)
    for (int k = 0; k < 3; ++k) {
      int id = static_cast<int>(es.size());
      es.push_back({id, f, vid(kFaces[f][k])});
      fv[{f, vid(kFaces[f][k])}] = id;
    }
  for (int u = 1; u <= 6; ++u)
    for (int v = u + 1; v <= 6; ++v)
      for (int w : {u, v}) {
        int id = static_cast<int>(es.size());
        es.push_back({id, eid.at({u, v}), vid(w)});
        ev[{eid.at({u, v}), vid(w)}] = id;
      }
  std::map<std::pair<int, int>, int> comp;
  for (int f = 0; f < 10; ++f) {
    int a = kFaces[f][0], b = kFaces[f][1], c = kFaces[f][2];
    for (auto [u, v] : {std::pair{a, b}, std::pair{a, c}, std::pair{b, c}}) {
      int ec = eid.at({u, v});
      comp[{ev.at({ec, vid(u)}), fe.at({f, ec})}] = fv.at({f, vid(u)});
      comp[{ev.at({ec, vid(v)}), fe.at({f, ec})}] = fv.at({f, vid(v)});
    }
  }
  return trivial_cog(make_scwol(vs, es, comp));
}

// Smallest subgroup of the requested order found by scanning generators in id
// order (ids are deterministic, so the choice is reproducible).
inline std::optional<Subgroup> subgroup_of_order(const GroupPtr& G, int want) {
  if (want == 1) return trivial_subgroup(G);
  for (int a = 0; a < G->order(); ++a) {
    Subgroup s = subgroup_generated(G, {a});
    if (s.order() == want) return s;
  }
  for (int a = 0; a < G->order(); ++a)
    for (int b = a + 1; b < G->order(); ++b) {
      Subgroup s = subgroup_generated(G, {a, b});
      if (s.order() == want) return s;
    }
  return std::nullopt;
}

// --------------------------------------------------------------------------
// Random paths and random moves.
// --------------------------------------------------------------------------

inline int pick(std::mt19937& rng, int n) {
  return static_cast<int>(rng() % static_cast<unsigned>(n));
}

inline XPath random_xpath(const CogPtr& cog, std::mt19937& rng, int max_len) {
  const Scwol& S = *cog->base;
  const auto& vs = S.vertices();
  int start = vs[pick(rng, static_cast<int>(vs.size()))];
  int v = start;
  std::vector<int> elts{pick(rng, cog->group_at(v)->order())};
  std::vector<OrientedEdge> edges;
  int len = pick(rng, max_len + 1);
  for (int step = 0; step < len; ++step) {
    std::vector<OrientedEdge> options;
    for (int a : S.star_out(v)) options.push_back({a, true});
    for (int a : S.star_in(v)) options.push_back({a, false});
    if (options.empty()) break;
    OrientedEdge e = options[pick(rng, static_cast<int>(options.size()))];
    edges.push_back(e);
    v = e.plus ? S.terminal(e.edge) : S.initial(e.edge);
    elts.push_back(pick(rng, cog->group_at(v)->order()));
  }
  return make_xpath(cog, start, elts, edges);
}

// Every applicable move at p, with group parameters sampled at random (one
// sample per structural choice keeps the list small).
inline std::vector<Move> applicable_moves(const XPath& p, std::mt19937& rng) {
  const Scwol& S = *p.cog->base;
  std::vector<Move> out;
  for (int j = 0; j < p.length(); ++j) {
    const OrientedEdge& e = p.edges[j];
    const GroupHom& psi = p.cog->psi_at(e.edge);
    if (e.plus) {
      out.push_back({MoveKind::Ia, j, false, {pick(rng, psi.source->order())}});
    } else {
      out.push_back({MoveKind::Ib, j, false, {pick(rng, psi.source->order())}});
    }
  }
  for (int j = 0; j + 2 <= p.length(); ++j) {
    const OrientedEdge& e1 = p.edges[j];
    const OrientedEdge& e2 = p.edges[j + 1];
    if (e1.edge == e2.edge && e1.plus && !e2.plus) {
      const GroupHom& psi = p.cog->psi_at(e1.edge);
      for (int u = 0; u < psi.source->order(); ++u)
        if (psi.apply(u) == p.elts[j + 1]) {
          out.push_back({MoveKind::IIa, j, false, {}});
          break;
        }
    }
    if (e1.edge == e2.edge && !e1.plus && e2.plus)
      out.push_back({MoveKind::IIb, j, false, {}});
    if (e1.plus && e2.plus && p.elts[j + 1] == FiniteGroup::kId &&
        S.composable(e2.edge, e1.edge))
      out.push_back({MoveKind::IIIa, j, false, {}});
    if (!e1.plus && !e2.plus && p.elts[j + 1] == FiniteGroup::kId &&
        S.composable(e1.edge, e2.edge))
      out.push_back({MoveKind::IIIb, j, false, {}});
  }
  for (int j = 0; j <= p.length(); ++j) {
    int v = p.vertex_at(j);
    for (int a : S.star_out(v)) {
      const GroupPtr& G = p.cog->psi_at(a).source;
      out.push_back({MoveKind::IIa, j, true,
                     {a, pick(rng, G->order()), pick(rng, G->order())}});
    }
    for (int b : S.star_in(v)) {
      const GroupHom& psi = p.cog->psi_at(b);
      out.push_back({MoveKind::IIb, j, true,
                     {b, pick(rng, psi.target->order()),
                      pick(rng, psi.source->order())}});
    }
  }
  for (int j = 0; j < p.length(); ++j) {
    for (const auto& [key, ab] : S.composites())
      if (ab == p.edges[j].edge)
        out.push_back({p.edges[j].plus ? MoveKind::IIIa : MoveKind::IIIb, j, true,
                       {key.first, key.second}});
  }
  return out;
}

inline XPath random_move(const XPath& p, std::mt19937& rng) {
  std::vector<Move> moves = applicable_moves(p, rng);
  if (moves.empty()) return p;
  return apply_move(p, moves[pick(rng, static_cast<int>(moves.size()))]);
}

// --------------------------------------------------------------------------
// Exhaustive move neighbours and a bounded search for explicit move
// sequences, used to cross-check the algebraic homotopy test.
// --------------------------------------------------------------------------

inline std::string path_key(const XPath& p) {
  std::string k = std::to_string(p.start) + "|";
  for (int g : p.elts) k += std::to_string(g) + ",";
  k += "|";
  for (const OrientedEdge& e : p.edges)
    k += std::to_string(e.edge) + (e.plus ? "+" : "-");
  return k;
}

// All paths one move away, capped: insertion moves are skipped once the
// length budget is reached.
inline std::vector<XPath> move_neighbors(const XPath& p, int max_len) {
  const Scwol& S = *p.cog->base;
  std::vector<XPath> out;
  auto push = [&](const Move& mv) { out.push_back(apply_move(p, mv)); };
  for (int j = 0; j < p.length(); ++j) {
    const OrientedEdge& e = p.edges[j];
    const GroupHom& psi = p.cog->psi_at(e.edge);
    for (int g = 1; g < psi.source->order(); ++g)
      push({e.plus ? MoveKind::Ia : MoveKind::Ib, j, false, {g}});
  }
  for (int j = 0; j + 2 <= p.length(); ++j) {
    const OrientedEdge& e1 = p.edges[j];
    const OrientedEdge& e2 = p.edges[j + 1];
    if (e1.edge == e2.edge && e1.plus && !e2.plus) {
      const GroupHom& psi = p.cog->psi_at(e1.edge);
      for (int u = 0; u < psi.source->order(); ++u)
        if (psi.apply(u) == p.elts[j + 1]) {
          push({MoveKind::IIa, j, false, {}});
          break;
        }
    }
    if (e1.edge == e2.edge && !e1.plus && e2.plus) push({MoveKind::IIb, j, false, {}});
    if (e1.plus && e2.plus && p.elts[j + 1] == FiniteGroup::kId &&
        S.composable(e2.edge, e1.edge))
      push({MoveKind::IIIa, j, false, {}});
    if (!e1.plus && !e2.plus && p.elts[j + 1] == FiniteGroup::kId &&
        S.composable(e1.edge, e2.edge))
      push({MoveKind::IIIb, j, false, {}});
  }
  if (p.length() + 2 <= max_len) {
    for (int j = 0; j <= p.length(); ++j) {
      int v = p.vertex_at(j);
      for (int a : S.star_out(v)) {
        const GroupPtr& G = p.cog->psi_at(a).source;
        for (int g = 0; g < G->order(); ++g)
          for (int h = 0; h < G->order(); ++h)
            push({MoveKind::IIa, j, true, {a, g, h}});
      }
      for (int b : S.star_in(v)) {
        const GroupHom& psi = p.cog->psi_at(b);
        for (int g = 0; g < psi.target->order(); ++g)
          for (int h = 0; h < psi.source->order(); ++h)
            push({MoveKind::IIb, j, true, {b, g, h}});
      }
    }
  }
  if (p.length() + 1 <= max_len) {
    for (int j = 0; j < p.length(); ++j)
      for (const auto& [key, ab] : S.composites())
        if (ab == p.edges[j].edge)
          push({p.edges[j].plus ? MoveKind::IIIa : MoveKind::IIIb, j, true,
                {key.first, key.second}});
  }
  return out;
}

struct MoveSearch {
  bool found = false;
  bool exhausted = false;  // whole bounded ball visited without finding q
  int visited = 0;
};

// Breadth-first search in the move graph from p, looking for q as a literal
// path, over paths of length at most max_len and at most node_cap states.
inline MoveSearch connected_by_moves(const XPath& p, const XPath& q, int max_len,
                                     int node_cap) {
  std::string target = path_key(q);
  std::set<std::string> seen{path_key(p)};
  std::vector<XPath> frontier{p};
  MoveSearch res;
  if (path_key(p) == target) {
    res.found = true;
    return res;
  }
  while (!frontier.empty()) {
    std::vector<XPath> next;
    for (const XPath& cur : frontier) {
      for (XPath& nb : move_neighbors(cur, max_len)) {
        std::string k = path_key(nb);
        if (!seen.insert(k).second) continue;
        ++res.visited;
        if (k == target) {
          res.found = true;
          return res;
        }
        if (res.visited >= node_cap) return res;
        next.push_back(std::move(nb));
      }
    }
    frontier = std::move(next);
  }
  res.exhausted = true;
  return res;
}

}  // namespace corpus
