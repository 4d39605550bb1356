#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cogs/cog.hpp"

namespace cogs {

struct OrientedEdge {
  int edge = -1;
  bool plus = true;  // true: i(a) -> t(a); false: t(a) -> i(a)

  bool operator==(const OrientedEdge& o) const {
    return edge == o.edge && plus == o.plus;
  }
};

// Path in a complex of groups: (g_0, e_1, g_1, ..., e_k, g_k) where the e_j
// are oriented edges forming a chain of vertices v_0, ..., v_k and each g_j
// lies in the local group at v_j.
class XPath {
 public:
  CogPtr cog;
  int start = -1;
  std::vector<int> elts;            // g_0 .. g_k
  std::vector<OrientedEdge> edges;  // e_1 .. e_k

  int length() const { return static_cast<int>(edges.size()); }
  int initial() const { return start; }
  int terminal() const { return vertex_at(length()); }

  // Vertex v_j after traversing j edges.
  int vertex_at(int j) const {
    int v = start;
    for (int i = 0; i < j; ++i) {
      const ScwolEdge& a = cog->base->edge(edges[i].edge);
      v = edges[i].plus ? a.t : a.i;
    }
    return v;
  }

  bool operator==(const XPath& o) const {
    return cog == o.cog && start == o.start && elts == o.elts && edges == o.edges;
  }
};

inline XPath make_xpath(CogPtr cog, int start, std::vector<int> elts,
                        std::vector<OrientedEdge> edges) {
  require(cog->base->has_vertex(start), "UnknownVertex", std::to_string(start));
  require(elts.size() == edges.size() + 1, "MalformedPath",
          "need one more element than edges");
  XPath p{std::move(cog), start, std::move(elts), std::move(edges)};
  int v = start;
  for (int j = 0; j <= p.length(); ++j) {
    require(p.elts[j] >= 0 && p.elts[j] < p.cog->group_at(v)->order(),
            "MalformedPath", "element " + std::to_string(j) + " out of range");
    if (j < p.length()) {
      const OrientedEdge& e = p.edges[j];
      require(p.cog->base->has_edge(e.edge), "UnknownEdge", std::to_string(e.edge));
      const ScwolEdge& a = p.cog->base->edge(e.edge);
      int from = e.plus ? a.i : a.t;
      require(from == v, "MalformedPath",
              "edge " + std::to_string(j + 1) + " does not start at v_" +
                  std::to_string(j));
      v = e.plus ? a.t : a.i;
    }
  }
  return p;
}

inline XPath constant_path(CogPtr cog, int vertex, int g = FiniteGroup::kId) {
  return make_xpath(std::move(cog), vertex, {g}, {});
}

inline XPath edge_path(CogPtr cog, OrientedEdge e, int g0 = FiniteGroup::kId,
                       int g1 = FiniteGroup::kId) {
  const ScwolEdge& a = cog->base->edge(e.edge);
  int from = e.plus ? a.i : a.t;
  return make_xpath(std::move(cog), from, {g0, g1}, {e});
}

// (g_0,...,g_k) * (h_0,...,h_l): the junction elements multiply.
inline XPath concat(const XPath& p, const XPath& q) {
  require(p.cog == q.cog, "WrongCog", "paths live in different complexes");
  require(p.terminal() == q.initial(), "EndpointMismatch",
          "t(p) = " + std::to_string(p.terminal()) +
              " but i(q) = " + std::to_string(q.initial()));
  XPath r = p;
  const auto& G = *p.cog->group_at(p.terminal());
  r.elts.back() = G.mul(r.elts.back(), q.elts.front());
  r.elts.insert(r.elts.end(), q.elts.begin() + 1, q.elts.end());
  r.edges.insert(r.edges.end(), q.edges.begin(), q.edges.end());
  return r;
}

inline XPath inverse_path(const XPath& p) {
  XPath r;
  r.cog = p.cog;
  r.start = p.terminal();
  for (int j = p.length(); j >= 0; --j)
    r.elts.push_back(p.cog->group_at(p.vertex_at(j))->inv(p.elts[j]));
  for (int j = p.length() - 1; j >= 0; --j)
    r.edges.push_back({p.edges[j].edge, !p.edges[j].plus});
  return r;
}

// The six elementary moves. `pos` is the index j of the element g_j at which
// the rewriting pattern starts; `inverse` applies the move right-to-left.
//
//   Ia  params {g}:    (..., g_j, a+,  g_{j+1}, ...) ->
//                      (..., g_j g^-1, a+, psi_a(g) g_{j+1}, ...)
//   Ib  params {h}:    (..., g_j, a-,  g_{j+1}, ...) ->
//                      (..., g_j psi_a(h), a-, h^-1 g_{j+1}, ...)
//   IIa params {}:     (g, a+, psi_a(h), a-, k) -> (g h k)
//       inverse {a,g,h}: w -> (g, a+, psi_a(h), a-, h^-1 g^-1 w)
//   IIb params {}:     (g, b-, h, b+, k) -> (g psi_b(h) k)
//       inverse {b,g,h}: w -> (g, b-, h, b+, psi_b(h)^-1 g^-1 w)
//   IIIa params {}:    (g, b+, 1, a+, k) -> (g, (ab)+, g_{a,b}^-1 k)
//       inverse {a,b}: (g, (ab)+, w) -> (g, b+, 1, a+, g_{a,b} w)
//   IIIb params {}:    (g, a-, 1, b-, k) -> (g g_{a,b}, (ab)-, k)
//       inverse {a,b}: (g, (ab)-, w) -> (g g_{a,b}^-1, a-, 1, b-, w)
enum class MoveKind { Ia, Ib, IIa, IIb, IIIa, IIIb };

struct Move {
  MoveKind kind;
  int pos = 0;
  bool inverse = false;
  std::vector<int> params;
};

inline XPath apply_move(const XPath& p, const Move& mv) {
  const Scwol& S = *p.cog->base;
  int j = mv.pos;
  int k = p.length();
  XPath r = p;
  switch (mv.kind) {
    case MoveKind::Ia: {
      require(j >= 0 && j < k, "PatternMismatch", "position out of range");
      const OrientedEdge& e = p.edges[j];
      require(e.plus, "PatternMismatch", "move Ia needs a forward edge");
      const GroupHom& psi = p.cog->psi_at(e.edge);
      require(mv.params.size() == 1, "PatternMismatch", "move Ia takes one parameter");
      int g = mv.params[0];
      require(g >= 0 && g < psi.source->order(), "UnknownElement", std::to_string(g));
      if (mv.inverse) g = psi.source->inv(g);
      const auto& Gi = *psi.source;
      const auto& Gt = *psi.target;
      r.elts[j] = Gi.mul(p.elts[j], Gi.inv(g));
      r.elts[j + 1] = Gt.mul(psi.apply(g), p.elts[j + 1]);
      return r;
    }
    case MoveKind::Ib: {
      require(j >= 0 && j < k, "PatternMismatch", "position out of range");
      const OrientedEdge& e = p.edges[j];
      require(!e.plus, "PatternMismatch", "move Ib needs a backward edge");
      const GroupHom& psi = p.cog->psi_at(e.edge);
      require(mv.params.size() == 1, "PatternMismatch", "move Ib takes one parameter");
      int h = mv.params[0];
      require(h >= 0 && h < psi.source->order(), "UnknownElement", std::to_string(h));
      if (mv.inverse) h = psi.source->inv(h);
      const auto& Gi = *psi.source;
      const auto& Gt = *psi.target;
      r.elts[j] = Gt.mul(p.elts[j], psi.apply(h));
      r.elts[j + 1] = Gi.mul(Gi.inv(h), p.elts[j + 1]);
      return r;
    }
    case MoveKind::IIa: {
      if (!mv.inverse) {
        require(j >= 0 && j + 2 <= k, "PatternMismatch", "position out of range");
        const OrientedEdge& e1 = p.edges[j];
        const OrientedEdge& e2 = p.edges[j + 1];
        require(e1.plus && !e2.plus && e1.edge == e2.edge, "PatternMismatch",
                "move IIa needs (a+, a-)");
        const GroupHom& psi = p.cog->psi_at(e1.edge);
        int h = -1;
        for (int u = 0; u < psi.source->order(); ++u)
          if (psi.apply(u) == p.elts[j + 1]) { h = u; break; }
        require(h >= 0, "NotInImage",
                "middle element is not in the image of psi_" +
                    std::to_string(e1.edge));
        const auto& G = *psi.source;
        r.elts[j] = G.mul(G.mul(p.elts[j], h), p.elts[j + 2]);
        r.elts.erase(r.elts.begin() + j + 1, r.elts.begin() + j + 3);
        r.edges.erase(r.edges.begin() + j, r.edges.begin() + j + 2);
        return r;
      }
      require(mv.params.size() == 3, "PatternMismatch",
              "inverse IIa takes parameters {a, g, h}");
      require(j >= 0 && j <= k, "PatternMismatch", "position out of range");
      int a = mv.params[0], g = mv.params[1], h = mv.params[2];
      require(S.has_edge(a), "UnknownEdge", std::to_string(a));
      int v = p.vertex_at(j);
      require(S.initial(a) == v, "PatternMismatch",
              "edge does not start at the insertion vertex");
      const GroupHom& psi = p.cog->psi_at(a);
      const auto& G = *psi.source;
      require(g >= 0 && g < G.order() && h >= 0 && h < G.order(), "UnknownElement",
              "parameters out of range");
      int tail = G.mul(G.inv(h), G.mul(G.inv(g), p.elts[j]));
      r.elts[j] = g;
      r.elts.insert(r.elts.begin() + j + 1, {psi.apply(h), tail});
      r.edges.insert(r.edges.begin() + j, {{a, true}, {a, false}});
      return r;
    }
    case MoveKind::IIb: {
      if (!mv.inverse) {
        require(j >= 0 && j + 2 <= k, "PatternMismatch", "position out of range");
        const OrientedEdge& e1 = p.edges[j];
        const OrientedEdge& e2 = p.edges[j + 1];
        require(!e1.plus && e2.plus && e1.edge == e2.edge, "PatternMismatch",
                "move IIb needs (b-, b+)");
        const GroupHom& psi = p.cog->psi_at(e1.edge);
        const auto& G = *psi.target;
        r.elts[j] = G.mul(G.mul(p.elts[j], psi.apply(p.elts[j + 1])), p.elts[j + 2]);
        r.elts.erase(r.elts.begin() + j + 1, r.elts.begin() + j + 3);
        r.edges.erase(r.edges.begin() + j, r.edges.begin() + j + 2);
        return r;
      }
      require(mv.params.size() == 3, "PatternMismatch",
              "inverse IIb takes parameters {b, g, h}");
      require(j >= 0 && j <= k, "PatternMismatch", "position out of range");
      int b = mv.params[0], g = mv.params[1], h = mv.params[2];
      require(S.has_edge(b), "UnknownEdge", std::to_string(b));
      int v = p.vertex_at(j);
      require(S.terminal(b) == v, "PatternMismatch",
              "edge does not end at the insertion vertex");
      const GroupHom& psi = p.cog->psi_at(b);
      const auto& G = *psi.target;
      require(g >= 0 && g < G.order(), "UnknownElement", std::to_string(g));
      require(h >= 0 && h < psi.source->order(), "UnknownElement", std::to_string(h));
      int tail = G.mul(G.inv(psi.apply(h)), G.mul(G.inv(g), p.elts[j]));
      r.elts[j] = g;
      r.elts.insert(r.elts.begin() + j + 1, {h, tail});
      r.edges.insert(r.edges.begin() + j, {{b, false}, {b, true}});
      return r;
    }
    case MoveKind::IIIa: {
      if (!mv.inverse) {
        require(j >= 0 && j + 2 <= k, "PatternMismatch", "position out of range");
        const OrientedEdge& e1 = p.edges[j];
        const OrientedEdge& e2 = p.edges[j + 1];
        require(e1.plus && e2.plus, "PatternMismatch", "move IIIa needs (b+, a+)");
        require(p.elts[j + 1] == FiniteGroup::kId, "PatternMismatch",
                "middle element must be the identity");
        int b = e1.edge, a = e2.edge;
        require(S.composable(a, b), "NotComposable",
                "(" + std::to_string(a) + "," + std::to_string(b) + ")");
        int ab = S.compose(a, b);
        const auto& G = *p.cog->group_at(S.terminal(a));
        r.elts[j + 1] = G.mul(G.inv(p.cog->twist_at(a, b)), p.elts[j + 2]);
        r.elts.erase(r.elts.begin() + j + 2);
        r.edges[j] = {ab, true};
        r.edges.erase(r.edges.begin() + j + 1);
        return r;
      }
      require(mv.params.size() == 2, "PatternMismatch",
              "inverse IIIa takes parameters {a, b}");
      require(j >= 0 && j < k, "PatternMismatch", "position out of range");
      int a = mv.params[0], b = mv.params[1];
      require(S.composable(a, b), "NotComposable",
              "(" + std::to_string(a) + "," + std::to_string(b) + ")");
      const OrientedEdge& e1 = p.edges[j];
      require(e1.plus && e1.edge == S.compose(a, b), "PatternMismatch",
              "edge is not the requested composite");
      const auto& G = *p.cog->group_at(S.terminal(a));
      r.elts[j + 1] = G.mul(p.cog->twist_at(a, b), p.elts[j + 1]);
      r.elts.insert(r.elts.begin() + j + 1, FiniteGroup::kId);
      r.edges[j] = {b, true};
      r.edges.insert(r.edges.begin() + j + 1, {a, true});
      return r;
    }
    case MoveKind::IIIb: {
      if (!mv.inverse) {
        require(j >= 0 && j + 2 <= k, "PatternMismatch", "position out of range");
        const OrientedEdge& e1 = p.edges[j];
        const OrientedEdge& e2 = p.edges[j + 1];
        require(!e1.plus && !e2.plus, "PatternMismatch", "move IIIb needs (a-, b-)");
        require(p.elts[j + 1] == FiniteGroup::kId, "PatternMismatch",
                "middle element must be the identity");
        int a = e1.edge, b = e2.edge;
        require(S.composable(a, b), "NotComposable",
                "(" + std::to_string(a) + "," + std::to_string(b) + ")");
        int ab = S.compose(a, b);
        const auto& G = *p.cog->group_at(S.terminal(a));
        r.elts[j] = G.mul(p.elts[j], p.cog->twist_at(a, b));
        r.elts.erase(r.elts.begin() + j + 1);
        r.edges[j] = {ab, false};
        r.edges.erase(r.edges.begin() + j + 1);
        return r;
      }
      require(mv.params.size() == 2, "PatternMismatch",
              "inverse IIIb takes parameters {a, b}");
      require(j >= 0 && j < k, "PatternMismatch", "position out of range");
      int a = mv.params[0], b = mv.params[1];
      require(S.composable(a, b), "NotComposable",
              "(" + std::to_string(a) + "," + std::to_string(b) + ")");
      const OrientedEdge& e1 = p.edges[j];
      require(!e1.plus && e1.edge == S.compose(a, b), "PatternMismatch",
              "edge is not the requested composite");
      const auto& G = *p.cog->group_at(S.terminal(a));
      r.elts[j] = G.mul(p.elts[j], G.inv(p.cog->twist_at(a, b)));
      r.elts.insert(r.elts.begin() + j + 1, FiniteGroup::kId);
      r.edges[j] = {a, false};
      r.edges.insert(r.edges.begin() + j + 1, {b, false});
      return r;
    }
  }
  fail("PatternMismatch", "unknown move kind");
}

// Image of a path under a morphism, assembled from the atomic translations
//   (g)        -> (phi_sigma(g))
//   (1, a+, 1) -> (1, f(a)+, phi(a)^-1)
//   (1, a-, 1) -> (phi(a), f(a)-, 1)
inline XPath map_path(const CogMorphism& m, const XPath& p) {
  require(p.cog == m.source, "WrongCog", "path does not live in the source complex");
  XPath r = constant_path(m.target, m.f.v(p.initial()),
                          m.local.at(p.initial()).apply(p.elts[0]));
  for (int j = 0; j < p.length(); ++j) {
    const OrientedEdge& e = p.edges[j];
    int fa = m.f.e(e.edge);
    const auto& Ht = *m.target->group_at(m.target->base->terminal(fa));
    XPath step =
        e.plus ? edge_path(m.target, {fa, true}, FiniteGroup::kId, Ht.inv(m.elt(e.edge)))
               : edge_path(m.target, {fa, false}, m.elt(e.edge), FiniteGroup::kId);
    int v = p.vertex_at(j + 1);
    r = concat(concat(r, step),
               constant_path(m.target, m.f.v(v), m.local.at(v).apply(p.elts[j + 1])));
  }
  return r;
}

}  // namespace cogs
