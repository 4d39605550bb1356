#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cogs/presentation.hpp"

namespace cogs {

using Pi1Ptr = std::shared_ptr<const Pi1Group>;

// ---------------------------------------------------------------------------
// Local structure of a (potential) development, computable without the
// fundamental group: the number of edges of the development arriving at a
// lift of sigma, split by base edge ([G_sigma : psi_a(G_{i(a)})] for each
// edge a into sigma).
// ---------------------------------------------------------------------------

struct LocalStar {
  int sigma = -1;
  std::vector<std::pair<int, int>> edge_counts;  // (edge a, number of lifts)
  int total = 0;
};

inline LocalStar local_star(const CogPtr& cog, int sigma) {
  require(cog->base->has_vertex(sigma), "UnknownVertex", std::to_string(sigma));
  LocalStar s;
  s.sigma = sigma;
  for (int a : cog->base->star_in(sigma)) {
    int index = cog->group_at(sigma)->order() / hom_image(cog->psi_at(a)).order();
    s.edge_counts.emplace_back(a, index);
    s.total += index;
  }
  return s;
}

// Alternating sum of the chain counts (vertices, edges, composable pairs,
// composable triples, ...).
inline long long euler_characteristic(const ScwolPtr& S) {
  long long chi = static_cast<long long>(S->vertices().size());
  std::map<int, long long> count;  // chains ending with edge a
  for (const ScwolEdge& a : S->edges()) count[a.id] = 1;
  // successors[b] = edges a with (a, b) composable, for extending chains at
  // their head
  std::map<int, std::vector<int>> extenders;
  for (const auto& [key, ab] : S->composites()) extenders[key.second].push_back(key.first);
  int sign = -1;
  while (!count.empty()) {
    long long total = 0;
    for (const auto& [a, c] : count) total += c;
    chi += sign * total;
    sign = -sign;
    std::map<int, long long> next;
    for (const auto& [a1, c] : count) {
      auto it = extenders.find(a1);
      if (it == extenders.end()) continue;
      for (int a0 : it->second) next[a0] += c;
    }
    count = std::move(next);
  }
  return chi;
}

// ---------------------------------------------------------------------------
// Development: the action of the fundamental group on cosets of the local
// subgroups.  Vertices are pairs (sigma, g U_sigma), edges over a are pairs
// (g U_{i(a)}, a) running from (i(a), g U_{i(a)}) to (t(a), g s_a U_{t(a)}).
// ---------------------------------------------------------------------------

struct NotDevelopable {
  int sigma;
  int g;
};

struct Development {
  Pi1Ptr pi1;
  ScwolPtr scwol;
  ScwolMorphism projection;  // development -> base scwol
  int base_vertex = -1;      // (basepoint, identity coset)
  std::vector<int> v_sigma;  // dev vertex -> base vertex
  std::vector<int> v_coset;  // dev vertex -> minimal element of its coset
  std::vector<int> e_base;   // dev edge -> base edge
  std::vector<int> e_coset;  // dev edge -> minimal element of its U_{i(a)} coset
  std::map<std::pair<int, int>, int> vid;  // (sigma, coset min) -> dev vertex
  std::map<std::pair<int, int>, int> eid;  // (edge, coset min) -> dev edge
  std::map<int, std::vector<int>> coset_min;  // sigma -> (elt -> min of elt U_sigma)
  std::vector<XPath> rep_path;   // dev vertex -> path from the basepoint
  std::vector<int> rep_class;    // dev vertex -> class of rep_path * tree^-1

  int vertex_of(int sigma, int g) const {
    return vid.at({sigma, coset_min.at(sigma)[g]});
  }
  int act_vertex(int m, int v) const {
    int sigma = v_sigma[v];
    return vid.at({sigma, coset_min.at(sigma)[pi1->group->mul(m, v_coset[v])]});
  }
  int act_edge(int m, int e) const {
    int ia = pi1->pres.cog->base->initial(e_base[e]);
    return eid.at({e_base[e], coset_min.at(ia)[pi1->group->mul(m, e_coset[e])]});
  }
};

inline Development build_development(Pi1Ptr G) {
  for (const auto& [sigma, h] : G->iota)
    for (int g = 1; g < h.source->order(); ++g)
      if (h.apply(g) == FiniteGroup::kId)
        fail("NotDevelopable", "local element " + std::to_string(g) +
                                   " at vertex " + std::to_string(sigma) +
                                   " dies in the fundamental group");
  Development D;
  D.pi1 = G;
  const CogPtr& cog = G->pres.cog;
  const ScwolPtr& X = cog->base;

  for (int sigma : X->vertices()) {
    Subgroup U = hom_image(G->iota.at(sigma));
    auto cosets = left_cosets(U);
    std::vector<int> cmin(G->group->order());
    for (const auto& c : cosets)
      for (int x : c) cmin[x] = c.front();
    D.coset_min[sigma] = std::move(cmin);
    for (const auto& c : cosets) {
      int id = static_cast<int>(D.v_sigma.size());
      D.vid[{sigma, c.front()}] = id;
      D.v_sigma.push_back(sigma);
      D.v_coset.push_back(c.front());
    }
  }

  std::vector<ScwolEdge> dev_edges;
  for (const ScwolEdge& a : X->edges()) {
    Subgroup U = hom_image(G->iota.at(a.i));
    int sa = G->s_edge.at(a.id);
    for (const auto& c : left_cosets(U)) {
      int id = static_cast<int>(D.e_base.size());
      D.eid[{a.id, c.front()}] = id;
      D.e_base.push_back(a.id);
      D.e_coset.push_back(c.front());
      int vi = D.vid.at({a.i, c.front()});
      int vt = D.vid.at({a.t, D.coset_min.at(a.t)[G->group->mul(c.front(), sa)]});
      dev_edges.push_back({id, vi, vt});
    }
  }

  std::map<std::pair<int, int>, int> dev_comp;
  for (const auto& [key, ab] : X->composites()) {
    auto [a, b] = key;
    int ib = X->initial(b);
    Subgroup Ub = hom_image(G->iota.at(ib));
    int sb = G->s_edge.at(b);
    for (const auto& c : left_cosets(Ub)) {
      int eb = D.eid.at({b, c.front()});
      int ia = X->initial(a);  // == t(b)
      int ea = D.eid.at({a, D.coset_min.at(ia)[G->group->mul(c.front(), sb)]});
      int eab = D.eid.at({ab, c.front()});
      dev_comp[{ea, eb}] = eab;
    }
  }

  std::vector<int> dev_vertices(D.v_sigma.size());
  for (size_t i = 0; i < dev_vertices.size(); ++i) dev_vertices[i] = static_cast<int>(i);
  D.scwol = make_scwol(dev_vertices, dev_edges, dev_comp);

  std::map<int, int> vmap, emap;
  for (size_t v = 0; v < D.v_sigma.size(); ++v) vmap[static_cast<int>(v)] = D.v_sigma[v];
  for (size_t e = 0; e < D.e_base.size(); ++e) emap[static_cast<int>(e)] = D.e_base[e];
  D.projection = ScwolMorphism{D.scwol, X, std::move(vmap), std::move(emap)};
  validate_scwol_morphism(D.projection);

  int sigma0 = G->pres.basepoint;
  D.base_vertex = D.vid.at({sigma0, D.coset_min.at(sigma0)[FiniteGroup::kId]});

  // representative paths from the basepoint, by BFS over the development
  int nv = static_cast<int>(D.v_sigma.size());
  D.rep_path.assign(nv, XPath{});
  D.rep_class.assign(nv, -1);
  std::vector<bool> seen(nv, false);
  D.rep_path[D.base_vertex] = constant_path(cog, sigma0);
  D.rep_class[D.base_vertex] = FiniteGroup::kId;
  seen[D.base_vertex] = true;
  std::deque<int> queue{D.base_vertex};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (const ScwolEdge& e : D.scwol->edges()) {
      int a = D.e_base[e.id];
      if (e.i == v && !seen[e.t]) {
        D.rep_path[e.t] = concat(D.rep_path[v], edge_path(cog, {a, true}));
        D.rep_class[e.t] = G->group->mul(D.rep_class[v], G->s_edge.at(a));
        seen[e.t] = true;
        queue.push_back(e.t);
      } else if (e.t == v && !seen[e.i]) {
        int ta = X->terminal(a);
        int want = D.v_coset[e.i];
        int found = -1;
        for (int c = 0; c < cog->group_at(ta)->order(); ++c) {
          int cls = G->group->mul(D.rep_class[v],
                                  G->group->mul(G->iota.at(ta).apply(c),
                                                G->group->inv(G->s_edge.at(a))));
          if (D.coset_min.at(X->initial(a))[cls] == want) {
            found = c;
            D.rep_class[e.i] = cls;
            break;
          }
        }
        require(found >= 0, "EnumerationInconsistent",
                "no backward extension found in the development");
        D.rep_path[e.i] =
            concat(D.rep_path[v], make_xpath(cog, ta, {found, FiniteGroup::kId},
                                             {{a, false}}));
        seen[e.i] = true;
        queue.push_back(e.i);
      }
    }
  }
  for (bool s : seen)
    require(s, "EnumerationInconsistent", "development is not connected");
  return D;
}

// The development vertex reached by a path from the basepoint.
inline int dev_vertex_of_path(const Development& D, const XPath& p) {
  require(p.initial() == D.pi1->pres.basepoint, "EndpointMismatch",
          "path must start at the basepoint");
  int cls = class_of_path(*D.pi1,
                          concat(p, inverse_path(tree_xpath(D.pi1->pres, p.terminal()))));
  return D.vertex_of(p.terminal(), cls);
}

inline Subgroup action_kernel(const Development& D) {
  const GroupPtr& G = D.pi1->group;
  std::vector<int> elements;
  for (int m = 0; m < G->order(); ++m) {
    bool fixes = true;
    for (int v = 0; v < static_cast<int>(D.v_sigma.size()) && fixes; ++v)
      if (D.act_vertex(m, v) != v) fixes = false;
    if (fixes) elements.push_back(m);
  }
  Subgroup K{G, elements};
  require(same_subgroup(K, subgroup_generated(G, elements)), "EnumerationInconsistent",
          "action kernel is not a subgroup");
  return K;
}

struct SimpleConnectivity {
  bool decided = false;
  bool simply_connected = false;
  int pi1_order = 0;
};

inline SimpleConnectivity check_simply_connected(const ScwolPtr& S, int limit = 20000) {
  Pi1Outcome o = compute_pi1(trivial_cog(S), S->vertices().front(), limit);
  if (!o.complete) return {};
  return {true, o.pi1->group->order() == 1, o.pi1->group->order()};
}

// ---------------------------------------------------------------------------
// Induced complex of groups on the same scwol: local groups U_sigma =
// iota(G_sigma) inside the fundamental group, edge maps conjugation by
// h_a = s_a^-1, twists iota_{t(a)}(g_{a,b}).  Canonically isomorphic to the
// original complex.
// ---------------------------------------------------------------------------

struct InducedCog {
  CogPtr cog;
  CogMorphism iso;  // original -> induced, over the identity
  std::map<int, SubgroupAsGroup> locals;
  std::map<int, int> h;  // edge -> h_a in the fundamental group
};

inline InducedCog induced_cog(const Pi1Ptr& G) {
  const CogPtr& orig = G->pres.cog;
  const ScwolPtr& X = orig->base;
  const GroupPtr& big = G->group;
  InducedCog out;
  for (int sigma : X->vertices())
    out.locals.emplace(sigma, subgroup_as_group(hom_image(G->iota.at(sigma))));
  for (const ScwolEdge& a : X->edges()) out.h[a.id] = h_edge(*G, a.id);

  std::map<int, GroupPtr> local;
  std::map<int, GroupHom> psi;
  std::map<std::pair<int, int>, int> twist;
  for (int sigma : X->vertices()) local[sigma] = out.locals.at(sigma).group;
  for (const ScwolEdge& a : X->edges()) {
    const SubgroupAsGroup& Si = out.locals.at(a.i);
    const SubgroupAsGroup& St = out.locals.at(a.t);
    GroupHom hm{Si.group, St.group, {}};
    for (int u = 0; u < Si.group->order(); ++u)
      hm.image.push_back(
          subgroup_position(St, big->conj(out.h.at(a.id), Si.to_parent[u])));
    psi[a.id] = std::move(hm);
  }
  for (const auto& [key, ab] : X->composites()) {
    int ta = X->terminal(key.first);
    twist[key] = subgroup_position(
        out.locals.at(ta), G->iota.at(ta).apply(orig->twist_at(key.first, key.second)));
  }
  out.cog = make_cog(X, std::move(local), std::move(psi), std::move(twist));

  CogMorphism iso{orig, out.cog, identity_scwol_morphism(X), {}, {}};
  for (int sigma : X->vertices()) {
    GroupHom lm{orig->group_at(sigma), out.cog->group_at(sigma), {}};
    for (int g = 0; g < orig->group_at(sigma)->order(); ++g)
      lm.image.push_back(
          subgroup_position(out.locals.at(sigma), G->iota.at(sigma).apply(g)));
    iso.local[sigma] = std::move(lm);
  }
  for (const ScwolEdge& a : X->edges()) iso.edge_elt[a.id] = FiniteGroup::kId;
  validate_cog_morphism(iso);
  out.iso = std::move(iso);
  return out;
}

inline bool cog_morphism_is_isomorphism(const CogMorphism& m) {
  if (!scwol_morphism_bijective(m.f)) return false;
  for (const auto& [v, h] : m.local)
    if (!hom_injective(h) || h.source->order() != h.target->order()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Canonical covering of a developable complex by (the trivial complex on)
// its development.  The edge element over a development edge with initial
// coset representative w_i and terminal coset representative w_t is
// iota_{t(a)}^-1(w_t^-1 w_i s_a).
// ---------------------------------------------------------------------------

inline CogMorphism canonical_covering(const Development& D) {
  const Pi1Ptr& G = D.pi1;
  const CogPtr& Y = G->pres.cog;
  CogPtr total = trivial_cog(D.scwol);
  CogMorphism m{total, Y, D.projection, {}, {}};
  std::map<int, std::vector<int>> pre;  // iota preimage tables
  for (int sigma : Y->base->vertices())
    pre[sigma] = hom_preimage_table(G->iota.at(sigma));
  for (int v = 0; v < static_cast<int>(D.v_sigma.size()); ++v)
    m.local[v] = GroupHom{total->group_at(v), Y->group_at(D.v_sigma[v]), {FiniteGroup::kId}};
  for (int e = 0; e < static_cast<int>(D.e_base.size()); ++e) {
    int a = D.e_base[e];
    int ta = Y->base->terminal(a);
    int wi = D.v_coset[D.scwol->initial(e)];
    int wt = D.v_coset[D.scwol->terminal(e)];
    int val = G->group->mul(G->group->inv(wt),
                            G->group->mul(wi, G->s_edge.at(a)));
    int lam = pre.at(ta)[val];
    require(lam >= 0, "EnumerationInconsistent",
            "canonical edge element escapes the local group");
    m.edge_elt[e] = lam;
  }
  validate_cog_morphism(m);
  return m;
}

// ---------------------------------------------------------------------------
// Covering associated with a subgroup U of the fundamental group: quotient
// of the development by U, local groups the U-stabilizers, projection with
// transport elements h_abar and twisted edge elements.
// ---------------------------------------------------------------------------

struct SubgroupCovering {
  CogPtr total;
  CogMorphism projection;
  Subgroup U;
  std::vector<int> vrep;  // quotient vertex -> development vertex rep
  std::vector<int> erep;  // quotient edge -> development edge rep (e_hat)
  std::map<int, int> h;   // quotient edge -> transport element of U
};

inline SubgroupCovering covering_from_subgroup(const Development& D,
                                               const Subgroup& U) {
  const Pi1Ptr& G = D.pi1;
  require(U.parent == G->group, "WrongCog", "subgroup of a different group");
  const CogPtr& Y = G->pres.cog;
  int ndv = static_cast<int>(D.v_sigma.size());
  int nde = static_cast<int>(D.e_base.size());

  // orbits, named by their minimal member
  std::vector<int> vorb(ndv, -1), eorb(nde, -1);
  for (int v = 0; v < ndv; ++v) {
    int m = v;
    for (int u : U.elements) m = std::min(m, D.act_vertex(u, v));
    vorb[v] = m;
  }
  for (int e = 0; e < nde; ++e) {
    int m = e;
    for (int u : U.elements) m = std::min(m, D.act_edge(u, e));
    eorb[e] = m;
  }
  std::map<int, int> vq, eq;  // orbit min -> quotient id
  for (int v = 0; v < ndv; ++v)
    if (vorb[v] == v) {
      int id = static_cast<int>(vq.size());
      vq[v] = id;
    }
  for (int e = 0; e < nde; ++e)
    if (eorb[e] == e) {
      int id = static_cast<int>(eq.size());
      eq[e] = id;
    }
  int nqv = static_cast<int>(vq.size()), nqe = static_cast<int>(eq.size());

  std::vector<int> qvertices(nqv);
  for (int i = 0; i < nqv; ++i) qvertices[i] = i;
  std::vector<ScwolEdge> qedges;
  for (const auto& [emin, id] : eq)
    qedges.push_back({id, vq.at(vorb[D.scwol->initial(emin)]),
                      vq.at(vorb[D.scwol->terminal(emin)])});
  std::map<std::pair<int, int>, int> qcomp;
  for (const auto& [key, cab] : D.scwol->composites()) {
    auto [ea, eb] = key;
    std::pair<int, int> qkey{eq.at(eorb[ea]), eq.at(eorb[eb])};
    int val = eq.at(eorb[cab]);
    auto it = qcomp.find(qkey);
    require(it == qcomp.end() || it->second == val, "EnumerationInconsistent",
            "quotient composites are inconsistent");
    qcomp[qkey] = val;
  }
  ScwolPtr qscwol = make_scwol(qvertices, qedges, qcomp);

  // BFS reps, rooted at the orbit of the base vertex with the identity rep
  std::vector<int> vrep(nqv, -1);
  std::vector<int> qe_min(nqe, -1);  // quotient edge -> minimal orbit member
  for (const auto& [emin, id] : eq) qe_min[id] = emin;
  int root = vq.at(vorb[D.base_vertex]);
  vrep[root] = D.base_vertex;
  std::deque<int> queue{root};
  std::vector<bool> seen(nqv, false);
  seen[root] = true;
  // unique development edge in the orbit of qe with initial vertex devv
  auto lift_at_i = [&](int qe, int devv) {
    int found = -1;
    for (int u : U.elements) {
      int cand = D.act_edge(u, qe_min[qe]);
      if (D.scwol->initial(cand) == devv) {
        require(found < 0 || found == cand, "EnumerationInconsistent",
                "orbit edge at a vertex is not unique");
        found = cand;
      }
    }
    return found;
  };
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (const ScwolEdge& qe : qscwol->edges()) {
      if (qe.i == x && !seen[qe.t]) {
        int lifted = lift_at_i(qe.id, vrep[x]);
        require(lifted >= 0, "EnumerationInconsistent", "missing forward lift");
        vrep[qe.t] = D.scwol->terminal(lifted);
        seen[qe.t] = true;
        queue.push_back(qe.t);
      } else if (qe.t == x && !seen[qe.i]) {
        int best = -1;
        for (int u : U.elements) {
          int cand = D.act_edge(u, qe_min[qe.id]);
          if (D.scwol->terminal(cand) == vrep[x])
            best = best < 0 ? cand : std::min(best, cand);
        }
        require(best >= 0, "EnumerationInconsistent", "missing backward lift");
        vrep[qe.i] = D.scwol->initial(best);
        seen[qe.i] = true;
        queue.push_back(qe.i);
      }
    }
  }
  for (bool s : seen)
    require(s, "EnumerationInconsistent", "quotient is not connected");

  // e_hat and transport elements
  std::vector<int> erep_(nqe, -1);
  std::map<int, int> hq;
  for (const auto& [emin, id] : eq) {
    int ehat = lift_at_i(id, vrep[qedges[id].i]);
    require(ehat >= 0, "EnumerationInconsistent", "missing e_hat lift");
    erep_[id] = ehat;
    int target = vrep[qedges[id].t];
    int tv = D.scwol->terminal(ehat);
    int h = -1;
    for (int u : U.elements)
      if (D.act_vertex(u, tv) == target) { h = u; break; }
    require(h >= 0, "EnumerationInconsistent", "missing transport element");
    hq[id] = h;
  }

  // stabilizer local groups
  std::map<int, SubgroupAsGroup> stabs;
  for (int x = 0; x < nqv; ++x) {
    std::vector<int> elems;
    for (int u : U.elements)
      if (D.act_vertex(u, vrep[x]) == vrep[x]) elems.push_back(u);
    stabs.emplace(x, subgroup_as_group(Subgroup{G->group, elems}));
  }

  std::map<int, GroupPtr> local;
  std::map<int, GroupHom> psi;
  std::map<std::pair<int, int>, int> twist;
  for (int x = 0; x < nqv; ++x) local[x] = stabs.at(x).group;
  for (const ScwolEdge& qe : qscwol->edges()) {
    const SubgroupAsGroup& Si = stabs.at(qe.i);
    const SubgroupAsGroup& St = stabs.at(qe.t);
    GroupHom hm{Si.group, St.group, {}};
    for (int u = 0; u < Si.group->order(); ++u)
      hm.image.push_back(
          subgroup_position(St, G->group->conj(hq.at(qe.id), Si.to_parent[u])));
    psi[qe.id] = std::move(hm);
  }
  for (const auto& [qkey, qab] : qscwol->composites()) {
    int ta = qscwol->terminal(qkey.first);
    int val = G->group->mul(hq.at(qkey.first),
                            G->group->mul(hq.at(qkey.second),
                                          G->group->inv(hq.at(qab))));
    twist[qkey] = subgroup_position(stabs.at(ta), val);
  }
  CogPtr total = make_cog(qscwol, std::move(local), std::move(psi), std::move(twist));

  // projection onto Y
  std::map<int, int> vmap, emap;
  for (int x = 0; x < nqv; ++x) vmap[x] = D.v_sigma[vrep[x]];
  for (const ScwolEdge& qe : qscwol->edges()) emap[qe.id] = D.e_base[erep_[qe.id]];
  ScwolMorphism f{qscwol, Y->base, std::move(vmap), std::move(emap)};
  validate_scwol_morphism(f);

  std::map<int, std::vector<int>> pre;
  for (int sigma : Y->base->vertices())
    pre[sigma] = hom_preimage_table(G->iota.at(sigma));

  CogMorphism proj{total, Y, std::move(f), {}, {}};
  for (int x = 0; x < nqv; ++x) {
    int sigma = D.v_sigma[vrep[x]];
    int w = D.v_coset[vrep[x]];
    const SubgroupAsGroup& S = stabs.at(x);
    GroupHom lm{S.group, Y->group_at(sigma), {}};
    for (int u = 0; u < S.group->order(); ++u) {
      int val = G->group->mul(G->group->inv(w),
                              G->group->mul(S.to_parent[u], w));
      int g = pre.at(sigma)[val];
      require(g >= 0, "EnumerationInconsistent",
              "stabilizer element escapes the local group");
      lm.image.push_back(g);
    }
    proj.local[x] = std::move(lm);
  }
  for (const ScwolEdge& qe : qscwol->edges()) {
    int a = D.e_base[erep_[qe.id]];
    int ta = Y->base->terminal(a);
    int wi = D.v_coset[vrep[qe.i]];
    int wt = D.v_coset[vrep[qe.t]];
    int val = G->group->mul(
        G->group->inv(wt),
        G->group->mul(hq.at(qe.id), G->group->mul(wi, G->s_edge.at(a))));
    int delta = pre.at(ta)[val];
    require(delta >= 0, "EnumerationInconsistent",
            "projection edge element escapes the local group");
    proj.edge_elt[qe.id] = delta;
  }
  validate_cog_morphism(proj);

  SubgroupCovering out;
  out.total = total;
  out.projection = std::move(proj);
  out.U = U;
  out.vrep = std::move(vrep);
  out.erep = std::move(erep_);
  out.h = std::move(hq);
  return out;
}

}  // namespace cogs
