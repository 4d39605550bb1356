#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cogs/group.hpp"
#include "cogs/scwol.hpp"

namespace cogs {

class ComplexOfGroups;
using CogPtr = std::shared_ptr<const ComplexOfGroups>;

// Complex of groups over a scwol: local groups G_sigma, injective edge
// monomorphisms psi_a : G_{i(a)} -> G_{t(a)} and twisting elements
// g_{a,b} in G_{t(a)} subject to the two cocycle conditions.
class ComplexOfGroups {
 public:
  ScwolPtr base;
  std::map<int, GroupPtr> local;                // vertex -> group
  std::map<int, GroupHom> psi;                  // edge -> monomorphism
  std::map<std::pair<int, int>, int> twist;     // (a,b) -> element of G_{t(a)}

  const GroupPtr& group_at(int v) const { return local.at(v); }
  const GroupHom& psi_at(int a) const { return psi.at(a); }
  int twist_at(int a, int b) const { return twist.at({a, b}); }

  friend CogPtr make_cog(ScwolPtr base, std::map<int, GroupPtr> local,
                         std::map<int, GroupHom> psi,
                         std::map<std::pair<int, int>, int> twist);

 private:
  ComplexOfGroups() = default;
};

inline CogPtr make_cog(ScwolPtr base, std::map<int, GroupPtr> local,
                       std::map<int, GroupHom> psi,
                       std::map<std::pair<int, int>, int> twist) {
  auto X = std::shared_ptr<ComplexOfGroups>(new ComplexOfGroups());
  for (int v : base->vertices())
    require(local.count(v) > 0, "MissingLocalGroup", "vertex " + std::to_string(v));
  for (const ScwolEdge& a : base->edges()) {
    require(psi.count(a.id) > 0, "MissingPsi", "edge " + std::to_string(a.id));
    const GroupHom& f = psi.at(a.id);
    require(f.source == local.at(a.i) && f.target == local.at(a.t), "MissingPsi",
            "edge " + std::to_string(a.id) + " endpoints do not match psi");
    validate_hom(f);
    require(hom_injective(f), "PsiNotInjective", "edge " + std::to_string(a.id));
  }
  for (const auto& [key, g] : twist) {
    require(base->composites().count(key) > 0, "BadTwist",
            "(" + std::to_string(key.first) + "," + std::to_string(key.second) +
                ") is not a composable pair");
    require(g >= 0 && g < local.at(base->terminal(key.first))->order(), "BadTwist",
            "twist element out of range");
  }
  for (const auto& [key, ab] : base->composites())
    require(twist.count(key) > 0, "BadTwist",
            "missing twist for (" + std::to_string(key.first) + "," +
                std::to_string(key.second) + ")");
  // cocycle (i): Ad(g_{a,b}) . psi_{ab} = psi_a . psi_b
  for (const auto& [key, ab] : base->composites()) {
    auto [a, b] = key;
    const auto& Gt = *local.at(base->terminal(a));
    int g = twist.at(key);
    const GroupHom& pa = psi.at(a);
    const GroupHom& pb = psi.at(b);
    const GroupHom& pab = psi.at(ab);
    for (int x = 0; x < pb.source->order(); ++x)
      require(Gt.conj(g, pab.apply(x)) == pa.apply(pb.apply(x)), "CocycleIFail",
              "(" + std::to_string(a) + "," + std::to_string(b) + ") at element " +
                  std::to_string(x));
  }
  // cocycle (ii): psi_a(g_{b,c}) g_{a,bc} = g_{a,b} g_{ab,c}
  for (const auto& [keyab, ab] : base->composites()) {
    auto [a, b] = keyab;
    for (int c : base->star_in(base->initial(b))) {
      int bc = base->compose(b, c);
      const auto& Gt = *local.at(base->terminal(a));
      int lhs = Gt.mul(psi.at(a).apply(twist.at({b, c})), twist.at({a, bc}));
      int rhs = Gt.mul(twist.at({a, b}), twist.at({ab, c}));
      require(lhs == rhs, "CocycleIIFail",
              "(" + std::to_string(a) + "," + std::to_string(b) + "," +
                  std::to_string(c) + ")");
    }
  }
  X->base = std::move(base);
  X->local = std::move(local);
  X->psi = std::move(psi);
  X->twist = std::move(twist);
  return X;
}

inline CogPtr trivial_cog(ScwolPtr base) {
  GroupPtr one = group_from_table({{0}});
  std::map<int, GroupPtr> local;
  std::map<int, GroupHom> psi;
  std::map<std::pair<int, int>, int> twist;
  for (int v : base->vertices()) local[v] = one;
  for (const ScwolEdge& a : base->edges()) psi[a.id] = GroupHom{one, one, {0}};
  for (const auto& [key, ab] : base->composites()) twist[key] = 0;
  return make_cog(std::move(base), std::move(local), std::move(psi), std::move(twist));
}

// Morphism of complexes of groups over a scwol morphism f: local
// homomorphisms phi_sigma and elements phi(a) in H_{f(t(a))} with
//   (i)  Ad(phi(a)) . psi_{f(a)} . phi_{i(a)} = phi_{t(a)} . psi_a
//   (ii) phi_{t(a)}(g_{a,b}) phi(ab) = phi(a) psi_{f(a)}(phi(b)) g_{f(a),f(b)}
struct CogMorphism {
  CogPtr source;
  CogPtr target;
  ScwolMorphism f;
  std::map<int, GroupHom> local;  // vertex -> hom G_sigma -> H_{f(sigma)}
  std::map<int, int> edge_elt;    // edge a -> element of H_{f(t(a))}

  const GroupHom& local_at(int v) const { return local.at(v); }
  int elt(int a) const { return edge_elt.at(a); }
};

inline void validate_cog_morphism(const CogMorphism& m) {
  require(m.f.source == m.source->base && m.f.target == m.target->base,
          "WrongCog", "underlying scwol morphism does not match the complexes");
  validate_scwol_morphism(m.f);
  for (int v : m.source->base->vertices()) {
    require(m.local.count(v) > 0, "MissingImage", "local map at " + std::to_string(v));
    const GroupHom& h = m.local.at(v);
    require(h.source == m.source->group_at(v) &&
                h.target == m.target->group_at(m.f.v(v)),
            "WrongCog", "local map at " + std::to_string(v));
    validate_hom(h);
  }
  for (const ScwolEdge& a : m.source->base->edges()) {
    require(m.edge_elt.count(a.id) > 0, "MissingImage",
            "edge element at " + std::to_string(a.id));
    const auto& H = *m.target->group_at(m.f.v(a.t));
    int pa = m.edge_elt.at(a.id);
    require(pa >= 0 && pa < H.order(), "WrongCog",
            "edge element out of range at " + std::to_string(a.id));
    const GroupHom& psiY = m.target->psi_at(m.f.e(a.id));
    const GroupHom& psiX = m.source->psi_at(a.id);
    const GroupHom& phi_i = m.local.at(a.i);
    const GroupHom& phi_t = m.local.at(a.t);
    for (int x = 0; x < phi_i.source->order(); ++x)
      require(H.conj(pa, psiY.apply(phi_i.apply(x))) == phi_t.apply(psiX.apply(x)),
              "MorphismIFail",
              "edge " + std::to_string(a.id) + " at element " + std::to_string(x));
  }
  for (const auto& [key, ab] : m.source->base->composites()) {
    auto [a, b] = key;
    int ta = m.source->base->terminal(a);
    const auto& H = *m.target->group_at(m.f.v(ta));
    int lhs = H.mul(m.local.at(ta).apply(m.source->twist_at(a, b)), m.edge_elt.at(ab));
    int rhs = H.mul(
        H.mul(m.edge_elt.at(a),
              m.target->psi_at(m.f.e(a)).apply(m.edge_elt.at(b))),
        m.target->twist_at(m.f.e(a), m.f.e(b)));
    require(lhs == rhs, "MorphismIIFail",
            "(" + std::to_string(a) + "," + std::to_string(b) + ")");
  }
}

inline CogMorphism identity_cog_morphism(CogPtr X) {
  CogMorphism m{X, X, identity_scwol_morphism(X->base), {}, {}};
  for (int v : X->base->vertices()) m.local[v] = identity_hom(X->group_at(v));
  for (const ScwolEdge& a : X->base->edges()) m.edge_elt[a.id] = FiniteGroup::kId;
  return m;
}

// outer . inner, with the composed data
//   (eta.phi)_sigma = eta_{f(sigma)} . phi_sigma
//   (eta.phi)(a)    = eta_{f(t(a))}(phi(a)) * eta(f(a))
inline CogMorphism compose_cog_morphisms(const CogMorphism& outer,
                                         const CogMorphism& inner) {
  require(inner.target == outer.source, "NotComposable", "cog morphisms");
  CogMorphism m{inner.source, outer.target,
                compose_scwol_morphisms(outer.f, inner.f), {}, {}};
  for (int v : inner.source->base->vertices())
    m.local[v] = compose_homs(outer.local.at(inner.f.v(v)), inner.local.at(v));
  for (const ScwolEdge& a : inner.source->base->edges()) {
    const auto& K = *outer.target->group_at(m.f.v(a.t));
    m.edge_elt[a.id] = K.mul(outer.local.at(inner.f.v(a.t)).apply(inner.elt(a.id)),
                             outer.elt(inner.f.e(a.id)));
  }
  validate_cog_morphism(m);
  return m;
}

inline bool cog_morphisms_equal(const CogMorphism& a, const CogMorphism& b) {
  if (a.f.vmap != b.f.vmap || a.f.emap != b.f.emap) return false;
  for (const auto& [v, h] : a.local)
    if (b.local.at(v).image != h.image) return false;
  return a.edge_elt == b.edge_elt;
}

// Covering certificate: for every source vertex sigma and every target edge a'
// ending at f(sigma), the verified matching between the local-coset fibres.
struct CoveringCertificate {
  struct StarMatch {
    int sigma;     // source vertex
    int a_target;  // target edge a'
    // (source edge a, coset rep g in G_sigma, matched target coset rep)
    std::vector<std::tuple<int, int, int>> entries;
  };
  std::vector<StarMatch> stars;
};

struct CoveringCheck {
  bool ok = false;
  std::string reason;
  CoveringCertificate certificate;
};

inline CoveringCheck check_covering(const CogMorphism& m) {
  validate_cog_morphism(m);
  CoveringCheck out;
  if (!scwol_morphism_surjective(m.f)) {
    out.reason = "NotSurjective: underlying scwol morphism";
    return out;
  }
  for (int v : m.source->base->vertices())
    if (!hom_injective(m.local.at(v))) {
      out.reason = "LocalNotInjective: vertex " + std::to_string(v);
      return out;
    }
  for (int sigma : m.source->base->vertices()) {
    int fs = m.f.v(sigma);
    const auto& H = *m.target->group_at(fs);
    for (int ap : m.target->base->star_in(fs)) {
      // target cosets of psi_{a'}(H_{i(a')})
      Subgroup target_img = hom_image(m.target->psi_at(ap));
      auto target_cosets = left_cosets(target_img);
      std::vector<int> coset_of(H.order());
      for (size_t ci = 0; ci < target_cosets.size(); ++ci)
        for (int x : target_cosets[ci]) coset_of[x] = static_cast<int>(ci);
      std::vector<int> hits(target_cosets.size(), 0);
      CoveringCertificate::StarMatch match{sigma, ap, {}};
      for (int a : m.source->base->star_in(sigma)) {
        if (m.f.e(a) != ap) continue;
        Subgroup src_img = hom_image(m.source->psi_at(a));
        for (const auto& coset : left_cosets(src_img)) {
          int g = coset.front();
          int image = H.mul(m.local.at(sigma).apply(g), m.elt(a));
          int ci = coset_of[image];
          if (hits[ci]++) {
            out.reason = "CosetMapNotInjective: vertex " + std::to_string(sigma) +
                         ", target edge " + std::to_string(ap);
            return out;
          }
          match.entries.emplace_back(a, g, target_cosets[ci].front());
        }
      }
      for (size_t ci = 0; ci < hits.size(); ++ci)
        if (!hits[ci]) {
          out.reason = "CosetMapNotSurjective: vertex " + std::to_string(sigma) +
                       ", target edge " + std::to_string(ap);
          return out;
        }
      out.certificate.stars.push_back(std::move(match));
    }
  }
  out.ok = true;
  return out;
}

// Homotopy (phi ~ eta) witness: k_sigma in H_{f(sigma)} with
//   eta_sigma = Ad(k_sigma) . phi_sigma
//   eta(a)    = k_{t(a)} phi(a) psi_{f(a)}(k_{i(a)})^-1
struct Homotopy {
  CogMorphism from;
  CogMorphism to;
  std::map<int, int> family;
};

inline bool homotopy_family_valid(const CogMorphism& phi, const CogMorphism& eta,
                                  const std::map<int, int>& k) {
  for (int v : phi.source->base->vertices()) {
    const auto& H = *phi.target->group_at(phi.f.v(v));
    int kv = k.at(v);
    const GroupHom& p = phi.local.at(v);
    const GroupHom& e = eta.local.at(v);
    for (int x = 0; x < p.source->order(); ++x)
      if (e.apply(x) != H.conj(kv, p.apply(x))) return false;
  }
  for (const ScwolEdge& a : phi.source->base->edges()) {
    const auto& H = *phi.target->group_at(phi.f.v(a.t));
    int want = H.mul(H.mul(k.at(a.t), phi.elt(a.id)),
                     H.inv(phi.target->psi_at(phi.f.e(a.id)).apply(k.at(a.i))));
    if (eta.elt(a.id) != want) return false;
  }
  return true;
}

// Finds a homotopy family by seeding k at a root vertex and propagating along
// a spanning tree; each tree edge determines the next value uniquely (or kills
// the seed when the required psi-preimage is missing). With rel set, the seed
// is pinned to the identity at that vertex.
inline std::optional<Homotopy> find_homotopy(const CogMorphism& phi,
                                             const CogMorphism& eta,
                                             std::optional<int> rel = std::nullopt) {
  require(phi.source == eta.source && phi.target == eta.target, "DifferentBaseMorphism",
          "morphisms relate different complexes");
  require(phi.f.vmap == eta.f.vmap && phi.f.emap == eta.f.emap,
          "DifferentBaseMorphism", "underlying scwol morphisms differ");
  int root = rel ? *rel : phi.source->base->vertices().front();
  require(phi.source->base->has_vertex(root), "UnknownVertex", std::to_string(root));
  SpanningTree T = spanning_tree(phi.source->base, root);

  std::vector<int> seeds;
  if (rel) {
    seeds.push_back(FiniteGroup::kId);
  } else {
    for (int g = 0; g < phi.target->group_at(phi.f.v(root))->order(); ++g)
      seeds.push_back(g);
  }
  for (int seed : seeds) {
    std::map<int, int> k;
    k[root] = seed;
    bool dead = false;
    for (size_t idx = 1; idx < T.bfs_order.size() && !dead; ++idx) {
      int w = T.bfs_order[idx];
      int e = T.via_edge.at(w);
      int fe = phi.f.e(e);
      const GroupHom& psiY = phi.target->psi_at(fe);
      const auto& Ht = *psiY.target;
      if (T.forward.at(w)) {
        // parent = i(e), child = t(e):  k_t = eta(e) psi(k_i) phi(e)^-1
        int ki = k.at(T.parent.at(w));
        k[w] = Ht.mul(Ht.mul(eta.elt(e), psiY.apply(ki)), Ht.inv(phi.elt(e)));
      } else {
        // parent = t(e), child = i(e):  psi(k_i) = eta(e)^-1 k_t phi(e)
        int kt = k.at(T.parent.at(w));
        int z = Ht.mul(Ht.mul(Ht.inv(eta.elt(e)), kt), phi.elt(e));
        int pre = -1;
        for (int u = 0; u < psiY.source->order(); ++u)
          if (psiY.apply(u) == z) { pre = u; break; }
        if (pre < 0) { dead = true; break; }
        k[w] = pre;
      }
    }
    if (!dead && homotopy_family_valid(phi, eta, k))
      return Homotopy{phi, eta, std::move(k)};
  }
  return std::nullopt;
}

// phi^(k_{sigma0} = g): conjugate the local map at sigma0 by g and adjust the
// adjacent edge elements; homotopic to phi via the family that is g at sigma0
// and the identity elsewhere.
inline CogMorphism twist_at_basepoint(const CogMorphism& phi, int sigma0, int g) {
  require(phi.source->base->has_vertex(sigma0), "UnknownVertex",
          std::to_string(sigma0));
  const auto& H0 = *phi.target->group_at(phi.f.v(sigma0));
  require(g >= 0 && g < H0.order(), "UnknownElement", std::to_string(g));
  CogMorphism m = phi;
  GroupHom twisted = phi.local.at(sigma0);
  for (int& x : twisted.image) x = H0.conj(g, x);
  m.local[sigma0] = std::move(twisted);
  for (const ScwolEdge& a : phi.source->base->edges()) {
    if (a.t == sigma0) {
      const auto& H = *phi.target->group_at(phi.f.v(a.t));
      m.edge_elt[a.id] = H.mul(g, phi.elt(a.id));
    } else if (a.i == sigma0) {
      const auto& H = *phi.target->group_at(phi.f.v(a.t));
      m.edge_elt[a.id] =
          H.mul(phi.elt(a.id), H.inv(phi.target->psi_at(phi.f.e(a.id)).apply(g)));
    }
  }
  validate_cog_morphism(m);
  return m;
}

}  // namespace cogs
