#include <catch2/catch_amalgamated.hpp>

#include "cogs/development.hpp"

#include <set>
#include <vector>

#include "corpus.hpp"

using namespace cogs;

namespace {

Pi1Ptr pi1_of(const CogPtr& cog, int basepoint = 0) {
  Pi1Outcome o = compute_pi1(cog, basepoint);
  REQUIRE(o.complete);
  return std::make_shared<const Pi1Group>(std::move(*o.pi1));
}

// Expected fibre sizes: a developable complex embeds every local group into
// the fundamental group, so the development has |pi1| / |G_sigma| vertices
// over sigma and |pi1| / |G_{i(a)}| edges over a.
long long expected_vertices(const CogPtr& cog, int order) {
  long long n = 0;
  for (int sigma : cog->base->vertices()) n += order / cog->group_at(sigma)->order();
  return n;
}

long long expected_edges(const CogPtr& cog, int order) {
  long long n = 0;
  for (const ScwolEdge& a : cog->base->edges()) n += order / cog->group_at(a.i)->order();
  return n;
}

long long expected_pairs(const CogPtr& cog, int order) {
  long long n = 0;
  for (const auto& [key, ab] : cog->base->composites())
    n += order / cog->group_at(cog->base->initial(key.second))->order();
  return n;
}

}  // namespace

TEST_CASE("triangle developments match the coset census", "[development]") {
  struct Census {
    int m;
    int order;
    long long vertices;
    long long edges;
    long long pairs;
  };
  const std::vector<Census> censuses{
      {3, 24, 74, 216, 144}, {4, 48, 146, 432, 288}, {5, 120, 362, 1080, 720}};

  for (const Census& c : censuses) {
    CogPtr cog = corpus::triangle_cog(c.m);
    Pi1Ptr G = pi1_of(cog);
    REQUIRE(G->group->order() == c.order);
    Development D = build_development(G);

    CHECK(static_cast<long long>(D.v_sigma.size()) == c.vertices);
    CHECK(static_cast<long long>(D.e_base.size()) == c.edges);
    CHECK(static_cast<long long>(D.scwol->composites().size()) == c.pairs);
    CHECK(expected_vertices(cog, c.order) == c.vertices);
    CHECK(expected_edges(cog, c.order) == c.edges);
    CHECK(expected_pairs(cog, c.order) == c.pairs);

    // the development of a triangle of finite groups is a sphere
    CHECK(euler_characteristic(D.scwol) == 2);
    SimpleConnectivity sc = check_simply_connected(D.scwol);
    REQUIRE(sc.decided);
    CHECK(sc.simply_connected);

    CHECK(D.v_sigma[D.base_vertex] == 0);
    CHECK(D.v_coset[D.base_vertex] == FiniteGroup::kId);
  }
}

TEST_CASE("the development carries a fundamental group action", "[development]") {
  Pi1Ptr G = pi1_of(corpus::triangle_cog(3));
  Development D = build_development(G);
  const GroupPtr& P = G->group;
  int nv = static_cast<int>(D.v_sigma.size());
  int ne = static_cast<int>(D.e_base.size());

  for (int v = 0; v < nv; ++v) CHECK(D.act_vertex(FiniteGroup::kId, v) == v);

  // action law and compatibility with the projection
  for (int m1 = 0; m1 < P->order(); ++m1)
    for (int m2 = 0; m2 < P->order(); ++m2) {
      int prod = P->mul(m1, m2);
      for (int v = 0; v < nv; v += 7)
        CHECK(D.act_vertex(m1, D.act_vertex(m2, v)) == D.act_vertex(prod, v));
      for (int e = 0; e < ne; e += 13)
        CHECK(D.act_edge(m1, D.act_edge(m2, e)) == D.act_edge(prod, e));
    }
  for (int m = 0; m < P->order(); ++m) {
    for (int v = 0; v < nv; ++v) CHECK(D.v_sigma[D.act_vertex(m, v)] == D.v_sigma[v]);
    for (int e = 0; e < ne; ++e) {
      int im = D.act_edge(m, e);
      CHECK(D.e_base[im] == D.e_base[e]);
      // acting is a scwol automorphism over the base
      CHECK(D.scwol->initial(im) == D.act_vertex(m, D.scwol->initial(e)));
      CHECK(D.scwol->terminal(im) == D.act_vertex(m, D.scwol->terminal(e)));
    }
  }

  // the action is transitive on every vertex fibre
  for (int sigma : G->pres.cog->base->vertices()) {
    std::set<int> orbit;
    int seed = D.vertex_of(sigma, FiniteGroup::kId);
    for (int m = 0; m < P->order(); ++m) orbit.insert(D.act_vertex(m, seed));
    std::set<int> fibre;
    for (int v = 0; v < nv; ++v)
      if (D.v_sigma[v] == sigma) fibre.insert(v);
    CHECK(orbit == fibre);
  }

  CHECK(action_kernel(D).order() == 1);
}

TEST_CASE("representative paths reach their vertices", "[development]") {
  for (const CogPtr& cog : {corpus::triangle_cog(3), corpus::segment_z4_cog()}) {
    Pi1Ptr G = pi1_of(cog);
    Development D = build_development(G);
    for (int v = 0; v < static_cast<int>(D.v_sigma.size()); ++v) {
      const XPath& p = D.rep_path[v];
      CHECK(p.initial() == G->pres.basepoint);
      CHECK(p.terminal() == D.v_sigma[v]);
      CHECK(dev_vertex_of_path(D, p) == v);
    }
    CHECK_THROWS_AS(dev_vertex_of_path(D, constant_path(cog, cog->base->vertices().back())),
                    Error);
  }
}

TEST_CASE("segment development is a three-point interval", "[development]") {
  Pi1Ptr G = pi1_of(corpus::segment_z4_cog());
  REQUIRE(G->group->order() == 4);
  Development D = build_development(G);

  CHECK(D.v_sigma.size() == 3);
  CHECK(D.e_base.size() == 2);
  CHECK(euler_characteristic(D.scwol) == 1);
  SimpleConnectivity sc = check_simply_connected(D.scwol);
  REQUIRE(sc.decided);
  CHECK(sc.simply_connected);

  // the image of the edge group acts trivially on the interval
  Subgroup K = action_kernel(D);
  CHECK(K.order() == 2);
  CHECK(K.contains(G->iota.at(0).apply(1)));
}

TEST_CASE("projective plane development is the sphere", "[development]") {
  Pi1Ptr G = pi1_of(corpus::rp2_cog());
  REQUIRE(G->group->order() == 2);
  Development D = build_development(G);

  CHECK(D.v_sigma.size() == 62);
  CHECK(D.e_base.size() == 180);
  CHECK(euler_characteristic(D.scwol) == 2);
  SimpleConnectivity sc = check_simply_connected(D.scwol);
  REQUIRE(sc.decided);
  CHECK(sc.simply_connected);
  CHECK(action_kernel(D).order() == 1);
}

TEST_CASE("euler characteristics of the base posets", "[development]") {
  // each base scwol is the poset of cells of its space, so the alternating
  // chain count is the Euler characteristic of that space
  CHECK(euler_characteristic(corpus::triangle_scwol()) == 1);    // a disc
  CHECK(euler_characteristic(corpus::segment_z4_cog()->base) == 1);
  CHECK(euler_characteristic(corpus::rp2_cog()->base) == 1);     // chi(RP^2)
}

TEST_CASE("local stars are computable without a development", "[development]") {
  CogPtr cog = corpus::triangle_cog(7);  // fundamental group is infinite

  LocalStar s = local_star(cog, 4);
  CHECK(s.sigma == 4);
  CHECK(s.total == 8);
  std::map<int, int> counts(s.edge_counts.begin(), s.edge_counts.end());
  CHECK(counts == std::map<int, int>{{3, 4}, {6, 2}, {8, 2}});

  LocalStar t = local_star(cog, 6);  // the dihedral corner of order 14
  CHECK(t.total == 14 + 7 + 7);
  std::map<int, int> tcounts(t.edge_counts.begin(), t.edge_counts.end());
  CHECK(tcounts == std::map<int, int>{{5, 14}, {9, 7}, {11, 7}});

  CHECK(local_star(cog, 0).total == 0);  // nothing arrives at the bottom
  CHECK_THROWS_AS(local_star(cog, 99), Error);
}

TEST_CASE("the induced complex of groups is isomorphic", "[development]") {
  for (const CogPtr& cog :
       {corpus::triangle_cog(3), corpus::segment_z4_cog(), corpus::rp2_cog()}) {
    Pi1Ptr G = pi1_of(cog);
    InducedCog I = induced_cog(G);

    CHECK(I.cog->base == cog->base);
    CHECK(cog_morphism_is_isomorphism(I.iso));
    CHECK(I.iso.source == cog);
    CHECK(I.iso.target == I.cog);
    for (int sigma : cog->base->vertices())
      CHECK(I.cog->group_at(sigma)->order() == cog->group_at(sigma)->order());
    for (const ScwolEdge& a : cog->base->edges())
      CHECK(I.h.at(a.id) == h_edge(*G, a.id));
  }
}

TEST_CASE("the canonical covering covers", "[development]") {
  for (const CogPtr& cog :
       {corpus::segment_z4_cog(), corpus::triangle_cog(3), corpus::rp2_cog()}) {
    Pi1Ptr G = pi1_of(cog);
    Development D = build_development(G);

    CogMorphism canon = canonical_covering(D);
    CHECK(canon.target == cog);
    CoveringCheck chk = check_covering(canon);
    CHECK(chk.ok);
    CHECK(chk.reason.empty());

    // the quotient by the trivial subgroup is the development itself
    SubgroupCovering sub = covering_from_subgroup(D, trivial_subgroup(G->group));
    CHECK(cog_morphisms_equal(sub.projection, canon));
    for (int x = 0; x < static_cast<int>(sub.vrep.size()); ++x)
      CHECK(sub.total->group_at(x)->order() == 1);
  }
}

TEST_CASE("the quotient by the full group returns the base", "[development]") {
  CogPtr cog = corpus::triangle_cog(3);
  Pi1Ptr G = pi1_of(cog);
  Development D = build_development(G);

  SubgroupCovering sub = covering_from_subgroup(D, full_subgroup(G->group));
  CHECK(sub.total->base->vertices().size() == cog->base->vertices().size());
  CHECK(sub.total->base->edges().size() == cog->base->edges().size());
  for (int x = 0; x < static_cast<int>(sub.vrep.size()); ++x) {
    int sigma = sub.projection.f.v(x);
    CHECK(sub.total->group_at(x)->order() == cog->group_at(sigma)->order());
  }
  CHECK(check_covering(sub.projection).ok);

  CHECK_THROWS_AS(covering_from_subgroup(D, trivial_subgroup(corpus::z2())), Error);
}

TEST_CASE("an intermediate subgroup quotient still covers", "[development]") {
  Pi1Ptr G = pi1_of(corpus::segment_z4_cog());
  Development D = build_development(G);

  Subgroup centre = subgroup_generated(G->group, {G->iota.at(0).apply(1)});
  REQUIRE(centre.order() == 2);
  SubgroupCovering sub = covering_from_subgroup(D, centre);
  // the image of the edge group acts trivially, so the quotient keeps the
  // interval shape but gains order-two local groups
  CHECK(sub.total->base->vertices().size() == 3);
  CHECK(sub.total->base->edges().size() == 2);
  for (int x = 0; x < 3; ++x) CHECK(sub.total->group_at(x)->order() == 2);
  CHECK(check_covering(sub.projection).ok);
}

TEST_CASE("a local element dying in the fundamental group is rejected",
          "[development]") {
  CogPtr cog = corpus::segment_z4_cog();
  Pi1Group fake;
  fake.pres.cog = cog;
  fake.pres.basepoint = 0;
  fake.group = corpus::one();
  fake.iota = {{0, GroupHom{corpus::z2(), fake.group, {0, 0}}}};

  bool threw = false;
  try {
    build_development(std::make_shared<const Pi1Group>(std::move(fake)));
  } catch (const Error& e) {
    threw = true;
    CHECK(e.code == "NotDevelopable");
  }
  CHECK(threw);
}
