#include <catch2/catch_amalgamated.hpp>

#include "cogs/xpath.hpp"

#include "cogs/presentation.hpp"
#include "corpus.hpp"

using namespace cogs;

TEST_CASE("path construction is validated", "[xpath]") {
  CogPtr X = corpus::triangle_cog(3);
  CHECK_NOTHROW(make_xpath(X, 0, {0}, {}));
  CHECK_NOTHROW(make_xpath(X, 0, {0, 1}, {{0, true}}));
  CHECK_NOTHROW(make_xpath(X, 4, {2, 0}, {{3, false}}));
  // element out of range at the face (trivial group)
  CHECK_THROWS_AS(make_xpath(X, 0, {1}, {}), Error);
  // chain broken: edge 6 starts at 1, not at 0
  CHECK_THROWS_AS(make_xpath(X, 0, {0, 0}, {{6, true}}), Error);
  // one element too few
  CHECK_THROWS_AS(make_xpath(X, 0, {0}, {{0, true}}), Error);
}

TEST_CASE("concat and inverse behave like groupoid operations", "[xpath]") {
  CogPtr X = corpus::triangle_cog(3);
  XPath p = make_xpath(X, 0, {0, 1}, {{0, true}});
  XPath q = make_xpath(X, 1, {0, 2}, {{6, true}});
  XPath pq = concat(p, q);
  CHECK(pq.initial() == 0);
  CHECK(pq.terminal() == 4);
  CHECK(pq.length() == 2);
  // concat multiplies the junction elements
  CHECK(pq.elts == std::vector<int>{0, 1, 2});
  XPath rev = inverse_path(pq);
  CHECK(rev.initial() == 4);
  CHECK(rev.terminal() == 0);
  CHECK(rev.elts == std::vector<int>{X->group_at(4)->inv(2), 1, 0});
}

TEST_CASE("each move kind preserves endpoints and homotopy class", "[xpath]") {
  CogPtr X = corpus::triangle_cog(3);
  Pi1Outcome o = compute_pi1(X, 0);
  REQUIRE(o.complete);
  const Pi1Group& G = *o.pi1;

  // visits 1 -> 4 -> 1 -> 0 -> 2 -> 4 -> 0 with a backtrack pair (6+, 6-),
  // a composable pair (1+, 8+) and a backward composite (3-)
  XPath p = make_xpath(X, 1, {0, 1, 0, 0, 0, 0, 0},
                       {{6, true},
                        {6, false},
                        {0, false},
                        {1, true},
                        {8, true},
                        {3, false}});
  int cls = class_of_path(G, p);
  auto check_move = [&](const Move& mv) {
    XPath r = apply_move(p, mv);
    // re-validate the result from scratch
    CHECK_NOTHROW(make_xpath(r.cog, r.start, r.elts, r.edges));
    CHECK(r.initial() == p.initial());
    CHECK(r.terminal() == p.terminal());
    CHECK(class_of_path(G, r) == cls);
    return r;
  };

  check_move({MoveKind::Ia, 0, false, {1}});
  check_move({MoveKind::Ib, 1, false, {1}});
  XPath collapsed = check_move({MoveKind::IIa, 0, false, {}});
  CHECK(collapsed.length() == p.length() - 2);
  check_move({MoveKind::IIa, 2, true, {6, 1, 0}});
  check_move({MoveKind::IIb, 0, true, {0, 1, 0}});
  XPath shortened = check_move({MoveKind::IIIa, 3, false, {}});
  CHECK(shortened.length() == p.length() - 1);
  XPath expanded = check_move({MoveKind::IIIb, 5, true, {6, 0}});
  CHECK(expanded.length() == p.length() + 1);
}

TEST_CASE("moves reject non-matching patterns", "[xpath]") {
  CogPtr X = corpus::triangle_cog(3);
  XPath p = make_xpath(X, 0, {0, 1, 0}, {{0, true}, {6, true}});
  // Ia at a backward edge position
  CHECK_THROWS_AS(apply_move(p, {MoveKind::Ib, 0, false, {1}}), Error);
  // IIa contraction needs (a+, a-)
  CHECK_THROWS_AS(apply_move(p, {MoveKind::IIa, 0, false, {}}), Error);
  // IIIa contraction needs the middle element to be the identity
  XPath q = make_xpath(X, 0, {0, 1, 0}, {{0, true}, {6, true}});
  CHECK_THROWS_AS(apply_move(q, {MoveKind::IIIa, 0, false, {}}), Error);
  // IIIa with identity middle works and lands on the composite edge 3
  XPath r = make_xpath(X, 0, {0, 0, 2}, {{0, true}, {6, true}});
  XPath s = apply_move(r, {MoveKind::IIIa, 0, false, {}});
  CHECK(s.edges.size() == 1);
  CHECK(s.edges[0].edge == 3);
}

TEST_CASE("random moves preserve the class on several complexes", "[xpath]") {
  std::mt19937 rng(2024);
  for (const CogPtr& X :
       {corpus::triangle_cog(3), corpus::segment_z4_cog(), corpus::rp2_cog()}) {
    Pi1Outcome o = compute_pi1(X, X->base->vertices().front());
    REQUIRE(o.complete);
    const Pi1Group& G = *o.pi1;
    for (int trial = 0; trial < 60; ++trial) {
      XPath p = corpus::random_xpath(X, rng, 4);
      int cls = class_of_path(G, p);
      XPath q = p;
      for (int step = 0; step < 3; ++step) q = corpus::random_move(q, rng);
      CHECK_NOTHROW(make_xpath(q.cog, q.start, q.elts, q.edges));
      CHECK(q.initial() == p.initial());
      CHECK(q.terminal() == p.terminal());
      CHECK(class_of_path(G, q) == cls);
    }
  }
}

TEST_CASE("class equality matches explicit move sequences", "[xpath]") {
  CogPtr X = corpus::segment_z4_cog();
  Pi1Outcome o = compute_pi1(X, 0);
  REQUIRE(o.complete);
  const Pi1Group& G = *o.pi1;
  std::mt19937 rng(7);

  int same_found = 0, diff_blocked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    XPath p = corpus::random_xpath(X, rng, 2);
    // q reached by two explicit moves: must be recovered by the search
    XPath q = corpus::random_move(corpus::random_move(p, rng), rng);
    corpus::MoveSearch via = corpus::connected_by_moves(p, q, p.length() + 4, 200000);
    CHECK(class_of_path(G, p) == class_of_path(G, q));
    CHECK(via.found);
    if (via.found) ++same_found;

    // an independent random path with a different class must never be found
    XPath r = corpus::random_xpath(X, rng, 2);
    if (r.initial() == p.initial() && r.terminal() == p.terminal() &&
        class_of_path(G, r) != class_of_path(G, p)) {
      corpus::MoveSearch miss = corpus::connected_by_moves(p, r, p.length() + 4, 5000);
      CHECK_FALSE(miss.found);
      ++diff_blocked;
    }
  }
  CHECK(same_found == 40);
  CHECK(diff_blocked > 5);
}

TEST_CASE("mapping a path along a morphism lands in the target", "[xpath]") {
  CogPtr X = corpus::triangle_cog(3);
  CogMorphism id = identity_cog_morphism(X);
  XPath p = make_xpath(X, 1, {1, 2, 0}, {{6, true}, {3, false}});
  XPath q = map_path(id, p);
  CHECK(q.initial() == p.initial());
  CHECK(q.terminal() == p.terminal());
  Pi1Outcome o = compute_pi1(X, 0);
  REQUIRE(o.complete);
  CHECK(class_of_path(*o.pi1, q) == class_of_path(*o.pi1, p));
}
