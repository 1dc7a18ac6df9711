#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "padicx/tree.hpp"

using namespace padicx;

namespace {

std::mt19937_64 rng(0x5eed5eedULL);

long rsmall() { return static_cast<long>(rng() % 19) - 9; }

TwistedMatrix random_matrix(long p) {
  while (true) {
    mpq_class a = rsmall(), b = rsmall(), c = rsmall(), d = rsmall();
    // mix in p-powers now and then
    if (rng() % 3 == 0) a *= p;
    if (rng() % 4 == 0) d *= p * p;
    if (a * d - b * c != 0) return TwistedMatrix(a, b, c, d);
  }
}

TreeVertex random_vertex(long p, const Tree& tree) {
  long n = static_cast<long>(rng() % 7) - 3;
  mpq_class c(static_cast<long>(rng() % 2000) - 1000);
  if (rng() % 3 == 0) c /= mpq_class(pow_mpz(p, 1 + rng() % 2));
  return tree.canonical(TreeVertex{n, c});
}

TreeEdge random_edge(long p, const Tree& tree) {
  TreeVertex v = random_vertex(p, tree);
  auto nb = tree.neighbors(v);
  return TreeEdge{v, nb[rng() % nb.size()]};
}

}  // namespace

TEST_CASE("degree p+1 and neighbor symmetry") {
  for (long p : {3L, 5L, 7L}) {
    Tree tree(p);
    for (int i = 0; i < 30; ++i) {
      TreeVertex v = random_vertex(p, tree);
      auto nb = tree.neighbors(v);
      CHECK(nb.size() == static_cast<size_t>(p + 1));
      std::set<std::string> labels;
      for (const auto& w : nb) {
        labels.insert(tree.label(w));
        auto back = tree.neighbors(w);
        bool found = false;
        for (const auto& u : back) found = found || (u == v);
        CHECK(found);
      }
      CHECK(labels.size() == static_cast<size_t>(p + 1));
    }
  }
}

TEST_CASE("explicit neighbor enumeration at p=5") {
  Tree tree(5);
  TreeVertex v{1, 2};
  auto nb = tree.neighbors(v);
  std::set<std::string> got;
  for (const auto& w : nb) got.insert(tree.label(w));
  std::set<std::string> expect = {"V(0;0)",  "V(2;2)",  "V(2;7)",
                                  "V(2;12)", "V(2;17)", "V(2;22)"};
  CHECK(got == expect);
}

TEST_CASE("edge/disc dictionary") {
  Tree tree(5);
  auto e0 = tree.standard_edge();
  Disc d0 = tree.edge_to_disc(e0);
  CHECK(d0 == (Disc{false, 0, 0}));  // Z_p
  Disc dinf = tree.edge_to_disc(e0.reversed());
  CHECK(dinf.complement);
  CHECK(tree.label(dinf) == "Dinf(0)");
  CHECK(tree.contains(dinf, P1Point::inf()));
  CHECK(!tree.contains(dinf, P1Point::of(0)));
  CHECK(tree.contains(dinf, P1Point::of(mpq_class(1, 5))));

  Disc d{false, 2, 3};
  CHECK(tree.edge_to_disc(tree.disc_to_edge(d)) == tree.canonical(d));

  for (long p : {3L, 5L, 7L}) {
    Tree t(p);
    for (int i = 0; i < 1000 / 3; ++i) {
      TreeEdge e = random_edge(p, t);
      Disc de = t.edge_to_disc(e);
      CHECK(t.disc_to_edge(de) == TreeEdge{t.canonical(e.src), t.canonical(e.dst)});
      CHECK(t.edge_to_disc(e.reversed()) == t.complement(de));
    }
  }
}

TEST_CASE("matrix actions") {
  Tree tree(5);
  auto id = TwistedMatrix::identity();
  TreeVertex v{2, 7};
  CHECK(tree.act(id, v) == tree.canonical(v));

  // diag(p,1): x -> p x maps Z_p onto pZ_p.
  auto g = TwistedMatrix::diagonal(5, 1);
  Disc zp{false, 0, 0};
  CHECK(tree.act(g, zp) == (Disc{false, 0, 1}));

  // Action compatibility U_{ge} = g U_e, sampled by points too.
  for (long p : {3L, 5L}) {
    Tree t(p);
    for (int i = 0; i < 100; ++i) {
      auto m = random_matrix(p);
      auto e = random_edge(p, t);
      Disc lhs = t.edge_to_disc(t.act(m, e));
      Disc rhs = t.act(m, t.edge_to_disc(e));
      CHECK(lhs == rhs);
      // membership check: x in U_e  =>  m x in U_{me}
      Disc ue = t.edge_to_disc(e);
      for (long s = 0; s < 6; ++s) {
        P1Point x = (s == 5) ? P1Point::inf()
                             : P1Point::of(mpq_class(rsmall()) +
                                           mpq_class(rsmall()) / mpq_class(pow_mpz(p, 2)));
        CHECK(t.contains(ue, x) == t.contains(lhs, t.act(m, x)));
      }
    }
  }

  // group law on vertices
  Tree t3(3);
  for (int i = 0; i < 50; ++i) {
    auto a = random_matrix(3), b = random_matrix(3);
    TreeVertex v3 = random_vertex(3, t3);
    CHECK(t3.act(a * b, v3) == t3.act(a, t3.act(b, v3)));
  }
}

TEST_CASE("twisted diagonal scales by t1/t2") {
  Tree tree(5);
  // raw = hbar^{-1} diag(t1,t2) hbar; effective action is then diag(t1,t2).
  TwistedMatrix hbar(1, 2, 1, 3);
  mpq_class t1 = 10, t2 = 2;
  TwistedMatrix d = TwistedMatrix::diagonal(t1, t2);
  TwistedMatrix hinv = hbar.inverse_effective();
  TwistedMatrix raw = hinv * d * hbar;
  TwistedMatrix g = TwistedMatrix::twisted(raw, hbar);
  P1Point x = P1Point::of(mpq_class(7, 3));
  P1Point gx = tree.act(g, x);
  CHECK(gx.x == mpq_class(7, 3) * t1 / t2);
}

TEST_CASE("geodesics and distance") {
  Tree tree(3);
  TreeVertex v{1, 1};
  CHECK(tree.geodesic(v, v).empty());
  CHECK(tree.distance(v, v) == 0);

  TreeVertex a{0, 0}, b{2, 0};
  auto path = tree.geodesic(a, b);
  CHECK(path.size() == 2);
  CHECK(path[0] == (TreeEdge{TreeVertex{0, 0}, TreeVertex{1, 0}}));
  CHECK(path[1] == (TreeEdge{TreeVertex{1, 0}, TreeVertex{2, 0}}));

  for (int i = 0; i < 60; ++i) {
    TreeVertex x = random_vertex(3, tree), y = random_vertex(3, tree);
    auto pth = tree.geodesic(x, y);
    CHECK(static_cast<long>(pth.size()) == tree.distance(x, y));
    // consecutive edges chain and stay adjacent
    for (size_t k = 0; k < pth.size(); ++k) {
      CHECK(tree.adjacent(pth[k].src, pth[k].dst));
      if (k) CHECK(pth[k].src == pth[k - 1].dst);
    }
    if (!pth.empty()) {
      CHECK(pth.front().src == x);
      CHECK(pth.back().dst == y);
    }
    auto g = random_matrix(3);
    CHECK(tree.distance(tree.act(g, x), tree.act(g, y)) == tree.distance(x, y));
  }
}

TEST_CASE("hyperbolic axis") {
  Tree tree(5);
  auto q1 = PadicNumber::make(5, 1, 1, 12);
  auto ax1 = tree.hyperbolic_axis(q1);
  CHECK(ax1.h == 1);

  auto q2 = PadicNumber::from_integer(5, 25 * (1 + 5), 12);
  auto ax2 = tree.hyperbolic_axis(q2);
  CHECK(ax2.h == 2);
  for (long m : {0L, 1L, 3L}) {
    Disc d{false, 0, m};
    CHECK(tree.act(ax2.gamma, d) == (Disc{false, 0, m + ax2.h}));
  }
  CHECK_THROWS_AS(tree.hyperbolic_axis(PadicNumber::from_integer(5, 2, 12)), Error);
}

TEST_CASE("depth partition covers P1") {
  for (long p : {3L, 5L}) {
    Tree tree(p);
    for (long m : {1L, 2L, 3L}) {
      auto edges = tree.depth_partition(m);
      long expect = (p + 1);
      for (long i = 1; i < m; ++i) expect *= p;
      CHECK(static_cast<long>(edges.size()) == expect);
      // sample points land in exactly one piece
      for (int s = 0; s < 20; ++s) {
        P1Point x = (s == 0) ? P1Point::inf()
                             : P1Point::of(mpq_class(rsmall()) +
                                           mpq_class(rsmall()) / mpq_class(pow_mpz(p, 2)));
        int hits = 0;
        for (const auto& e : edges)
          if (tree.contains(tree.edge_to_disc(e), x)) ++hits;
        CHECK(hits == 1);
      }
    }
  }
}

TEST_CASE("labels parse back") {
  Tree tree(5);
  for (int i = 0; i < 40; ++i) {
    TreeVertex v = random_vertex(5, tree);
    CHECK(tree.parse_vertex(tree.label(v)) == v);
    TreeEdge e = random_edge(5, tree);
    CHECK(tree.parse_edge(tree.label(e)) == e);
  }
}
