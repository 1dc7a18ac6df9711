#ifndef PADICX_TREE_HPP
#define PADICX_TREE_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "padicx/error.hpp"
#include "padicx/padic.hpp"

namespace padicx {

// Vertex of the Bruhat-Tits tree in the ball model: (n, c mod p^n) is the
// class of the lattice Z_p(c,1) + Z_p(p^n,0); equivalently the ball of
// radius p^(-n) around c in Q_p.
struct TreeVertex {
  long n = 0;
  mpq_class c = 0;  // canonical representative mod p^n

  bool operator==(const TreeVertex& o) const { return n == o.n && c == o.c; }
  bool operator!=(const TreeVertex& o) const { return !(*this == o); }
};

struct TreeEdge {
  TreeVertex src, dst;

  TreeEdge reversed() const { return TreeEdge{dst, src}; }
  bool operator==(const TreeEdge& o) const { return src == o.src && dst == o.dst; }
  bool operator!=(const TreeEdge& o) const { return !(*this == o); }
};

// A disc of P^1(Q_p): either {v(x-a) >= m} or its complement
// {v(x-a) < m} + {inf}.  Complements of discs are discs.
struct Disc {
  bool complement = false;
  mpq_class a = 0;  // canonical mod p^m
  long m = 0;

  bool operator==(const Disc& o) const {
    return complement == o.complement && a == o.a && m == o.m;
  }
  bool operator!=(const Disc& o) const { return !(*this == o); }
};

struct P1Point {
  bool infinity = false;
  mpq_class x = 0;

  static P1Point inf() { return P1Point{true, 0}; }
  static P1Point of(const mpq_class& v) { return P1Point{false, v}; }
  bool operator==(const P1Point& o) const {
    return infinity == o.infinity && (infinity || x == o.x);
  }
};

// 2x2 rational matrix acting on the tree and on P^1.  When twisted, the
// effective action is Ad(hbar) applied to the raw matrix first.
class TwistedMatrix {
 public:
  TwistedMatrix() { m_[0][0] = m_[1][1] = 1; }
  TwistedMatrix(mpq_class a, mpq_class b, mpq_class c, mpq_class d);
  static TwistedMatrix identity() { return TwistedMatrix(); }
  static TwistedMatrix diagonal(const mpq_class& t1, const mpq_class& t2);
  // twisted constructor: raw matrix with a conjugator hbar
  static TwistedMatrix twisted(const TwistedMatrix& raw, const TwistedMatrix& hbar);

  const mpq_class& at(int i, int j) const { return m_[i][j]; }
  mpq_class det() const { return m_[0][0] * m_[1][1] - m_[0][1] * m_[1][0]; }
  bool is_twisted() const { return twisted_; }

  // The matrix that actually acts (Ad(hbar) raw when twisted).
  TwistedMatrix effective() const;
  TwistedMatrix inverse_effective() const;
  TwistedMatrix operator*(const TwistedMatrix& o) const;  // effective composition

 private:
  mpq_class m_[2][2] = {{0, 0}, {0, 0}};
  bool twisted_ = false;
  // stored only when twisted
  mpq_class h_[2][2] = {{1, 0}, {0, 1}};
};

// p-adic valuation of a rational (errors on 0).
long vp(const mpq_class& q, long p);
// canonical representative of c mod p^n Z_p
mpq_class canonical_mod(const mpq_class& c, long n, long p);

class Tree {
 public:
  explicit Tree(long p);

  long prime() const { return p_; }

  TreeVertex base_vertex() const { return TreeVertex{0, 0}; }
  // e0: (-1,0) -> (0,0); carries U = Z_p.
  TreeEdge standard_edge() const;

  TreeVertex canonical(const TreeVertex& v) const;
  TreeVertex parent(const TreeVertex& v) const;
  std::vector<TreeVertex> children(const TreeVertex& v) const;
  std::vector<TreeVertex> neighbors(const TreeVertex& v) const;
  bool adjacent(const TreeVertex& a, const TreeVertex& b) const;

  long distance(const TreeVertex& a, const TreeVertex& b) const;
  std::vector<TreeEdge> geodesic(const TreeVertex& a, const TreeVertex& b) const;

  Disc canonical(const Disc& d) const;
  Disc complement(const Disc& d) const;
  Disc edge_to_disc(const TreeEdge& e) const;
  TreeEdge disc_to_edge(const Disc& d) const;
  bool contains(const Disc& d, const P1Point& x) const;

  TreeVertex act(const TwistedMatrix& g, const TreeVertex& v) const;
  TreeEdge act(const TwistedMatrix& g, const TreeEdge& e) const;
  Disc act(const TwistedMatrix& g, const Disc& d) const;
  P1Point act(const TwistedMatrix& g, const P1Point& x) const;

  // Diagonal scaling matrix with Moebius action x -> qtilde * x and
  // translation length h = v(qtilde) along the (0, inf) axis.
  struct Axis {
    TwistedMatrix gamma;
    long h = 0;
    // Edge (i,0) -> (i+1,0), oriented from inf toward 0.
    TreeEdge edge(long i) const { return TreeEdge{TreeVertex{i, 0}, TreeVertex{i + 1, 0}}; }
  };
  Axis hyperbolic_axis(const PadicNumber& qtilde) const;

  // The (p+1)p^(m-1) oriented edges from distance m-1 to distance m around the
  // base vertex; their discs partition P^1(Q_p).  m >= 1.
  std::vector<TreeEdge> depth_partition(long m) const;

  std::string label(const TreeVertex& v) const;
  std::string label(const TreeEdge& e) const;
  std::string label(const Disc& d) const;
  TreeVertex parse_vertex(const std::string&) const;
  TreeEdge parse_edge(const std::string&) const;

 private:
  long p_;
};

}  // namespace padicx

#endif
