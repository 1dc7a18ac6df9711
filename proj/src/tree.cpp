#include "padicx/tree.hpp"

#include <algorithm>
#include <sstream>

namespace padicx {

long vp(const mpq_class& q, long p) { return valuation_mpq(q, p); }

mpq_class canonical_mod(const mpq_class& c, long n, long p) {
  if (c == 0) return 0;
  // integers in [0, p^n) are already canonical representatives
  if (c.get_den() == 1 && c > 0 && n >= 0 && c.get_num() < pow_mpz(p, n)) return c;
  long v = vp(c, p);
  if (v >= n) return 0;
  // c = p^v * (nu/du) with nu, du prime to p; reduce nu/du mod p^(n-v).
  mpz_class nu, du;
  valuation_mpz(c.get_num(), p, &nu);
  valuation_mpz(c.get_den(), p, &du);
  mpz_class mod = pow_mpz(p, n - v);
  mpz_class dinv;
  mpz_invert(dinv.get_mpz_t(), du.get_mpz_t(), mod.get_mpz_t());
  mpz_class t = nu * dinv % mod;
  if (t < 0) t += mod;
  mpq_class r(t);
  if (v >= 0)
    r *= mpq_class(pow_mpz(p, v));
  else
    r /= mpq_class(pow_mpz(p, -v));
  return r;
}

TwistedMatrix::TwistedMatrix(mpq_class a, mpq_class b, mpq_class c, mpq_class d) {
  m_[0][0] = std::move(a);
  m_[0][1] = std::move(b);
  m_[1][0] = std::move(c);
  m_[1][1] = std::move(d);
  if (det() == 0) fail(errc::singular_matrix, "zero determinant");
}

TwistedMatrix TwistedMatrix::diagonal(const mpq_class& t1, const mpq_class& t2) {
  return TwistedMatrix(t1, 0, 0, t2);
}

TwistedMatrix TwistedMatrix::twisted(const TwistedMatrix& raw, const TwistedMatrix& hbar) {
  TwistedMatrix g = raw;
  g.twisted_ = true;
  g.h_[0][0] = hbar.m_[0][0];
  g.h_[0][1] = hbar.m_[0][1];
  g.h_[1][0] = hbar.m_[1][0];
  g.h_[1][1] = hbar.m_[1][1];
  mpq_class hd = g.h_[0][0] * g.h_[1][1] - g.h_[0][1] * g.h_[1][0];
  if (hd == 0) fail(errc::singular_matrix, "singular twist conjugator");
  return g;
}

TwistedMatrix TwistedMatrix::effective() const {
  if (!twisted_) return *this;
  // hbar * M * hbar^{-1}
  mpq_class hd = h_[0][0] * h_[1][1] - h_[0][1] * h_[1][0];
  mpq_class hm[2][2] = {{h_[0][0] * m_[0][0] + h_[0][1] * m_[1][0],
                         h_[0][0] * m_[0][1] + h_[0][1] * m_[1][1]},
                        {h_[1][0] * m_[0][0] + h_[1][1] * m_[1][0],
                         h_[1][0] * m_[0][1] + h_[1][1] * m_[1][1]}};
  mpq_class hi[2][2] = {{h_[1][1] / hd, -h_[0][1] / hd}, {-h_[1][0] / hd, h_[0][0] / hd}};
  return TwistedMatrix(hm[0][0] * hi[0][0] + hm[0][1] * hi[1][0],
                       hm[0][0] * hi[0][1] + hm[0][1] * hi[1][1],
                       hm[1][0] * hi[0][0] + hm[1][1] * hi[1][0],
                       hm[1][0] * hi[0][1] + hm[1][1] * hi[1][1]);
}

TwistedMatrix TwistedMatrix::inverse_effective() const {
  TwistedMatrix e = effective();
  mpq_class d = e.det();
  return TwistedMatrix(e.m_[1][1] / d, -e.m_[0][1] / d, -e.m_[1][0] / d, e.m_[0][0] / d);
}

TwistedMatrix TwistedMatrix::operator*(const TwistedMatrix& o) const {
  TwistedMatrix a = effective(), b = o.effective();
  return TwistedMatrix(a.m_[0][0] * b.m_[0][0] + a.m_[0][1] * b.m_[1][0],
                       a.m_[0][0] * b.m_[0][1] + a.m_[0][1] * b.m_[1][1],
                       a.m_[1][0] * b.m_[0][0] + a.m_[1][1] * b.m_[1][0],
                       a.m_[1][0] * b.m_[0][1] + a.m_[1][1] * b.m_[1][1]);
}

Tree::Tree(long p) : p_(p) {
  if (p < 3 || p % 2 == 0) fail(errc::domain_violation, "p must be an odd prime");
}

TreeEdge Tree::standard_edge() const {
  return TreeEdge{TreeVertex{-1, 0}, TreeVertex{0, 0}};
}

TreeVertex Tree::canonical(const TreeVertex& v) const {
  return TreeVertex{v.n, canonical_mod(v.c, v.n, p_)};
}

TreeVertex Tree::parent(const TreeVertex& v) const {
  return TreeVertex{v.n - 1, canonical_mod(v.c, v.n - 1, p_)};
}

std::vector<TreeVertex> Tree::children(const TreeVertex& v) const {
  std::vector<TreeVertex> out;
  out.reserve(p_);
  mpq_class step = (v.n >= 0) ? mpq_class(pow_mpz(p_, v.n))
                              : mpq_class(1) / mpq_class(pow_mpz(p_, -v.n));
  for (long t = 0; t < p_; ++t)
    out.push_back(canonical(TreeVertex{v.n + 1, v.c + mpq_class(t) * step}));
  return out;
}

std::vector<TreeVertex> Tree::neighbors(const TreeVertex& v) const {
  std::vector<TreeVertex> out = children(v);
  out.push_back(parent(v));
  return out;
}

bool Tree::adjacent(const TreeVertex& a, const TreeVertex& b) const {
  return distance(a, b) == 1;
}

long Tree::distance(const TreeVertex& a, const TreeVertex& b) const {
  TreeVertex x = canonical(a), y = canonical(b);
  long meet;
  if (x.c == y.c)
    meet = std::min(x.n, y.n);
  else
    meet = std::min(std::min(x.n, y.n), vp(x.c - y.c, p_));
  return (x.n - meet) + (y.n - meet);
}

std::vector<TreeEdge> Tree::geodesic(const TreeVertex& a, const TreeVertex& b) const {
  TreeVertex x = canonical(a), y = canonical(b);
  long meet;
  if (x.c == y.c)
    meet = std::min(x.n, y.n);
  else
    meet = std::min(std::min(x.n, y.n), vp(x.c - y.c, p_));
  std::vector<TreeEdge> down, up;
  TreeVertex cur = x;
  while (cur.n > meet) {
    TreeVertex pr = parent(cur);
    down.push_back(TreeEdge{cur, pr});
    cur = pr;
  }
  TreeVertex cur2 = y;
  while (cur2.n > meet) {
    TreeVertex pr = parent(cur2);
    up.push_back(TreeEdge{pr, cur2});
    cur2 = pr;
  }
  std::reverse(up.begin(), up.end());
  down.insert(down.end(), up.begin(), up.end());
  return down;
}

Disc Tree::canonical(const Disc& d) const {
  return Disc{d.complement, canonical_mod(d.a, d.m, p_), d.m};
}

Disc Tree::complement(const Disc& d) const { return Disc{!d.complement, d.a, d.m}; }

Disc Tree::edge_to_disc(const TreeEdge& e) const {
  TreeVertex s = canonical(e.src), t = canonical(e.dst);
  if (t.n == s.n + 1 && parent(t) == s) return Disc{false, t.c, t.n};
  if (t.n == s.n - 1 && parent(s) == t) return Disc{true, s.c, s.n};
  fail(errc::domain_violation, "edge endpoints not adjacent");
}

TreeEdge Tree::disc_to_edge(const Disc& d) const {
  Disc c = canonical(d);
  TreeVertex inner{c.m, c.a};
  TreeVertex outer = parent(inner);
  if (!c.complement) return TreeEdge{outer, inner};
  return TreeEdge{inner, outer};
}

bool Tree::contains(const Disc& d, const P1Point& x) const {
  Disc c = canonical(d);
  if (x.infinity) return c.complement;
  bool in_ball = (x.x == c.a) || (vp(x.x - c.a, p_) >= c.m);
  return c.complement ? !in_ball : in_ball;
}

P1Point Tree::act(const TwistedMatrix& g, const P1Point& x) const {
  TwistedMatrix e = g.effective();
  const mpq_class &A = e.at(0, 0), &B = e.at(0, 1), &C = e.at(1, 0), &D = e.at(1, 1);
  if (x.infinity) {
    if (C == 0) return P1Point::inf();
    return P1Point::of(A / C);
  }
  mpq_class den = C * x.x + D;
  if (den == 0) return P1Point::inf();
  return P1Point::of((A * x.x + B) / den);
}

TreeVertex Tree::act(const TwistedMatrix& g, const TreeVertex& v) const {
  TreeVertex w = canonical(v);
  TwistedMatrix e = g.effective();
  // Lattice columns (c,1) and (p^n, 0).
  mpq_class pn = (w.n >= 0) ? mpq_class(pow_mpz(p_, w.n))
                            : mpq_class(1) / mpq_class(pow_mpz(p_, -w.n));
  mpq_class u1 = e.at(0, 0) * w.c + e.at(0, 1);
  mpq_class u2 = e.at(1, 0) * w.c + e.at(1, 1);
  mpq_class v1 = e.at(0, 0) * pn;
  mpq_class v2 = e.at(1, 0) * pn;
  // Canonicalize the lattice spanned by (u1,u2), (v1,v2).
  if (u2 == 0 || (v2 != 0 && vp(u2, p_) > vp(v2, p_))) {
    std::swap(u1, v1);
    std::swap(u2, v2);
  }
  if (v2 != 0) {
    mpq_class t = v2 / u2;  // in Z_p
    v1 -= t * u1;
    v2 = 0;
  }
  mpq_class c0 = u1 / u2;
  mpq_class w0 = v1 / u2;
  long n2 = vp(w0, p_);
  return TreeVertex{n2, canonical_mod(c0, n2, p_)};
}

TreeEdge Tree::act(const TwistedMatrix& g, const TreeEdge& e) const {
  return TreeEdge{act(g, e.src), act(g, e.dst)};
}

Disc Tree::act(const TwistedMatrix& g, const Disc& d) const {
  return edge_to_disc(act(g, disc_to_edge(d)));
}

Tree::Axis Tree::hyperbolic_axis(const PadicNumber& qtilde) const {
  if (qtilde.prime() != p_) fail(errc::prime_mismatch, "hyperbolic_axis");
  if (qtilde.is_zero() || qtilde.valuation() < 1)
    fail(errc::not_hyperbolic, "need v(qtilde) >= 1");
  Axis ax;
  ax.h = qtilde.valuation();
  ax.gamma = TwistedMatrix::diagonal(qtilde.lift_rational(), 1);
  return ax;
}

std::vector<TreeEdge> Tree::depth_partition(long m) const {
  if (m < 1) fail(errc::domain_violation, "depth_partition needs m >= 1");
  // BFS outward; in a tree the unique neighbor toward the base is the vertex
  // we came from, so no distance computations are needed.
  std::vector<TreeEdge> edges;
  TreeVertex base = base_vertex();
  for (const auto& w : neighbors(base)) edges.push_back(TreeEdge{base, w});
  for (long d = 2; d <= m; ++d) {
    std::vector<TreeEdge> next;
    next.reserve(edges.size() * p_);
    for (const auto& e : edges) {
      for (const auto& w : neighbors(e.dst)) {
        if (w == e.src) continue;
        next.push_back(TreeEdge{e.dst, w});
      }
    }
    edges = std::move(next);
  }
  return edges;
}

std::string Tree::label(const TreeVertex& v) const {
  TreeVertex w = canonical(v);
  return "V(" + std::to_string(w.n) + ";" + w.c.get_str() + ")";
}

std::string Tree::label(const TreeEdge& e) const {
  TreeVertex s = canonical(e.src), t = canonical(e.dst);
  return "E(" + std::to_string(s.n) + ";" + s.c.get_str() + ")>(" + std::to_string(t.n) + ";" +
         t.c.get_str() + ")";
}

std::string Tree::label(const Disc& d) const {
  Disc c = canonical(d);
  std::ostringstream os;
  if (!c.complement) {
    os << "D(" << c.a << ";" << c.m << ")";
  } else if (c.a == 0) {
    os << "Dinf(" << -c.m << ")";
  } else {
    os << "Dc(" << c.a << ";" << c.m << ")";
  }
  return os.str();
}

namespace {

std::pair<long, mpq_class> parse_pair(const std::string& s, size_t& i) {
  auto bad = [&]() -> void { fail(errc::parse_error, "bad tree label: " + s); };
  if (i >= s.size() || s[i] != '(') bad();
  ++i;
  size_t semi = s.find(';', i);
  size_t close = s.find(')', i);
  if (semi == std::string::npos || close == std::string::npos || semi > close) bad();
  long n = std::stol(s.substr(i, semi - i));
  mpq_class c(s.substr(semi + 1, close - semi - 1));
  c.canonicalize();
  i = close + 1;
  return {n, c};
}

}  // namespace

TreeVertex Tree::parse_vertex(const std::string& s) const {
  if (s.rfind("V", 0) != 0) fail(errc::parse_error, "bad vertex label: " + s);
  size_t i = 1;
  auto [n, c] = parse_pair(s, i);
  return canonical(TreeVertex{n, c});
}

TreeEdge Tree::parse_edge(const std::string& s) const {
  if (s.rfind("E", 0) != 0) fail(errc::parse_error, "bad edge label: " + s);
  size_t i = 1;
  auto [n1, c1] = parse_pair(s, i);
  if (i >= s.size() || s[i] != '>') fail(errc::parse_error, "bad edge label: " + s);
  ++i;
  auto [n2, c2] = parse_pair(s, i);
  return TreeEdge{canonical(TreeVertex{n1, c1}), canonical(TreeVertex{n2, c2})};
}

}  // namespace padicx
