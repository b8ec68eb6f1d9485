#include "kd/bar.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace kd {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error("bar: " + what); }

Scalar sgn(const Field& f, int exp) {
  return exp % 2 == 0 ? Scalar::one(f) : Scalar::zero(f) - Scalar::one(f);
}

void place(MatrixBuilder& b, const SparseMatrix& m, int r0, int c0, const Scalar& coeff) {
  for (const auto& e : m.entries()) b.add(r0 + e.row, c0 + e.col, e.val * coeff);
}

bool same_algebra(const DgAlgebra& a, const DgAlgebra& b) {
  return a.name == b.name && a.underlying == b.underlying;
}

std::vector<int> support(const ChainComplex& c) {
  std::vector<int> s;
  for (int d = c.window().lo; d <= c.window().hi; ++d)
    if (c.dim(d) > 0) s.push_back(d);
  return s;
}

// Complement of a distinguished degree-0 line: the kernel of a functional
// (augmentation or counit) split off against the unit column. Degrees other
// than 0 are untouched.
struct Reduced {
  const ChainComplex* x = nullptr;
  SparseMatrix incl0, proj0;
  bool split0 = false;

  int dim(int d) const {
    if (d == 0 && split0) return incl0.cols();
    return x->dim(d);
  }
  SparseMatrix incl(int d) const {
    if (d == 0 && split0) return incl0;
    return SparseMatrix::identity(x->field(), x->dim(d));
  }
  SparseMatrix proj(int d) const {
    if (d == 0 && split0) return proj0;
    return SparseMatrix::identity(x->field(), x->dim(d));
  }
};

Reduced reduced_complement(const ChainComplex& x, const SparseMatrix& functional,
                           const SparseMatrix& unitcol) {
  Reduced r;
  r.x = &x;
  int n0 = x.window().contains(0) ? x.dim(0) : 0;
  if (n0 == 0) return r;
  const Field& f = x.field();
  SparseMatrix k = functional.kernel();
  SparseMatrix s = hcat(k, unitcol);
  if (s.cols() != n0) fail("degree-0 functional does not split off the unit line");
  MatrixBuilder pb(f, k.cols(), n0);
  for (int j = 0; j < n0; ++j) {
    std::vector<Scalar> e(n0, Scalar::zero(f)), sol;
    e[j] = Scalar::one(f);
    if (!solve(s, e, sol)) fail("degree-0 splitting is singular");
    for (int i = 0; i < k.cols(); ++i)
      if (!sol[i].is_zero()) pb.add(i, j, sol[i]);
  }
  r.incl0 = k;
  r.proj0 = pb.build();
  r.split0 = true;
  return r;
}

// Name of the i-th adapted basis vector in degree d, falling back on the base
// name when the complement column is a standard basis vector.
std::string reduced_name(const Reduced& r, const std::function<std::string(int, int)>& base,
                         int d, int i) {
  if (d != 0 || !r.split0) return base(d, i);
  int hit = -1;
  for (const auto& e : r.incl0.entries())
    if (e.col == i) {
      if (hit >= 0 || !e.val.is_one()) return "q0#" + std::to_string(i);
      hit = e.row;
    }
  return hit >= 0 ? base(0, hit) : "q0#" + std::to_string(i);
}

// ---------------------------------------------------------------------------
// Word enumeration shared by bar and cobar
// ---------------------------------------------------------------------------

using LetterDim = std::function<int(int)>;

struct BarData {
  std::map<int, std::vector<BarBlock>> blocks;
  std::map<int, int> dims;
  bool truncated = false;

  const BarBlock* find(int degree, const BarShape& s) const {
    auto it = blocks.find(degree);
    if (it == blocks.end()) return nullptr;
    auto b = std::lower_bound(it->second.begin(), it->second.end(), s,
                              [](const BarBlock& blk, const BarShape& sh) { return blk.shape < sh; });
    if (b == it->second.end() || !(b->shape == s)) return nullptr;
    return &*b;
  }
};

struct ShapeDims {
  int dm;
  std::vector<int> dl;
  int dn;
  int size;
  int letter_prod;  // product of dl
};

ShapeDims shape_dims(const ChainComplex& m, const LetterDim& ldim, const ChainComplex& n,
                     const BarShape& s) {
  ShapeDims d;
  d.dm = m.dim(s.m_deg);
  d.letter_prod = 1;
  for (int l : s.letters) {
    d.dl.push_back(ldim(l));
    d.letter_prod *= d.dl.back();
  }
  d.dn = n.dim(s.n_deg);
  d.size = d.dm * d.letter_prod * d.dn;
  return d;
}

void shapes_at(const ChainComplex& m, const LetterDim& ldim, const ChainComplex& n, int degree,
               std::vector<BarShape>& out) {
  std::vector<int> sm = support(m), sn = support(n);
  if (sm.empty() || sn.empty()) return;
  std::vector<int> ls;
  int maxl = degree - sm.front() - sn.front();
  for (int l = 1; l <= maxl; ++l)
    if (ldim(l) > 0) ls.push_back(l);
  int min_n = sn.front();
  int max_w = ls.empty() ? 0 : (degree - sm.front() - min_n) / ls.front();
  for (int w = 0; w <= std::max(0, max_w); ++w) {
    for (int p : sm) {
      BarShape s;
      s.m_deg = p;
      s.letters.assign(w, 0);
      std::function<void(int, int)> rec = [&](int depth, int left) {
        if (depth == w) {
          if (n.dim(left) > 0) {
            s.n_deg = left;
            out.push_back(s);
          }
          return;
        }
        int tail = w - depth - 1;
        for (int l : ls) {
          if (left - l < tail * ls.front() + min_n) break;
          s.letters[depth] = l;
          rec(depth + 1, left - l);
        }
      };
      rec(0, degree - p);
    }
  }
}

BarData enumerate_words(const ChainComplex& m, const LetterDim& ldim, const ChainComplex& n,
                        Window w) {
  BarData bd;
  for (int deg = w.lo; deg <= w.hi + 1; ++deg) {
    std::vector<BarShape> shapes;
    shapes_at(m, ldim, n, deg, shapes);
    int off = 0;
    std::vector<BarBlock> row;
    for (auto& s : shapes) {
      int sz = shape_dims(m, ldim, n, s).size;
      if (sz == 0) continue;
      row.push_back({s, off, sz});
      off += sz;
    }
    if (deg == w.hi + 1) {
      bd.truncated = off > 0;
      break;
    }
    bd.blocks.emplace(deg, std::move(row));
    bd.dims.emplace(deg, off);
  }
  return bd;
}

// ---------------------------------------------------------------------------
// Reduced bar core
// ---------------------------------------------------------------------------

// All maps below are assembled blockwise: an operation acting on adjacent
// factors of a word extends by identity on the rest, with the Koszul sign of
// the suspended degrees to its left supplied by the caller.
void place_factor_op(MatrixBuilder& b, const SparseMatrix& op, int lsize, int rsize, int roff,
                     int coff, const Scalar& coeff) {
  if (op.is_zero()) return;
  for (const auto& e : op.entries())
    for (int l = 0; l < lsize; ++l)
      for (int r = 0; r < rsize; ++r)
        b.add(roff + (l * op.rows() + e.row) * rsize + r, coff + (l * op.cols() + e.col) * rsize + r,
              e.val * coeff);
}

BarComplex build_bar_core(const DgBimodule& m, const DgAlgebra& a, const DgBimodule& n, Window w) {
  if (!same_algebra(m.right_algebra, a))
    fail("side mismatch: left input is not a right module over the algebra");
  if (!same_algebra(n.left_algebra, a))
    fail("side mismatch: right input is not a left module over the algebra");
  if (!w.contains(0)) fail("window must contain degree 0");
  for (int d = w.lo; d < 0; ++d)
    if (a.underlying.dim(d) > 0)
      fail("bar regime violation: algebra '" + a.name + "' has elements in negative degrees");
  const Field& f = a.underlying.field();
  Reduced ra = reduced_complement(a.underlying, a.augmentation, a.unit);
  LetterDim ldim = [&](int l) { return l >= 1 ? ra.dim(l - 1) : 0; };
  const ChainComplex& cm = m.underlying;
  const ChainComplex& cn = n.underlying;
  BarData bd = enumerate_words(cm, ldim, cn, w);

  // letter-wise operators in adapted coordinates
  auto dv = [&](int l) {  // d on Abar[1]: the suspension flips the sign
    return (ra.proj(l - 2) * a.underlying.diff(l - 1) * ra.incl(l - 1)).scaled(sgn(f, 1));
  };
  auto mu = [&](int l1, int l2) {  // merged letter, suspended degree l1+l2-1
    return ra.proj(l1 + l2 - 2) * a.product_at(l1 - 1, l2 - 1) * kron(ra.incl(l1 - 1), ra.incl(l2 - 1));
  };

  std::map<int, SparseMatrix> dint, dext, dsum;
  for (int deg = w.lo + 1; deg <= w.hi; ++deg) {
    MatrixBuilder bi(f, bd.dims.at(deg - 1), bd.dims.at(deg));
    MatrixBuilder be(f, bd.dims.at(deg - 1), bd.dims.at(deg));
    for (const BarBlock& blk : bd.blocks.at(deg)) {
      const BarShape& s = blk.shape;
      ShapeDims sd = shape_dims(cm, ldim, cn, s);
      int wgt = s.weight();
      std::vector<int> pre(wgt + 1, 0);  // pre[i] = sum of the first i letter degrees
      for (int i = 0; i < wgt; ++i) pre[i + 1] = pre[i] + s.letters[i];

      // internal differential, factor by factor
      {
        BarShape t = s;
        t.m_deg -= 1;
        if (const BarBlock* tb = bd.find(deg - 1, t)) {
          int rsize = sd.letter_prod * sd.dn;
          place_factor_op(bi, cm.diff(s.m_deg), 1, rsize, tb->offset, blk.offset, Scalar::one(f));
        }
      }
      for (int j = 0; j < wgt; ++j) {
        BarShape t = s;
        t.letters[j] -= 1;
        const BarBlock* tb = t.letters[j] >= 1 ? bd.find(deg - 1, t) : nullptr;
        if (!tb) continue;
        int lsize = sd.dm, rsize = sd.dn;
        for (int j2 = 0; j2 < j; ++j2) lsize *= sd.dl[j2];
        for (int j2 = j + 1; j2 < wgt; ++j2) rsize *= sd.dl[j2];
        place_factor_op(bi, dv(s.letters[j]), lsize, rsize, tb->offset, blk.offset,
                        sgn(f, s.m_deg + pre[j]));
      }
      {
        BarShape t = s;
        t.n_deg -= 1;
        if (const BarBlock* tb = bd.find(deg - 1, t)) {
          int lsize = sd.dm * sd.letter_prod;
          place_factor_op(bi, cn.diff(s.n_deg), lsize, 1, tb->offset, blk.offset,
                          sgn(f, s.m_deg + pre[wgt]));
        }
      }

      // simplicial differential: merge at each site
      if (wgt >= 1) {
        {  // site 0: right action on the m factor
          BarShape t;
          t.m_deg = s.m_deg + s.letters[0] - 1;
          t.letters.assign(s.letters.begin() + 1, s.letters.end());
          t.n_deg = s.n_deg;
          if (const BarBlock* tb = bd.find(deg - 1, t)) {
            SparseMatrix op =
                m.right_action_at(s.m_deg, s.letters[0] - 1) * kron(SparseMatrix::identity(f, sd.dm), ra.incl(s.letters[0] - 1));
            int rsize = (sd.dl.empty() ? 1 : sd.letter_prod / sd.dl[0]) * sd.dn;
            place_factor_op(be, op, 1, rsize, tb->offset, blk.offset, sgn(f, s.m_deg));
          }
        }
        for (int i = 1; i < wgt; ++i) {  // merge letters i, i+1 (1-based site i)
          BarShape t = s;
          t.letters.erase(t.letters.begin() + i);
          t.letters[i - 1] = s.letters[i - 1] + s.letters[i] - 1;
          if (const BarBlock* tb = bd.find(deg - 1, t)) {
            int lsize = sd.dm, rsize = sd.dn;
            for (int j2 = 0; j2 < i - 1; ++j2) lsize *= sd.dl[j2];
            for (int j2 = i + 1; j2 < wgt; ++j2) rsize *= sd.dl[j2];
            place_factor_op(be, mu(s.letters[i - 1], s.letters[i]), lsize, rsize, tb->offset,
                            blk.offset, sgn(f, s.m_deg + pre[i]));
          }
        }
        {  // site w: left action on the n factor
          BarShape t;
          t.m_deg = s.m_deg;
          t.letters.assign(s.letters.begin(), s.letters.end() - 1);
          t.n_deg = s.n_deg + s.letters[wgt - 1] - 1;
          if (const BarBlock* tb = bd.find(deg - 1, t)) {
            SparseMatrix op =
                n.left_action_at(s.letters[wgt - 1] - 1, s.n_deg) * kron(ra.incl(s.letters[wgt - 1] - 1), SparseMatrix::identity(f, sd.dn));
            int lsize = sd.dm * sd.letter_prod / sd.dl[wgt - 1];
            place_factor_op(be, op, lsize, 1, tb->offset, blk.offset,
                            sgn(f, s.m_deg + pre[wgt - 1]));
          }
        }
      }
    }
    SparseMatrix di = bi.build(), de = be.build();
    dint.emplace(deg, di);
    dext.emplace(deg, de);
    dsum.emplace(deg, di + de);
  }

  BarComplex out;
  out.realization = ChainComplex::build(
      f, w, bd.dims, dsum,
      bd.truncated || cm.truncated() || cn.truncated() || a.underlying.truncated());
  out.blocks = bd.blocks;
  out.d_internal = std::move(dint);
  out.d_simplicial = std::move(dext);

  // residual outer actions: the left algebra acts on the m factor, the right
  // algebra on the n factor; neither crosses any suspended letter, so no sign
  DgBimodule bm;
  bm.name = m.name + "(x)_" + a.name + " " + n.name;
  bm.left_algebra = m.left_algebra;
  bm.right_algebra = n.right_algebra;
  bm.underlying = out.realization;
  bm.sector = n.sector;
  const DgAlgebra& la = m.left_algebra;
  const DgAlgebra& rb = n.right_algebra;
  for (int t = la.underlying.window().lo; t <= la.underlying.window().hi; ++t) {
    if (la.underlying.dim(t) == 0) continue;
    for (int deg = w.lo; deg <= w.hi; ++deg) {
      if (bd.dims.at(deg) == 0 || !w.contains(t + deg)) continue;
      MatrixBuilder ab(f, bd.dims.at(t + deg), la.underlying.dim(t) * bd.dims.at(deg));
      bool any = false;
      for (const BarBlock& blk : bd.blocks.at(deg)) {
        const BarShape& s = blk.shape;
        ShapeDims sd = shape_dims(cm, ldim, cn, s);
        BarShape ts = s;
        ts.m_deg += t;
        const BarBlock* tb = bd.find(t + deg, ts);
        if (!tb) continue;
        SparseMatrix op = m.left_action_at(t, s.m_deg);
        if (op.is_zero()) continue;
        any = true;
        int rsize = sd.letter_prod * sd.dn;
        for (const auto& e : op.entries()) {
          int r = e.col / sd.dm, mi = e.col % sd.dm;
          for (int k = 0; k < rsize; ++k)
            ab.add(tb->offset + e.row * rsize + k,
                   r * bd.dims.at(deg) + blk.offset + mi * rsize + k, e.val);
        }
      }
      if (any) bm.left_action.emplace(std::pair{t, deg}, ab.build());
    }
  }
  for (int t = rb.underlying.window().lo; t <= rb.underlying.window().hi; ++t) {
    if (rb.underlying.dim(t) == 0) continue;
    for (int deg = w.lo; deg <= w.hi; ++deg) {
      if (bd.dims.at(deg) == 0 || !w.contains(deg + t)) continue;
      MatrixBuilder ab(f, bd.dims.at(deg + t), bd.dims.at(deg) * rb.underlying.dim(t));
      bool any = false;
      for (const BarBlock& blk : bd.blocks.at(deg)) {
        const BarShape& s = blk.shape;
        ShapeDims sd = shape_dims(cm, ldim, cn, s);
        BarShape ts = s;
        ts.n_deg += t;
        const BarBlock* tb = bd.find(deg + t, ts);
        if (!tb) continue;
        SparseMatrix op = n.right_action_at(s.n_deg, t);
        if (op.is_zero()) continue;
        any = true;
        int lsize = sd.dm * sd.letter_prod;
        int dt = rb.underlying.dim(t);
        for (const auto& e : op.entries()) {
          int ni = e.col / dt, si = e.col % dt;
          for (int l = 0; l < lsize; ++l)
            ab.add(tb->offset + l * cn.dim(ts.n_deg) + e.row,
                   (blk.offset + l * sd.dn + ni) * dt + si, e.val);
        }
      }
      if (any) bm.right_action.emplace(std::pair{deg, t}, ab.build());
    }
  }

  // word names m[l1|...|lw]n
  auto aname = [&](int d, int i) { return a.basis_name(d, i); };
  for (int deg = w.lo; deg <= w.hi; ++deg) {
    if (bd.dims.at(deg) == 0) continue;
    std::vector<std::string> names(bd.dims.at(deg));
    for (const BarBlock& blk : bd.blocks.at(deg)) {
      const BarShape& s = blk.shape;
      ShapeDims sd = shape_dims(cm, ldim, cn, s);
      for (int idx = 0; idx < blk.size; ++idx) {
        int rest = idx;
        int ni = rest % sd.dn;
        rest /= sd.dn;
        std::vector<int> li(s.weight());
        for (int j = s.weight() - 1; j >= 0; --j) {
          li[j] = rest % sd.dl[j];
          rest /= sd.dl[j];
        }
        std::ostringstream os;
        os << m.basis_name(s.m_deg, rest) << "[";
        for (int j = 0; j < s.weight(); ++j) {
          if (j) os << "|";
          os << reduced_name(ra, aname, s.letters[j] - 1, li[j]);
        }
        os << "]" << n.basis_name(s.n_deg, ni);
        names[blk.offset + idx] = os.str();
      }
    }
    bm.basis_names.emplace(deg, std::move(names));
  }
  require_valid(bm);
  out.bimodule = std::move(bm);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// BarShape / BarComplex members
// ---------------------------------------------------------------------------

int BarShape::degree() const {
  int d = m_deg + n_deg;
  for (int l : letters) d += l;
  return d;
}

bool BarShape::operator==(const BarShape& o) const {
  return m_deg == o.m_deg && n_deg == o.n_deg && letters == o.letters;
}

bool BarShape::operator<(const BarShape& o) const {
  if (weight() != o.weight()) return weight() < o.weight();
  if (m_deg != o.m_deg) return m_deg < o.m_deg;
  if (letters != o.letters) return letters < o.letters;
  return n_deg < o.n_deg;
}

const BarBlock* BarComplex::find_block(int degree, const BarShape& shape) const {
  auto it = blocks.find(degree);
  if (it == blocks.end()) return nullptr;
  for (const auto& b : it->second)
    if (b.shape == shape) return &b;
  return nullptr;
}

int BarComplex::weight_dim(int degree, int weight) const {
  auto it = blocks.find(degree);
  if (it == blocks.end()) return 0;
  int d = 0;
  for (const auto& b : it->second)
    if (b.shape.weight() == weight) d += b.size;
  return d;
}

// ---------------------------------------------------------------------------
// Coalgebras and comodules
// ---------------------------------------------------------------------------

SparseMatrix DgCoalgebra::coproduct_at(int p, int q) const {
  auto it = coproduct.find({p, q});
  if (it != coproduct.end()) return it->second;
  return SparseMatrix(underlying.field(), underlying.dim(p) * underlying.dim(q),
                      underlying.dim(p + q));
}

std::string DgCoalgebra::basis_name(int degree, int index) const {
  auto it = basis_names.find(degree);
  if (it != basis_names.end() && index < (int)it->second.size()) return it->second[index];
  return "deg" + std::to_string(degree) + "#" + std::to_string(index);
}

SparseMatrix DgComodule::coaction_at(int p, int q) const {
  auto it = coaction.find({p, q});
  if (it != coaction.end()) return it->second;
  return SparseMatrix(underlying.field(), coalgebra.underlying.dim(p) * underlying.dim(q),
                      underlying.dim(p + q));
}

std::string DgComodule::basis_name(int degree, int index) const {
  auto it = basis_names.find(degree);
  if (it != basis_names.end() && index < (int)it->second.size()) return it->second[index];
  return "deg" + std::to_string(degree) + "#" + std::to_string(index);
}

namespace {

int first_diff_col(const SparseMatrix& a, const SparseMatrix& b) {
  for (int c = 0; c < a.cols(); ++c)
    for (int r = 0; r < a.rows(); ++r)
      if (!(a.at(r, c) == b.at(r, c))) return c;
  return -1;
}

std::string at_degrees(int p, int q, int r = INT_MIN) {
  std::ostringstream os;
  os << "(" << p << "," << q;
  if (r != INT_MIN) os << "," << r;
  os << ")";
  return os.str();
}

}  // namespace

ValidationReport validate(const DgCoalgebra& c) {
  ValidationReport rep;
  auto check = [&](const std::string& ax, bool ok, const std::string& viol) {
    rep.checks.push_back({ax, ok, ok ? "" : viol});
  };
  const ChainComplex& u = c.underlying;
  const Field& f = u.field();
  Window w = u.window();

  bool shapes_ok = w.contains(0) && c.counit.rows() == 1 && c.counit.cols() == u.dim(0) &&
                   c.coaugmentation.rows() == u.dim(0) && c.coaugmentation.cols() == 1;
  std::string sviol = shapes_ok ? "" : "counit or coaugmentation shape";
  if (shapes_ok)
    for (const auto& [k, m] : c.coproduct) {
      auto [p, q] = k;
      if (!w.contains(p) || !w.contains(q) || !w.contains(p + q) ||
          m.rows() != u.dim(p) * u.dim(q) || m.cols() != u.dim(p + q)) {
        shapes_ok = false;
        sviol = "component " + at_degrees(p, q);
        break;
      }
    }
  check("shapes", shapes_ok, sviol);
  if (!shapes_ok) return rep;

  check("counit-coaugmentation", c.counit * c.coaugmentation == SparseMatrix::identity(f, 1), "");

  {
    bool ok = true;
    std::string viol;
    for (int p = w.lo; p <= w.hi && ok; ++p)
      for (int q = w.lo; q <= w.hi && ok; ++q)
        for (int r = w.lo; r <= w.hi && ok; ++r) {
          if (!w.contains(p + q) || !w.contains(q + r) || !w.contains(p + q + r)) continue;
          SparseMatrix lhs = kron(c.coproduct_at(p, q), SparseMatrix::identity(f, u.dim(r))) *
                             c.coproduct_at(p + q, r);
          SparseMatrix rhs = kron(SparseMatrix::identity(f, u.dim(p)), c.coproduct_at(q, r)) *
                             c.coproduct_at(p, q + r);
          if (!(lhs == rhs)) {
            ok = false;
            viol = at_degrees(p, q, r) + " on " + c.basis_name(p + q + r, first_diff_col(lhs, rhs));
          }
        }
    check("coassociativity", ok, viol);
  }

  {
    bool ok = true;
    std::string viol;
    for (int n = w.lo; n <= w.hi && ok; ++n) {
      SparseMatrix idn = SparseMatrix::identity(f, u.dim(n));
      if (!(kron(c.counit, idn) * c.coproduct_at(0, n) == idn)) {
        ok = false;
        viol = "left counit in degree " + std::to_string(n);
      } else if (!(kron(idn, c.counit) * c.coproduct_at(n, 0) == idn)) {
        ok = false;
        viol = "right counit in degree " + std::to_string(n);
      }
    }
    check("counitality", ok, viol);
  }

  {
    bool ok = true;
    std::string viol;
    for (int p = w.lo; p <= w.hi && ok; ++p)
      for (int q = w.lo; q <= w.hi && ok; ++q) {
        if (!w.contains(p + q) || !w.contains(p + q + 1)) continue;
        SparseMatrix lhs = c.coproduct_at(p, q) * u.diff(p + q + 1);
        SparseMatrix rhs =
            kron(u.diff(p + 1), SparseMatrix::identity(f, u.dim(q))) * c.coproduct_at(p + 1, q) +
            (kron(SparseMatrix::identity(f, u.dim(p)), u.diff(q + 1)) * c.coproduct_at(p, q + 1))
                .scaled(sgn(f, p));
        if (!(lhs == rhs)) {
          ok = false;
          viol = at_degrees(p, q) + " on " + c.basis_name(p + q + 1, first_diff_col(lhs, rhs));
        }
      }
    check("co-Leibniz", ok, viol);
  }

  check("counit-dg", (c.counit * u.diff(1)).is_zero(), "");
  check("coaugmentation-dg", (u.diff(0) * c.coaugmentation).is_zero(), "");
  return rep;
}

ValidationReport validate(const DgComodule& y) {
  ValidationReport rep;
  auto check = [&](const std::string& ax, bool ok, const std::string& viol) {
    rep.checks.push_back({ax, ok, ok ? "" : viol});
  };
  const ChainComplex& u = y.underlying;
  const ChainComplex& cu = y.coalgebra.underlying;
  const Field& f = u.field();
  Window w = u.window();

  bool shapes_ok = u.field() == cu.field();
  std::string sviol = shapes_ok ? "" : "field mismatch";
  if (shapes_ok)
    for (const auto& [k, m] : y.coaction) {
      auto [p, q] = k;
      if (!w.contains(q) || !w.contains(p + q) || m.rows() != cu.dim(p) * u.dim(q) ||
          m.cols() != u.dim(p + q)) {
        shapes_ok = false;
        sviol = "component " + at_degrees(p, q);
        break;
      }
    }
  check("shapes", shapes_ok, sviol);
  if (!shapes_ok) return rep;

  {
    bool ok = true;
    std::string viol;
    for (int p = w.lo; p <= w.hi && ok; ++p)
      for (int q = w.lo; q <= w.hi && ok; ++q)
        for (int r = w.lo; r <= w.hi && ok; ++r) {
          if (!w.contains(p + q) || !w.contains(q + r) || !w.contains(p + q + r)) continue;
          SparseMatrix lhs =
              kron(y.coalgebra.coproduct_at(p, q), SparseMatrix::identity(f, u.dim(r))) *
              y.coaction_at(p + q, r);
          SparseMatrix rhs = kron(SparseMatrix::identity(f, cu.dim(p)), y.coaction_at(q, r)) *
                             y.coaction_at(p, q + r);
          if (!(lhs == rhs)) {
            ok = false;
            viol = at_degrees(p, q, r) + " on " + y.basis_name(p + q + r, first_diff_col(lhs, rhs));
          }
        }
    check("coaction-coassociativity", ok, viol);
  }

  {
    bool ok = true;
    std::string viol;
    for (int n = w.lo; n <= w.hi && ok; ++n) {
      SparseMatrix idn = SparseMatrix::identity(f, u.dim(n));
      if (!(kron(y.coalgebra.counit, idn) * y.coaction_at(0, n) == idn)) {
        ok = false;
        viol = "degree " + std::to_string(n);
      }
    }
    check("coaction-counit", ok, viol);
  }

  {
    bool ok = true;
    std::string viol;
    for (int p = w.lo; p <= w.hi && ok; ++p)
      for (int q = w.lo; q <= w.hi && ok; ++q) {
        if (!w.contains(p + q) || !w.contains(p + q + 1)) continue;
        SparseMatrix lhs = y.coaction_at(p, q) * u.diff(p + q + 1);
        SparseMatrix rhs =
            kron(cu.diff(p + 1), SparseMatrix::identity(f, u.dim(q))) * y.coaction_at(p + 1, q) +
            (kron(SparseMatrix::identity(f, cu.dim(p)), u.diff(q + 1)) * y.coaction_at(p, q + 1))
                .scaled(sgn(f, p));
        if (!(lhs == rhs)) {
          ok = false;
          viol = at_degrees(p, q) + " on " + y.basis_name(p + q + 1, first_diff_col(lhs, rhs));
        }
      }
    check("coaction-co-Leibniz", ok, viol);
  }
  return rep;
}

void require_valid(const DgCoalgebra& c) {
  ValidationReport r = validate(c);
  if (!r.ok()) fail("invalid coalgebra " + c.name + ":\n" + r.str());
}

void require_valid(const DgComodule& y) {
  ValidationReport r = validate(y);
  if (!r.ok()) fail("invalid comodule " + y.name + ":\n" + r.str());
}

// ---------------------------------------------------------------------------
// Relative tensor products
// ---------------------------------------------------------------------------

BarComplex relative_tensor(const DgBimodule& m, const DgAlgebra& a, const DgBimodule& n,
                           Window w) {
  if (m.sector != a.sector || n.sector != a.sector)
    fail("sector mismatch: relative_tensor requires all inputs in one sector");
  return build_bar_core(m, a, n, w);
}

DgLeftModule external_relative_tensor(const DgBimodule& n, const DgLeftModule& m, Window w) {
  if (!same_algebra(n.left_algebra, n.right_algebra))
    fail("side mismatch: the external relative tensor needs an (A,A)-bimodule");
  if (!same_algebra(n.left_algebra, m.algebra))
    fail("side mismatch: the module is not over the bimodule's algebra");
  if (n.sector != n.left_algebra.sector)
    fail("sector mismatch: the bimodule must live in the algebra sector");
  BarComplex b = build_bar_core(n, n.left_algebra, as_bimodule(m), w);
  DgLeftModule out;
  out.name = n.name + "(x)_" + m.algebra.name + " " + m.name;
  out.algebra = n.left_algebra;
  out.underlying = b.realization;
  out.action = b.bimodule.left_action;
  out.basis_names = b.bimodule.basis_names;
  out.sector = m.sector;
  require_valid(out);
  return out;
}

DgBimodule complex_tensor_bimodule(const ChainComplex& x, const DgBimodule& m) {
  const Field& f = x.field();
  DgBimodule out;
  out.name = "X(x)" + m.name;
  out.left_algebra = m.left_algebra;
  out.right_algebra = m.right_algebra;
  out.underlying = tensor(x, m.underlying);
  out.sector = m.sector;
  const ChainComplex& cm = m.underlying;
  Window w = out.underlying.window();
  const DgAlgebra& la = m.left_algebra;
  const DgAlgebra& rb = m.right_algebra;
  for (int p = la.underlying.window().lo; p <= la.underlying.window().hi; ++p) {
    if (la.underlying.dim(p) == 0) continue;
    for (int q = w.lo; q <= w.hi; ++q) {
      if (out.underlying.dim(q) == 0 || !w.contains(p + q)) continue;
      MatrixBuilder b(f, out.underlying.dim(p + q), la.underlying.dim(p) * out.underlying.dim(q));
      for (const TensorBlock& blk : tensor_blocks(x, cm, q)) {
        int t = blk.p, u = q - t;
        SparseMatrix op = m.left_action_at(p, u);
        if (op.is_zero()) continue;
        int toff = -1;
        for (const TensorBlock& tb : tensor_blocks(x, cm, p + q))
          if (tb.p == t) toff = tb.offset;
        if (toff < 0) continue;
        Scalar cs = sgn(f, p * t);
        for (const auto& e : op.entries()) {
          int r = e.col / cm.dim(u), mi = e.col % cm.dim(u);
          for (int xi = 0; xi < x.dim(t); ++xi)
            b.add(toff + xi * cm.dim(p + u) + e.row,
                  r * out.underlying.dim(q) + blk.offset + xi * cm.dim(u) + mi, e.val * cs);
        }
      }
      SparseMatrix act = b.build();
      if (!act.is_zero()) out.left_action.emplace(std::pair{p, q}, act);
    }
  }
  for (int p = rb.underlying.window().lo; p <= rb.underlying.window().hi; ++p) {
    if (rb.underlying.dim(p) == 0) continue;
    for (int q = w.lo; q <= w.hi; ++q) {
      if (out.underlying.dim(q) == 0 || !w.contains(q + p)) continue;
      MatrixBuilder b(f, out.underlying.dim(q + p), out.underlying.dim(q) * rb.underlying.dim(p));
      int dp = rb.underlying.dim(p);
      for (const TensorBlock& blk : tensor_blocks(x, cm, q)) {
        int t = blk.p, u = q - t;
        SparseMatrix op = m.right_action_at(u, p);
        if (op.is_zero()) continue;
        int toff = -1;
        for (const TensorBlock& tb : tensor_blocks(x, cm, q + p))
          if (tb.p == t) toff = tb.offset;
        if (toff < 0) continue;
        for (const auto& e : op.entries()) {
          int mi = e.col / dp, bi = e.col % dp;
          for (int xi = 0; xi < x.dim(t); ++xi)
            b.add(toff + xi * cm.dim(u + p) + e.row,
                  (blk.offset + xi * cm.dim(u) + mi) * dp + bi, e.val);
        }
      }
      SparseMatrix act = b.build();
      if (!act.is_zero()) out.right_action.emplace(std::pair{q, p}, act);
    }
  }
  require_valid(out);
  return out;
}

DgBimodule bimodule_tensor_complex(const DgBimodule& n, const ChainComplex& y) {
  const Field& f = y.field();
  DgBimodule out;
  out.name = n.name + "(x)Y";
  out.left_algebra = n.left_algebra;
  out.right_algebra = n.right_algebra;
  out.underlying = tensor(n.underlying, y);
  out.sector = n.sector;
  const ChainComplex& cn = n.underlying;
  Window w = out.underlying.window();
  const DgAlgebra& la = n.left_algebra;
  const DgAlgebra& rb = n.right_algebra;
  for (int p = la.underlying.window().lo; p <= la.underlying.window().hi; ++p) {
    if (la.underlying.dim(p) == 0) continue;
    for (int q = w.lo; q <= w.hi; ++q) {
      if (out.underlying.dim(q) == 0 || !w.contains(p + q)) continue;
      MatrixBuilder b(f, out.underlying.dim(p + q), la.underlying.dim(p) * out.underlying.dim(q));
      for (const TensorBlock& blk : tensor_blocks(cn, y, q)) {
        int u = blk.p, t = q - u;
        SparseMatrix op = n.left_action_at(p, u);
        if (op.is_zero()) continue;
        int toff = -1;
        for (const TensorBlock& tb : tensor_blocks(cn, y, p + q))
          if (tb.p == p + u) toff = tb.offset;
        if (toff < 0) continue;
        for (const auto& e : op.entries()) {
          int r = e.col / cn.dim(u), ni = e.col % cn.dim(u);
          for (int yi = 0; yi < y.dim(t); ++yi)
            b.add(toff + e.row * y.dim(t) + yi,
                  r * out.underlying.dim(q) + blk.offset + ni * y.dim(t) + yi, e.val);
        }
      }
      SparseMatrix act = b.build();
      if (!act.is_zero()) out.left_action.emplace(std::pair{p, q}, act);
    }
  }
  for (int p = rb.underlying.window().lo; p <= rb.underlying.window().hi; ++p) {
    if (rb.underlying.dim(p) == 0) continue;
    for (int q = w.lo; q <= w.hi; ++q) {
      if (out.underlying.dim(q) == 0 || !w.contains(q + p)) continue;
      MatrixBuilder b(f, out.underlying.dim(q + p), out.underlying.dim(q) * rb.underlying.dim(p));
      int dp = rb.underlying.dim(p);
      for (const TensorBlock& blk : tensor_blocks(cn, y, q)) {
        int u = blk.p, t = q - u;
        SparseMatrix op = n.right_action_at(u, p);
        if (op.is_zero()) continue;
        int toff = -1;
        for (const TensorBlock& tb : tensor_blocks(cn, y, q + p))
          if (tb.p == u + p) toff = tb.offset;
        if (toff < 0) continue;
        Scalar cs = sgn(f, p * t);
        for (const auto& e : op.entries()) {
          int ni = e.col / dp, bi = e.col % dp;
          for (int yi = 0; yi < y.dim(t); ++yi)
            b.add(toff + e.row * y.dim(t) + yi,
                  (blk.offset + ni * y.dim(t) + yi) * dp + bi, e.val * cs);
        }
      }
      SparseMatrix act = b.build();
      if (!act.is_zero()) out.right_action.emplace(std::pair{q, p}, act);
    }
  }
  require_valid(out);
  return out;
}

CompatWitness compat_witness(const ChainComplex& x, const DgBimodule& m, const DgAlgebra& a,
                             const DgBimodule& n, const ChainComplex& y, Window w) {
  const Field& f = a.underlying.field();
  DgBimodule xm = complex_tensor_bimodule(x, m);
  DgBimodule ny = bimodule_tensor_complex(n, y);
  BarComplex src = build_bar_core(xm, a, ny, w);
  BarComplex mid = build_bar_core(m, a, n, w);
  ChainComplex xb = tensor(x, mid.realization);
  ChainComplex xby = tensor(xb, y);

  Reduced ra = reduced_complement(a.underlying, a.augmentation, a.unit);
  LetterDim ldim = [&](int l) { return l >= 1 ? ra.dim(l - 1) : 0; };

  auto pair_off = [](const ChainComplex& l, const ChainComplex& r, int n_, int p_) {
    for (const TensorBlock& b : tensor_blocks(l, r, n_))
      if (b.p == p_) return b.offset;
    return -1;
  };

  std::map<int, SparseMatrix> comps;
  for (int deg = w.lo; deg <= w.hi; ++deg) {
    std::vector<SparseMatrix::Entry> ents;
    auto bit = src.blocks.find(deg);
    if (bit != src.blocks.end())
      for (const BarBlock& blk : bit->second) {
        const BarShape& s = blk.shape;
        ShapeDims sd = shape_dims(xm.underlying, ldim, ny.underlying, s);
        for (const TensorBlock& mb : tensor_blocks(x, m.underlying, s.m_deg)) {
          int t = mb.p, u = s.m_deg - t;
          for (const TensorBlock& nb : tensor_blocks(n.underlying, y, s.n_deg)) {
            int v = nb.p, z = s.n_deg - v;
            BarShape bs{u, s.letters, v};
            int bd = bs.degree();
            const BarBlock* bb = mid.find_block(bd, bs);
            if (!bb) continue;
            int o3 = pair_off(x, mid.realization, t + bd, t);
            int o4 = pair_off(xb, y, deg, t + bd);
            if (o3 < 0 || o4 < 0) continue;
            int dmu = m.underlying.dim(u), dnv = n.underlying.dim(v);
            int dyz = y.dim(z), dbd = mid.realization.dim(bd);
            for (int xi = 0; xi < x.dim(t); ++xi)
              for (int mi = 0; mi < dmu; ++mi)
                for (int li = 0; li < sd.letter_prod; ++li)
                  for (int ni = 0; ni < dnv; ++ni)
                    for (int yi = 0; yi < dyz; ++yi) {
                      int col = blk.offset +
                                ((mb.offset + xi * dmu + mi) * sd.letter_prod + li) * sd.dn +
                                (nb.offset + ni * dyz + yi);
                      int bidx = bb->offset + (mi * sd.letter_prod + li) * dnv + ni;
                      int row = o4 + (o3 + xi * dbd + bidx) * dyz + yi;
                      ents.push_back({row, col, Scalar::one(f)});
                    }
          }
        }
      }
    comps.emplace(deg, SparseMatrix::from_entries(f, xby.dim(deg), src.realization.dim(deg),
                                                  std::move(ents)));
  }
  CompatWitness cw{ChainMap::build(src.realization, xby, comps), true};
  for (int deg = w.lo; deg <= w.hi; ++deg) {
    const SparseMatrix& c = cw.map.component(deg);
    if (c.rows() != c.cols() || c.rank() != c.rows()) cw.degreewise_iso = false;
  }
  return cw;
}

// ---------------------------------------------------------------------------
// Koszul duals
// ---------------------------------------------------------------------------

namespace {

struct DualPair {
  BarComplex bar;
  DgCoalgebra coalg;
};

DualPair dual_core(const DgAlgebra& a, Window w) {
  const Field& f = a.underlying.field();
  DgAlgebra ua = unit_algebra(f, a.underlying.window());
  BarComplex b = build_bar_core(trivial_bimodule(ua, a), a, trivial_bimodule(a, ua), w);
  Reduced ra = reduced_complement(a.underlying, a.augmentation, a.unit);

  DgCoalgebra c;
  c.name = "B(" + a.name + ")";
  c.underlying = b.realization;
  const Field& ff = f;
  for (int deg = w.lo; deg <= w.hi; ++deg) {
    std::map<std::pair<int, int>, std::vector<SparseMatrix::Entry>> ents;
    auto bit = b.blocks.find(deg);
    if (bit == b.blocks.end()) continue;
    for (const BarBlock& blk : bit->second) {
      const BarShape& s = blk.shape;
      int wgt = s.weight();
      std::vector<int> dl(wgt), pre(wgt + 1, 0);
      for (int i = 0; i < wgt; ++i) {
        dl[i] = ra.dim(s.letters[i] - 1);
        pre[i + 1] = pre[i] + s.letters[i];
      }
      for (int i = 0; i <= wgt; ++i) {
        int p = pre[i], q = deg - p;
        if (!w.contains(p) || !w.contains(q)) continue;
        BarShape ps{0, std::vector<int>(s.letters.begin(), s.letters.begin() + i), 0};
        BarShape ss{0, std::vector<int>(s.letters.begin() + i, s.letters.end()), 0};
        const BarBlock* pb = b.find_block(p, ps);
        const BarBlock* sb = b.find_block(q, ss);
        if (!pb || !sb) continue;
        int suf_sz = 1;
        for (int j = i; j < wgt; ++j) suf_sz *= dl[j];
        for (int t = 0; t < blk.size; ++t) {
          int pr = t / suf_sz, su = t % suf_sz;
          ents[{p, q}].push_back({(pb->offset + pr) * b.realization.dim(q) + sb->offset + su,
                                  blk.offset + t, Scalar::one(ff)});
        }
      }
    }
    for (auto& [k, v] : ents)
      c.coproduct.emplace(
          k, SparseMatrix::from_entries(ff, b.realization.dim(k.first) * b.realization.dim(k.second),
                                        b.realization.dim(deg), std::move(v)));
  }
  const BarBlock* empty = b.find_block(0, BarShape{0, {}, 0});
  if (!empty) fail("koszul dual: missing weight-0 block in degree 0");
  {
    MatrixBuilder cb(f, 1, b.realization.dim(0));
    cb.add(0, empty->offset, Scalar::one(f));
    c.counit = cb.build();
    MatrixBuilder ab(f, b.realization.dim(0), 1);
    ab.add(empty->offset, 0, Scalar::one(f));
    c.coaugmentation = ab.build();
  }
  auto aname = [&](int d, int i) { return a.basis_name(d, i); };
  for (int deg = w.lo; deg <= w.hi; ++deg) {
    if (b.realization.dim(deg) == 0) continue;
    std::vector<std::string> names(b.realization.dim(deg));
    for (const BarBlock& blk : b.blocks.at(deg)) {
      const BarShape& s = blk.shape;
      int wgt = s.weight();
      std::vector<int> dl(wgt);
      for (int i = 0; i < wgt; ++i) dl[i] = ra.dim(s.letters[i] - 1);
      for (int idx = 0; idx < blk.size; ++idx) {
        int rest = idx;
        std::vector<int> li(wgt);
        for (int j = wgt - 1; j >= 0; --j) {
          li[j] = rest % dl[j];
          rest /= dl[j];
        }
        std::ostringstream os;
        os << "[";
        for (int j = 0; j < wgt; ++j) {
          if (j) os << "|";
          os << reduced_name(ra, aname, s.letters[j] - 1, li[j]);
        }
        os << "]";
        names[blk.offset + idx] = os.str();
      }
    }
    c.basis_names.emplace(deg, std::move(names));
  }
  require_valid(c);
  return {std::move(b), std::move(c)};
}

}  // namespace

DgCoalgebra koszul_dual_algebra(const DgAlgebra& a, Window w) { return dual_core(a, w).coalg; }

DgComodule koszul_dual_module(const DgAlgebra& a, const DgLeftModule& x, Window w) {
  const Field& f = a.underlying.field();
  DualPair dp = dual_core(a, w);
  DgAlgebra ua = unit_algebra(f, a.underlying.window());
  BarComplex b = build_bar_core(trivial_bimodule(ua, a), a, as_bimodule(x), w);
  Reduced ra = reduced_complement(a.underlying, a.augmentation, a.unit);

  DgComodule y;
  y.name = "B(" + a.name + ";" + x.name + ")";
  y.coalgebra = dp.coalg;
  y.underlying = b.realization;
  y.basis_names = b.bimodule.basis_names;
  for (int deg = w.lo; deg <= w.hi; ++deg) {
    std::map<std::pair<int, int>, std::vector<SparseMatrix::Entry>> ents;
    auto bit = b.blocks.find(deg);
    if (bit == b.blocks.end()) continue;
    for (const BarBlock& blk : bit->second) {
      const BarShape& s = blk.shape;
      int wgt = s.weight();
      std::vector<int> dl(wgt), pre(wgt + 1, 0);
      for (int i = 0; i < wgt; ++i) {
        dl[i] = ra.dim(s.letters[i] - 1);
        pre[i + 1] = pre[i] + s.letters[i];
      }
      int dx = x.underlying.dim(s.n_deg);
      for (int i = 0; i <= wgt; ++i) {
        int p = pre[i], q = deg - p;
        if (!w.contains(p) || !w.contains(q)) continue;
        BarShape ps{0, std::vector<int>(s.letters.begin(), s.letters.begin() + i), 0};
        BarShape ss{0, std::vector<int>(s.letters.begin() + i, s.letters.end()), s.n_deg};
        const BarBlock* pb = dp.bar.find_block(p, ps);
        const BarBlock* sb = b.find_block(q, ss);
        if (!pb || !sb) continue;
        int suf_sz = dx;
        for (int j = i; j < wgt; ++j) suf_sz *= dl[j];
        for (int t = 0; t < blk.size; ++t) {
          int pr = t / suf_sz, su = t % suf_sz;
          ents[{p, q}].push_back({(pb->offset + pr) * b.realization.dim(q) + sb->offset + su,
                                  blk.offset + t, Scalar::one(f)});
        }
      }
    }
    for (auto& [k, v] : ents)
      y.coaction.emplace(k, SparseMatrix::from_entries(
                                f, dp.coalg.underlying.dim(k.first) * b.realization.dim(k.second),
                                b.realization.dim(deg), std::move(v)));
  }
  require_valid(y);
  return y;
}

// ---------------------------------------------------------------------------
// Cobar
// ---------------------------------------------------------------------------

namespace {

void require_dual_regime(const DgCoalgebra& c) {
  const ChainComplex& u = c.underlying;
  bool ok = u.window().contains(0) && u.dim(0) == 1 && u.dim(1) == 0;
  for (int d = u.window().lo; d < 0 && ok; ++d)
    if (u.dim(d) > 0) ok = false;
  if (!ok) fail("dual regime requires the coaugmentation coideal in degrees >= 2");
}

struct CobarCore {
  DgAlgebra alg;
  BarData words;
};

// Letters are the desuspended coideal Cbar[-1]: desuspended degree l >= 1
// corresponds to coalgebra degree l + 1 >= 2.
CobarCore cobar_core(const DgCoalgebra& c, Window w) {
  if (!w.contains(0)) fail("window must contain degree 0");
  require_dual_regime(c);
  const Field& f = c.underlying.field();
  Reduced rc = reduced_complement(c.underlying, c.counit, c.coaugmentation);
  LetterDim ldim = [&](int l) { return l >= 1 ? rc.dim(l + 1) : 0; };
  ChainComplex pt = unit_complex(f, w);
  BarData bd = enumerate_words(pt, ldim, pt, w);

  auto dl_op = [&](int l) {  // d on Cbar[-1]: the desuspension flips the sign
    return (rc.proj(l) * c.underlying.diff(l + 1) * rc.incl(l + 1)).scaled(sgn(f, 1));
  };

  std::map<int, SparseMatrix> diffs;
  for (int deg = w.lo + 1; deg <= w.hi; ++deg) {
    MatrixBuilder b(f, bd.dims.at(deg - 1), bd.dims.at(deg));
    for (const BarBlock& blk : bd.blocks.at(deg)) {
      const BarShape& s = blk.shape;
      ShapeDims sd = shape_dims(pt, ldim, pt, s);
      int wgt = s.weight();
      std::vector<int> pre(wgt + 1, 0);
      for (int i = 0; i < wgt; ++i) pre[i + 1] = pre[i] + s.letters[i];
      for (int j = 0; j < wgt; ++j) {
        int lsize = 1, rsize = 1;
        for (int j2 = 0; j2 < j; ++j2) lsize *= sd.dl[j2];
        for (int j2 = j + 1; j2 < wgt; ++j2) rsize *= sd.dl[j2];
        {  // internal differential of the letter
          BarShape t = s;
          t.letters[j] -= 1;
          const BarBlock* tb = t.letters[j] >= 1 ? bd.find(deg - 1, t) : nullptr;
          if (tb)
            place_factor_op(b, dl_op(s.letters[j]), lsize, rsize, tb->offset, blk.offset,
                            sgn(f, pre[j]));
        }
        // reduced-coproduct splitting of the letter
        for (int l1 = 1; l1 + 1 < s.letters[j]; ++l1) {
          int l2 = s.letters[j] - 1 - l1;
          if (ldim(l1) == 0 || ldim(l2) == 0) continue;
          BarShape t = s;
          t.letters[j] = l1;
          t.letters.insert(t.letters.begin() + j + 1, l2);
          const BarBlock* tb = bd.find(deg - 1, t);
          if (!tb) continue;
          SparseMatrix op = kron(rc.proj(l1 + 1), rc.proj(l2 + 1)) *
                            c.coproduct_at(l1 + 1, l2 + 1) * rc.incl(s.letters[j] + 1);
          place_factor_op(b, op, lsize, rsize, tb->offset, blk.offset, sgn(f, pre[j] + l1 + 1));
        }
      }
    }
    diffs.emplace(deg, b.build());
  }

  DgAlgebra out;
  out.name = "Omega(" + c.name + ")";
  out.underlying = ChainComplex::build(f, w, bd.dims, diffs, bd.truncated || c.underlying.truncated());

  for (int p = w.lo; p <= w.hi; ++p) {
    if (bd.dims.at(p) == 0) continue;
    for (int q = w.lo; q <= w.hi; ++q) {
      if (bd.dims.at(q) == 0 || !w.contains(p + q)) continue;
      std::vector<SparseMatrix::Entry> ents;
      for (const BarBlock& b1 : bd.blocks.at(p))
        for (const BarBlock& b2 : bd.blocks.at(q)) {
          BarShape t{0, b1.shape.letters, 0};
          t.letters.insert(t.letters.end(), b2.shape.letters.begin(), b2.shape.letters.end());
          const BarBlock* tb = bd.find(p + q, t);
          if (!tb) fail("cobar: concatenation target missing");
          for (int i1 = 0; i1 < b1.size; ++i1)
            for (int i2 = 0; i2 < b2.size; ++i2)
              ents.push_back({tb->offset + i1 * b2.size + i2,
                              (b1.offset + i1) * bd.dims.at(q) + b2.offset + i2, Scalar::one(f)});
        }
      out.product.emplace(std::pair{p, q}, SparseMatrix::from_entries(
                                               f, bd.dims.at(p + q),
                                               bd.dims.at(p) * bd.dims.at(q), std::move(ents)));
    }
  }

  const BarBlock* empty = bd.find(0, BarShape{0, {}, 0});
  if (!empty) fail("cobar: missing empty word");
  {
    MatrixBuilder ub(f, bd.dims.at(0), 1);
    ub.add(empty->offset, 0, Scalar::one(f));
    out.unit = ub.build();
    MatrixBuilder eb(f, 1, bd.dims.at(0));
    eb.add(0, empty->offset, Scalar::one(f));
    out.augmentation = eb.build();
  }

  auto cname = [&](int d, int i) { return c.basis_name(d, i); };
  for (int deg = w.lo; deg <= w.hi; ++deg) {
    if (bd.dims.at(deg) == 0) continue;
    std::vector<std::string> names(bd.dims.at(deg));
    for (const BarBlock& blk : bd.blocks.at(deg)) {
      const BarShape& s = blk.shape;
      ShapeDims sd = shape_dims(pt, ldim, pt, s);
      for (int idx = 0; idx < blk.size; ++idx) {
        int rest = idx;
        std::vector<int> li(s.weight());
        for (int j = s.weight() - 1; j >= 0; --j) {
          li[j] = rest % sd.dl[j];
          rest /= sd.dl[j];
        }
        std::ostringstream os;
        os << "<";
        for (int j = 0; j < s.weight(); ++j) {
          if (j) os << "|";
          os << reduced_name(rc, cname, s.letters[j] + 1, li[j]);
        }
        os << ">";
        names[blk.offset + idx] = os.str();
      }
    }
    out.basis_names.emplace(deg, std::move(names));
  }
  require_valid(out);
  return {std::move(out), std::move(bd)};
}

}  // namespace

DgAlgebra cobar(const DgCoalgebra& c, Window w) { return cobar_core(c, w).alg; }

DgLeftModule cobar_module(const DgCoalgebra& c, const DgComodule& y, Window w) {
  if (!(y.coalgebra.name == c.name && y.coalgebra.underlying == c.underlying))
    fail("the comodule is not over the given coalgebra");
  CobarCore cc = cobar_core(c, w);
  const Field& f = c.underlying.field();
  Reduced rc = reduced_complement(c.underlying, c.counit, c.coaugmentation);
  LetterDim ldim = [&](int l) { return l >= 1 ? rc.dim(l + 1) : 0; };
  ChainComplex pt = unit_complex(f, w);
  const ChainComplex& cy = y.underlying;
  BarData bd = enumerate_words(pt, ldim, cy, w);

  auto dl_op = [&](int l) {
    return (rc.proj(l) * c.underlying.diff(l + 1) * rc.incl(l + 1)).scaled(sgn(f, 1));
  };

  std::map<int, SparseMatrix> diffs;
  for (int deg = w.lo + 1; deg <= w.hi; ++deg) {
    MatrixBuilder b(f, bd.dims.at(deg - 1), bd.dims.at(deg));
    for (const BarBlock& blk : bd.blocks.at(deg)) {
      const BarShape& s = blk.shape;
      ShapeDims sd = shape_dims(pt, ldim, cy, s);
      int wgt = s.weight();
      std::vector<int> pre(wgt + 1, 0);
      for (int i = 0; i < wgt; ++i) pre[i + 1] = pre[i] + s.letters[i];
      for (int j = 0; j < wgt; ++j) {
        int lsize = 1, rsize = sd.dn;
        for (int j2 = 0; j2 < j; ++j2) lsize *= sd.dl[j2];
        for (int j2 = j + 1; j2 < wgt; ++j2) rsize *= sd.dl[j2];
        {
          BarShape t = s;
          t.letters[j] -= 1;
          const BarBlock* tb = t.letters[j] >= 1 ? bd.find(deg - 1, t) : nullptr;
          if (tb)
            place_factor_op(b, dl_op(s.letters[j]), lsize, rsize, tb->offset, blk.offset,
                            sgn(f, pre[j]));
        }
        for (int l1 = 1; l1 + 1 < s.letters[j]; ++l1) {
          int l2 = s.letters[j] - 1 - l1;
          if (ldim(l1) == 0 || ldim(l2) == 0) continue;
          BarShape t = s;
          t.letters[j] = l1;
          t.letters.insert(t.letters.begin() + j + 1, l2);
          const BarBlock* tb = bd.find(deg - 1, t);
          if (!tb) continue;
          SparseMatrix op = kron(rc.proj(l1 + 1), rc.proj(l2 + 1)) *
                            c.coproduct_at(l1 + 1, l2 + 1) * rc.incl(s.letters[j] + 1);
          place_factor_op(b, op, lsize, rsize, tb->offset, blk.offset, sgn(f, pre[j] + l1 + 1));
        }
      }
      {  // internal differential of the module factor
        BarShape t = s;
        t.n_deg -= 1;
        if (const BarBlock* tb = bd.find(deg - 1, t))
          place_factor_op(b, cy.diff(s.n_deg), sd.letter_prod, 1, tb->offset, blk.offset,
                          sgn(f, pre[wgt]));
      }
      // coaction: split a new letter off the module factor
      for (int lnew = 1; s.n_deg - lnew - 1 >= cy.window().lo; ++lnew) {
        if (ldim(lnew) == 0) continue;
        int q2 = s.n_deg - lnew - 1;
        if (cy.dim(q2) == 0) continue;
        BarShape t = s;
        t.letters.push_back(lnew);
        t.n_deg = q2;
        const BarBlock* tb = bd.find(deg - 1, t);
        if (!tb) continue;
        SparseMatrix op = kron(rc.proj(lnew + 1), SparseMatrix::identity(f, cy.dim(q2))) *
                          y.coaction_at(lnew + 1, q2);
        place_factor_op(b, op, sd.letter_prod, 1, tb->offset, blk.offset, sgn(f, pre[wgt]));
      }
    }
    diffs.emplace(deg, b.build());
  }

  DgLeftModule out;
  out.name = "Omega(" + c.name + ";" + y.name + ")";
  out.algebra = cc.alg;
  out.underlying = ChainComplex::build(
      f, w, bd.dims, diffs, bd.truncated || c.underlying.truncated() || cy.truncated());

  for (int p = w.lo; p <= w.hi; ++p) {
    if (cc.words.dims.at(p) == 0) continue;
    for (int q = w.lo; q <= w.hi; ++q) {
      if (bd.dims.at(q) == 0 || !w.contains(p + q)) continue;
      std::vector<SparseMatrix::Entry> ents;
      for (const BarBlock& b1 : cc.words.blocks.at(p))
        for (const BarBlock& b2 : bd.blocks.at(q)) {
          BarShape t{0, b1.shape.letters, b2.shape.n_deg};
          t.letters.insert(t.letters.end(), b2.shape.letters.begin(), b2.shape.letters.end());
          const BarBlock* tb = bd.find(p + q, t);
          if (!tb) fail("cobar module: concatenation target missing");
          for (int i1 = 0; i1 < b1.size; ++i1)
            for (int i2 = 0; i2 < b2.size; ++i2)
              ents.push_back({tb->offset + i1 * b2.size + i2,
                              (b1.offset + i1) * bd.dims.at(q) + b2.offset + i2, Scalar::one(f)});
        }
      out.action.emplace(std::pair{p, q},
                         SparseMatrix::from_entries(f, bd.dims.at(p + q),
                                                    cc.words.dims.at(p) * bd.dims.at(q),
                                                    std::move(ents)));
    }
  }
  require_valid(out);
  return out;
}

DgAlgebraMap bar_cobar_counit(const DgAlgebra& a, Window w) {
  const Field& f = a.underlying.field();
  DualPair dp = dual_core(a, w);
  CobarCore cc = cobar_core(dp.coalg, w);
  Reduced ra = reduced_complement(a.underlying, a.augmentation, a.unit);
  Reduced rc = reduced_complement(dp.coalg.underlying, dp.coalg.counit, dp.coalg.coaugmentation);

  // A letter of Omega(B(A)) in desuspended degree l is B(A)_{l+1}; project it
  // to its weight-one block Abar_l and include into A_l.
  auto phi1 = [&](int l) {
    int cols = rc.dim(l + 1);
    const BarBlock* wb = dp.bar.find_block(l + 1, BarShape{0, {l + 1}, 0});
    if (!wb) return SparseMatrix(f, a.underlying.dim(l), cols);
    MatrixBuilder sb(f, wb->size, dp.bar.realization.dim(l + 1));
    for (int i = 0; i < wb->size; ++i) sb.add(i, wb->offset + i, Scalar::one(f));
    return ra.incl(l) * sb.build() * rc.incl(l + 1);
  };

  std::map<BarShape, SparseMatrix> memo;
  std::function<const SparseMatrix&(const BarShape&)> phi = [&](const BarShape& s) -> const SparseMatrix& {
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    SparseMatrix m = a.unit;
    if (s.weight() > 0) {
      int l1 = s.letters[0];
      BarShape rest{0, std::vector<int>(s.letters.begin() + 1, s.letters.end()), 0};
      m = a.product_at(l1, rest.degree()) * kron(phi1(l1), phi(rest));
    }
    return memo.emplace(s, std::move(m)).first->second;
  };

  std::map<int, SparseMatrix> comps;
  for (int deg = w.lo; deg <= w.hi; ++deg) {
    MatrixBuilder b(f, a.underlying.dim(deg), cc.words.dims.at(deg));
    for (const BarBlock& blk : cc.words.blocks.at(deg)) place(b, phi(blk.shape), 0, blk.offset, Scalar::one(f));
    comps.emplace(deg, b.build());
  }
  return make_algebra_map(cc.alg, a, comps);
}

// ---------------------------------------------------------------------------
// Bar object comparison
// ---------------------------------------------------------------------------

ChainMap bar_unit_map(const DgAlgebra& a, const DgLeftModule& x, const BarComplex& b) {
  const Field& f = a.underlying.field();
  Window w = b.realization.window();
  std::map<int, SparseMatrix> comps;
  for (int q = w.lo; q <= w.hi; ++q) {
    int dx = x.underlying.window().contains(q) ? x.underlying.dim(q) : 0;
    MatrixBuilder mb(f, b.realization.dim(q), dx);
    if (dx > 0) {
      const BarBlock* blk = b.find_block(q, BarShape{0, {}, q});
      if (!blk) fail("bar unit: missing weight-0 block in degree " + std::to_string(q));
      for (int xi = 0; xi < dx; ++xi) mb.add(blk->offset + xi, xi, Scalar::one(f));
    }
    comps.emplace(q, mb.build());
  }
  return ChainMap::build(x.underlying, b.realization, comps);
}

BarObjectVerdict bar_object_check(const DgAlgebra& a, const DgLeftModule& x,
                                  const ChainComplex& z, Window w) {
  const Field& f = a.underlying.field();
  DgAlgebra ua = unit_algebra(f, a.underlying.window());
  BarComplex b = build_bar_core(trivial_bimodule(ua, a), a, as_bimodule(x), w);

  // the word enumeration is exact in every stored degree, so the bar side is
  // only unreliable at window edges or when an input was already truncated
  bool bar_trunc = a.underlying.truncated() || x.underlying.truncated();

  BarObjectVerdict v;
  v.ranks_match = true;
  for (int deg = w.lo; deg <= w.hi; ++deg) {
    int rb = homology(b.realization, deg).rank;
    int rz = homology(z, deg).rank;
    bool edge = !w.interior(deg) || bar_trunc || z.truncated() || !z.window().interior(deg);
    QuasiIsoRow row{deg, rb == rz, edge};
    if (!row.iso && !row.edge_unreliable) {
      v.ranks_match = false;
      if (v.detail.empty())
        v.detail = "homology rank mismatch in degree " + std::to_string(deg) + ": " +
                   std::to_string(rb) + " vs " + std::to_string(rz);
    }
    v.rows.push_back(row);
  }
  v.unit_map_ok = true;
  try {
    bar_unit_map(a, x, b);
  } catch (const std::exception& e) {
    v.unit_map_ok = false;
    if (v.detail.empty()) v.detail = e.what();
  }
  return v;
}

bool free_unit_projection_check(const DgAlgebra& a, const ChainComplex& e, Window w) {
  const Field& f = a.underlying.field();
  DgLeftModule x = free_left_module(a, e);
  DgAlgebra ua = unit_algebra(f, a.underlying.window());
  BarComplex b = build_bar_core(trivial_bimodule(ua, a), a, as_bimodule(x), w);
  ChainMap u = bar_unit_map(a, x, b);

  // augmentation projection applied to the weight-0 block only
  auto proj_entries = [&](MatrixBuilder& mb, int deg, int col0) {
    for (const TensorBlock& tb : tensor_blocks(a.underlying, e, deg)) {
      if (tb.p != 0) continue;
      for (int ai = 0; ai < a.underlying.dim(0); ++ai) {
        Scalar s = a.augmentation.at(0, ai);
        if (s.is_zero()) continue;
        for (int ei = 0; ei < e.dim(deg); ++ei)
          mb.add(ei, col0 + tb.offset + ai * e.dim(deg) + ei, s);
      }
    }
  };

  std::map<int, SparseMatrix> pcomps, qcomps;
  for (int deg = w.lo; deg <= w.hi; ++deg) {
    MatrixBuilder pb(f, e.dim(deg), b.realization.dim(deg));
    if (e.dim(deg) > 0) {
      const BarBlock* blk = b.find_block(deg, BarShape{0, {}, deg});
      if (blk) proj_entries(pb, deg, blk->offset);
    }
    pcomps.emplace(deg, pb.build());
    MatrixBuilder qb(f, e.dim(deg), x.underlying.dim(deg));
    if (e.dim(deg) > 0) proj_entries(qb, deg, 0);
    qcomps.emplace(deg, qb.build());
  }
  ChainMap p = ChainMap::build(b.realization, e, pcomps);
  ChainMap q = ChainMap::build(x.underlying, e, qcomps);
  return compose(u, p) == q;
}

// ---------------------------------------------------------------------------
// Simplicial chain complexes
// ---------------------------------------------------------------------------

ValidationReport validate(const SimplicialComplexObject& s) {
  ValidationReport rep;
  auto check = [&](const std::string& ax, bool ok, const std::string& viol) {
    rep.checks.push_back({ax, ok, ok ? "" : viol});
  };
  int L = s.top_level();
  bool shapes = L >= 0 && (int)s.faces.size() == L + 1 && (int)s.degeneracies.size() == L;
  std::string viol = shapes ? "" : "level/face/degeneracy counts";
  if (shapes && !s.faces[0].empty()) {
    shapes = false;
    viol = "level 0 has faces";
  }
  for (int n = 1; n <= L && shapes; ++n)
    if ((int)s.faces[n].size() != n + 1) {
      shapes = false;
      viol = "face count at level " + std::to_string(n);
    }
  for (int n = 0; n < L && shapes; ++n)
    if ((int)s.degeneracies[n].size() != n + 1) {
      shapes = false;
      viol = "degeneracy count at level " + std::to_string(n);
    }
  for (int n = 1; n <= L && shapes; ++n)
    for (const ChainMap& d : s.faces[n])
      if (!(d.src() == s.levels[n]) || !(d.dst() == s.levels[n - 1])) {
        shapes = false;
        viol = "face endpoints at level " + std::to_string(n);
      }
  for (int n = 0; n < L && shapes; ++n)
    for (const ChainMap& d : s.degeneracies[n])
      if (!(d.src() == s.levels[n]) || !(d.dst() == s.levels[n + 1])) {
        shapes = false;
        viol = "degeneracy endpoints at level " + std::to_string(n);
      }
  check("shapes", shapes, viol);
  if (!shapes) return rep;

  auto id_at = [&](int n, int i, int j) {
    return "(n,i,j)=(" + std::to_string(n) + "," + std::to_string(i) + "," + std::to_string(j) + ")";
  };
  {
    bool ok = true;
    std::string v;
    for (int n = 2; n <= L && ok; ++n)
      for (int j = 1; j <= n && ok; ++j)
        for (int i = 0; i < j && ok; ++i)
          if (!(compose(s.faces[n][j], s.faces[n - 1][i]) ==
                compose(s.faces[n][i], s.faces[n - 1][j - 1]))) {
            ok = false;
            v = id_at(n, i, j);
          }
    check("face-face", ok, v);
  }
  {
    bool ok = true;
    std::string v;
    for (int n = 0; n + 2 <= L && ok; ++n)
      for (int j = 0; j <= n && ok; ++j)
        for (int i = 0; i <= j && ok; ++i)
          if (!(compose(s.degeneracies[n][j], s.degeneracies[n + 1][i]) ==
                compose(s.degeneracies[n][i], s.degeneracies[n + 1][j + 1]))) {
            ok = false;
            v = id_at(n, i, j);
          }
    check("degeneracy-degeneracy", ok, v);
  }
  {
    bool ok = true;
    std::string v;
    for (int n = 0; n < L && ok; ++n)
      for (int j = 0; j <= n && ok; ++j)
        for (int i = 0; i <= n + 1 && ok; ++i) {
          ChainMap lhs = compose(s.degeneracies[n][j], s.faces[n + 1][i]);
          bool good;
          if (i == j || i == j + 1)
            good = lhs == ChainMap::identity(s.levels[n]);
          else if (i < j)
            good = lhs == compose(s.faces[n][i], s.degeneracies[n - 1][j - 1]);
          else
            good = lhs == compose(s.faces[n][i - 1], s.degeneracies[n - 1][j]);
          if (!good) {
            ok = false;
            v = id_at(n, i, j);
          }
        }
    check("face-degeneracy", ok, v);
  }
  return rep;
}

SimplicialComplexObject constant_simplicial(const ChainComplex& x, int levels) {
  if (levels < 0) fail("constant_simplicial: need at least level 0");
  SimplicialComplexObject out;
  out.levels.assign(levels + 1, x);
  out.faces.resize(levels + 1);
  out.degeneracies.resize(levels);
  ChainMap id = ChainMap::identity(x);
  for (int n = 1; n <= levels; ++n) out.faces[n].assign(n + 1, id);
  for (int n = 0; n < levels; ++n) out.degeneracies[n].assign(n + 1, id);
  return out;
}

SimplicialComplexObject bar_simplicial(const DgBimodule& m, const DgAlgebra& a,
                                       const DgBimodule& n, int levels) {
  if (!same_algebra(m.right_algebra, a))
    fail("side mismatch: left input is not a right module over the algebra");
  if (!same_algebra(n.left_algebra, a))
    fail("side mismatch: right input is not a left module over the algebra");
  if (levels < 0) fail("bar_simplicial: need at least level 0");
  const Field& f = a.underlying.field();
  const ChainComplex& cm = m.underlying;
  const ChainComplex& ca = a.underlying;
  const ChainComplex& cn = n.underlying;
  if (!(cm.window() == ca.window()) || !(cn.window() == ca.window()))
    fail("bar_simplicial: factor windows differ");
  Window w = ca.window();

  // nested-left powers P_k = M (x) A^(x)k and levels T_k = P_k (x) N
  std::vector<ChainComplex> pk{cm};
  for (int k = 1; k <= levels; ++k) pk.push_back(tensor(pk.back(), ca));
  SimplicialComplexObject out;
  for (int k = 0; k <= levels; ++k) out.levels.push_back(tensor(pk[k], cn));

  // factor-degree tuples of P_k in a given degree, with the index of the
  // first basis vector carrying those degrees
  std::map<std::pair<int, int>, std::vector<std::pair<std::vector<int>, int>>> pmemo;
  std::function<const std::vector<std::pair<std::vector<int>, int>>&(int, int)> ptup =
      [&](int k, int u) -> const std::vector<std::pair<std::vector<int>, int>>& {
    auto key = std::pair{k, u};
    auto it = pmemo.find(key);
    if (it != pmemo.end()) return it->second;
    std::vector<std::pair<std::vector<int>, int>> tups;
    if (k == 0) {
      if (cm.dim(u) > 0) tups.push_back({{u}, 0});
    } else {
      for (const TensorBlock& blk : tensor_blocks(pk[k - 1], ca, u)) {
        int qk = u - blk.p;
        for (const auto& [degs, base] : ptup(k - 1, blk.p)) {
          std::vector<int> d2 = degs;
          d2.push_back(qk);
          tups.push_back({std::move(d2), blk.offset + base * ca.dim(qk)});
        }
      }
    }
    return pmemo.emplace(key, std::move(tups)).first->second;
  };

  struct Tup {
    std::vector<int> degs;  // p, q_1..q_k, r
    std::vector<int> dims;
    int base;
  };
  std::vector<std::map<int, std::vector<Tup>>> ltup(levels + 1);
  std::vector<std::map<int, std::map<std::vector<int>, int>>> lidx(levels + 1);
  for (int k = 0; k <= levels; ++k)
    for (int t = w.lo; t <= w.hi; ++t) {
      std::vector<Tup> ts;
      std::map<std::vector<int>, int> ix;
      for (const TensorBlock& blk : tensor_blocks(pk[k], cn, t)) {
        int r = t - blk.p;
        for (const auto& [degs, base] : ptup(k, blk.p)) {
          Tup tp;
          tp.degs = degs;
          tp.degs.push_back(r);
          tp.base = blk.offset + base * cn.dim(r);
          tp.dims.push_back(cm.dim(degs[0]));
          for (int j = 1; j <= k; ++j) tp.dims.push_back(ca.dim(degs[j]));
          tp.dims.push_back(cn.dim(r));
          ix[tp.degs] = (int)ts.size();
          ts.push_back(std::move(tp));
        }
      }
      ltup[k].emplace(t, std::move(ts));
      lidx[k].emplace(t, std::move(ix));
    }

  out.faces.resize(levels + 1);
  for (int k = 1; k <= levels; ++k)
    for (int i = 0; i <= k; ++i) {
      std::map<int, SparseMatrix> comps;
      for (int t = w.lo; t <= w.hi; ++t) {
        MatrixBuilder b(f, out.levels[k - 1].dim(t), out.levels[k].dim(t));
        for (const Tup& tp : ltup[k].at(t)) {
          const std::vector<int>& dg = tp.degs;
          SparseMatrix op = (i == 0)   ? m.right_action_at(dg[0], dg[1])
                            : (i == k) ? n.left_action_at(dg[k], dg[k + 1])
                                       : a.product_at(dg[i], dg[i + 1]);
          if (op.is_zero()) continue;
          std::vector<int> td(dg);
          td[i] += td[i + 1];
          td.erase(td.begin() + i + 1);
          auto fit = lidx[k - 1].at(t).find(td);
          if (fit == lidx[k - 1].at(t).end()) continue;
          const Tup& tt = ltup[k - 1].at(t)[fit->second];
          int lsize = 1, rsize = 1;
          for (int j = 0; j < i; ++j) lsize *= tp.dims[j];
          for (int j = i + 2; j < (int)tp.dims.size(); ++j) rsize *= tp.dims[j];
          place_factor_op(b, op, lsize, rsize, tt.base, tp.base, Scalar::one(f));
        }
        comps.emplace(t, b.build());
      }
      out.faces[k].push_back(ChainMap::build(out.levels[k], out.levels[k - 1], comps));
    }

  out.degeneracies.resize(levels);
  for (int k = 0; k < levels; ++k)
    for (int i = 0; i <= k; ++i) {
      std::map<int, SparseMatrix> comps;
      for (int t = w.lo; t <= w.hi; ++t) {
        MatrixBuilder b(f, out.levels[k + 1].dim(t), out.levels[k].dim(t));
        for (const Tup& tp : ltup[k].at(t)) {
          std::vector<int> td(tp.degs);
          td.insert(td.begin() + i + 1, 0);
          auto fit = lidx[k + 1].at(t).find(td);
          if (fit == lidx[k + 1].at(t).end()) continue;
          const Tup& tt = ltup[k + 1].at(t)[fit->second];
          int lsize = 1, rsize = 1;
          for (int j = 0; j <= i; ++j) lsize *= tp.dims[j];
          for (int j = i + 1; j < (int)tp.dims.size(); ++j) rsize *= tp.dims[j];
          place_factor_op(b, a.unit, lsize, rsize, tt.base, tp.base, Scalar::one(f));
        }
        comps.emplace(t, b.build());
      }
      out.degeneracies[k].push_back(ChainMap::build(out.levels[k], out.levels[k + 1], comps));
    }
  return out;
}

Realization realize(const SimplicialComplexObject& s) {
  int L = s.top_level();
  if (L < 0) fail("realize: no levels");
  const Field& f = s.levels[0].field();
  Window w = s.levels[0].window();
  bool in_trunc = false;
  for (const ChainComplex& lv : s.levels) {
    if (!(lv.window() == w)) fail("realize: level windows differ");
    in_trunc = in_trunc || lv.truncated();
  }

  // unnormalized: the level-k block in total degree n holds internal degree n-k
  std::map<int, int> udims;
  std::map<int, std::vector<std::pair<int, int>>> ublocks;  // per degree: (level, offset)
  for (int n = w.lo; n <= w.hi; ++n) {
    int off = 0;
    for (int k = 0; k <= L; ++k) {
      int q = n - k;
      if (!w.contains(q) || s.levels[k].dim(q) == 0) continue;
      ublocks[n].push_back({k, off});
      off += s.levels[k].dim(q);
    }
    udims[n] = off;
  }
  bool lost = s.levels[L].total_dim() > 0;  // deeper levels are not stored
  for (int k = 0; k <= L && !lost; ++k)
    for (int q = w.lo; q <= w.hi && !lost; ++q)
      if (s.levels[k].dim(q) > 0 && !w.contains(q + k)) lost = true;

  auto uoff = [&](int n, int k) {
    auto it = ublocks.find(n);
    if (it == ublocks.end()) return -1;
    for (const auto& [kk, off] : it->second)
      if (kk == k) return off;
    return -1;
  };

  std::map<int, SparseMatrix> udiff;
  for (int n = w.lo + 1; n <= w.hi; ++n) {
    MatrixBuilder b(f, udims.at(n - 1), udims.at(n));
    auto it = ublocks.find(n);
    if (it != ublocks.end())
      for (const auto& [k, off] : it->second) {
        int q = n - k;
        int ti = uoff(n - 1, k);
        if (ti >= 0) place(b, s.levels[k].diff(q), ti, off, Scalar::one(f));
        int te = uoff(n - 1, k - 1);
        if (k >= 1 && te >= 0)
          for (int i = 0; i <= k; ++i)
            place(b, s.faces[k][i].component(q), te, off, sgn(f, q + i));
      }
    udiff.emplace(n, b.build());
  }

  ChainComplex unnorm = ChainComplex::build(f, w, udims, udiff, in_trunc || lost);

  // normalized: complement of the degenerate columns in each level block
  std::map<std::pair<int, int>, SparseMatrix> npi, niota;
  for (int k = 0; k <= L; ++k)
    for (int q = w.lo; q <= w.hi; ++q) {
      int d = s.levels[k].dim(q);
      if (d == 0) continue;
      SparseMatrix span(f, d, 0);
      for (int i = 0; i < k; ++i) span = hcat(span, s.degeneracies[k - 1][i].component(q));
      ColumnSplit cs(span);
      const std::vector<int>& comp = cs.complement();
      MatrixBuilder ib(f, d, (int)comp.size());
      for (int i = 0; i < (int)comp.size(); ++i) ib.add(comp[i], i, Scalar::one(f));
      niota.emplace(std::pair{k, q}, ib.build());
      MatrixBuilder pb(f, (int)comp.size(), d);
      for (int j = 0; j < d; ++j) {
        std::vector<Scalar> e(d, Scalar::zero(f));
        e[j] = Scalar::one(f);
        std::vector<Scalar> pr = cs.project(e);
        for (int i = 0; i < (int)comp.size(); ++i)
          if (!pr[i].is_zero()) pb.add(i, j, pr[i]);
      }
      npi.emplace(std::pair{k, q}, pb.build());
    }

  std::map<int, int> ndims;
  std::map<int, std::vector<std::pair<int, int>>> nblocks;
  for (int n = w.lo; n <= w.hi; ++n) {
    int off = 0;
    for (int k = 0; k <= L; ++k) {
      auto it = npi.find({k, n - k});
      if (it == npi.end() || it->second.rows() == 0) continue;
      nblocks[n].push_back({k, off});
      off += it->second.rows();
    }
    ndims[n] = off;
  }
  bool nlost = false;
  for (const auto& [kq, p] : npi) {
    if (p.rows() == 0) continue;
    if (kq.first == L || !w.contains(kq.first + kq.second)) nlost = true;
  }

  auto big_proj = [&](int n) {
    MatrixBuilder b(f, ndims.at(n), udims.at(n));
    auto it = nblocks.find(n);
    if (it != nblocks.end())
      for (const auto& [k, noff] : it->second)
        place(b, npi.at({k, n - k}), noff, uoff(n, k), Scalar::one(f));
    return b.build();
  };
  auto big_incl = [&](int n) {
    MatrixBuilder b(f, udims.at(n), ndims.at(n));
    auto it = nblocks.find(n);
    if (it != nblocks.end())
      for (const auto& [k, noff] : it->second)
        place(b, niota.at({k, n - k}), uoff(n, k), noff, Scalar::one(f));
    return b.build();
  };

  std::map<int, SparseMatrix> ndiff, pcomps;
  for (int n = w.lo; n <= w.hi; ++n) pcomps.emplace(n, big_proj(n));
  for (int n = w.lo + 1; n <= w.hi; ++n)
    ndiff.emplace(n, pcomps.at(n - 1) * udiff.at(n) * big_incl(n));
  ChainComplex norm = ChainComplex::build(f, w, ndims, ndiff, in_trunc || nlost);
  ChainMap cmp = ChainMap::build(unnorm, norm, pcomps);
  return {std::move(norm), std::move(unnorm), std::move(cmp)};
}

}  // namespace kd
