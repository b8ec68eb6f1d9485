#include "kd/dgalg.hpp"

#include <sstream>
#include <stdexcept>

namespace kd {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error("dgalg: " + what); }

bool is_zero(const SparseMatrix& m) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (!m.at(r, c).is_zero()) return false;
  return true;
}

// first differing column of two equal-shaped matrices, -1 if equal
int first_diff_col(const SparseMatrix& a, const SparseMatrix& b) {
  for (int c = 0; c < a.cols(); ++c)
    for (int r = 0; r < a.rows(); ++r)
      if (!(a.at(r, c) == b.at(r, c))) return c;
  return -1;
}

SparseMatrix stored_or_zero(const std::map<std::pair<int, int>, SparseMatrix>& table,
                            std::pair<int, int> key, const Field& f, int rows, int cols) {
  auto it = table.find(key);
  if (it != table.end()) return it->second;
  return SparseMatrix(f, rows, cols);
}

}  // namespace

bool ValidationReport::ok() const {
  for (auto& c : checks)
    if (!c.ok) return false;
  return true;
}

std::string ValidationReport::str() const {
  std::ostringstream os;
  for (auto& c : checks) {
    os << (c.ok ? "pass" : "FAIL") << "  " << c.axiom;
    if (!c.ok && !c.violation.empty()) os << "  first violation: " << c.violation;
    os << "\n";
  }
  return os.str();
}

SparseMatrix DgAlgebra::product_at(int p, int q) const {
  return stored_or_zero(product, {p, q}, underlying.field(), underlying.dim(p + q),
                        underlying.dim(p) * underlying.dim(q));
}

std::string DgAlgebra::basis_name(int degree, int index) const {
  auto it = basis_names.find(degree);
  if (it != basis_names.end() && index < (int)it->second.size()) return it->second[index];
  return "deg" + std::to_string(degree) + "#" + std::to_string(index);
}

SparseMatrix DgLeftModule::action_at(int p, int q) const {
  return stored_or_zero(action, {p, q}, underlying.field(), underlying.dim(p + q),
                        algebra.underlying.dim(p) * underlying.dim(q));
}

std::string DgLeftModule::basis_name(int degree, int index) const {
  auto it = basis_names.find(degree);
  if (it != basis_names.end() && index < (int)it->second.size()) return it->second[index];
  return "deg" + std::to_string(degree) + "#" + std::to_string(index);
}

SparseMatrix DgBimodule::left_action_at(int p, int q) const {
  return stored_or_zero(left_action, {p, q}, underlying.field(), underlying.dim(p + q),
                        left_algebra.underlying.dim(p) * underlying.dim(q));
}

SparseMatrix DgBimodule::right_action_at(int q, int p) const {
  return stored_or_zero(right_action, {q, p}, underlying.field(), underlying.dim(q + p),
                        underlying.dim(q) * right_algebra.underlying.dim(p));
}

std::string DgBimodule::basis_name(int degree, int index) const {
  auto it = basis_names.find(degree);
  if (it != basis_names.end() && index < (int)it->second.size()) return it->second[index];
  return "deg" + std::to_string(degree) + "#" + std::to_string(index);
}

namespace {

// Shared axiom kernels. All matrices are compared exactly; the decoded column
// of the first difference names the violating basis tuple.

struct Checker {
  ValidationReport rep;

  void check(const std::string& axiom, bool ok, const std::string& violation = "") {
    rep.checks.push_back({axiom, ok, ok ? "" : violation});
  }

  // compare lhs == rhs and decode the first differing column by the given fn
  template <typename Decode>
  void compare(const std::string& axiom, const SparseMatrix& lhs, const SparseMatrix& rhs,
               Decode decode) {
    int c = first_diff_col(lhs, rhs);
    rep.checks.push_back({axiom, c < 0, c < 0 ? "" : decode(c)});
  }
};

// left action of F on M against the product of F: associativity, unitality,
// Leibniz. act(p, q): F_p (x) M_q -> M_{p+q}. Used for algebras (M = A,
// act = product) and for modules/bimodules.
template <typename ActAt, typename NameF, typename NameM>
void check_left_action(Checker& ck, const std::string& prefix, const DgAlgebra& f,
                       const ChainComplex& m, ActAt act, NameF name_f, NameM name_m) {
  const Field& fld = f.underlying.field();
  Window wa = f.underlying.window(), wm = m.window();
  // associativity a(bx) = (ab)x on basis triples
  bool assoc_done = false;
  for (int p = wa.lo; p <= wa.hi && !assoc_done; ++p)
    for (int q = wa.lo; q <= wa.hi && !assoc_done; ++q)
      for (int r = wm.lo; r <= wm.hi && !assoc_done; ++r) {
        if (f.underlying.dim(p) == 0 || f.underlying.dim(q) == 0 || m.dim(r) == 0) continue;
        if (!wa.contains(p + q) || !wm.contains(q + r) || !wm.contains(p + q + r)) continue;
        SparseMatrix lhs =
            act(p, q + r) * kron(SparseMatrix::identity(fld, f.underlying.dim(p)), act(q, r));
        SparseMatrix rhs =
            act(p + q, r) * kron(f.product_at(p, q), SparseMatrix::identity(fld, m.dim(r)));
        int c = first_diff_col(lhs, rhs);
        if (c >= 0) {
          int k = c % m.dim(r), ij = c / m.dim(r);
          int j = ij % f.underlying.dim(q), i = ij / f.underlying.dim(q);
          std::ostringstream os;
          os << "(" << name_f(p, i) << ", " << name_f(q, j) << ", " << name_m(r, k)
             << ") in degrees (" << p << "," << q << "," << r << ")";
          ck.check(prefix + "associativity", false, os.str());
          assoc_done = true;
        }
      }
  if (!assoc_done) ck.check(prefix + "associativity", true);

  // unitality 1x = x
  bool unital_done = false;
  for (int q = wm.lo; q <= wm.hi && !unital_done; ++q) {
    if (m.dim(q) == 0) continue;
    SparseMatrix lhs = act(0, q) * kron(f.unit, SparseMatrix::identity(fld, m.dim(q)));
    int c = first_diff_col(lhs, SparseMatrix::identity(fld, m.dim(q)));
    if (c >= 0) {
      ck.check(prefix + "unitality", false,
               name_m(q, c) + " in degree " + std::to_string(q));
      unital_done = true;
    }
  }
  if (!unital_done) ck.check(prefix + "unitality", true);

  // Leibniz d(ax) = (da)x + (-1)^|a| a(dx)
  bool leibniz_done = false;
  for (int p = wa.lo; p <= wa.hi && !leibniz_done; ++p)
    for (int q = wm.lo; q <= wm.hi && !leibniz_done; ++q) {
      if (f.underlying.dim(p) == 0 || m.dim(q) == 0) continue;
      if (!wm.contains(p + q) || !wm.contains(p + q - 1)) continue;
      SparseMatrix lhs = m.diff(p + q) * act(p, q);
      SparseMatrix rhs =
          act(p - 1, q) * kron(f.underlying.diff(p), SparseMatrix::identity(fld, m.dim(q)));
      SparseMatrix second =
          act(p, q - 1) * kron(SparseMatrix::identity(fld, f.underlying.dim(p)), m.diff(q));
      rhs = p % 2 == 0 ? rhs + second : rhs - second;
      int c = first_diff_col(lhs, rhs);
      if (c >= 0) {
        int j = c % m.dim(q), i = c / m.dim(q);
        std::ostringstream os;
        os << "(" << name_f(p, i) << ", " << name_m(q, j) << ") in degrees (" << p << "," << q
           << ")";
        ck.check(prefix + "leibniz", false, os.str());
        leibniz_done = true;
      }
    }
  if (!leibniz_done) ck.check(prefix + "leibniz", true);
}

// right action analogue: act(q, p): M_q (x) F_p -> M_{q+p}, module-major columns.
template <typename ActAt, typename NameF, typename NameM>
void check_right_action(Checker& ck, const std::string& prefix, const DgAlgebra& f,
                        const ChainComplex& m, ActAt act, NameF name_f, NameM name_m) {
  const Field& fld = f.underlying.field();
  Window wa = f.underlying.window(), wm = m.window();
  // associativity (xa)b = x(ab)
  bool assoc_done = false;
  for (int q = wm.lo; q <= wm.hi && !assoc_done; ++q)
    for (int p = wa.lo; p <= wa.hi && !assoc_done; ++p)
      for (int r = wa.lo; r <= wa.hi && !assoc_done; ++r) {
        if (m.dim(q) == 0 || f.underlying.dim(p) == 0 || f.underlying.dim(r) == 0) continue;
        if (!wa.contains(p + r) || !wm.contains(q + p) || !wm.contains(q + p + r)) continue;
        SparseMatrix lhs =
            act(q + p, r) * kron(act(q, p), SparseMatrix::identity(fld, f.underlying.dim(r)));
        SparseMatrix rhs =
            act(q, p + r) * kron(SparseMatrix::identity(fld, m.dim(q)), f.product_at(p, r));
        int c = first_diff_col(lhs, rhs);
        if (c >= 0) {
          int k = c % f.underlying.dim(r), ij = c / f.underlying.dim(r);
          int j = ij % f.underlying.dim(p), i = ij / f.underlying.dim(p);
          std::ostringstream os;
          os << "(" << name_m(q, i) << ", " << name_f(p, j) << ", " << name_f(r, k)
             << ") in degrees (" << q << "," << p << "," << r << ")";
          ck.check(prefix + "associativity", false, os.str());
          assoc_done = true;
        }
      }
  if (!assoc_done) ck.check(prefix + "associativity", true);

  // unitality x1 = x
  bool unital_done = false;
  for (int q = wm.lo; q <= wm.hi && !unital_done; ++q) {
    if (m.dim(q) == 0) continue;
    SparseMatrix lhs = act(q, 0) * kron(SparseMatrix::identity(fld, m.dim(q)), f.unit);
    int c = first_diff_col(lhs, SparseMatrix::identity(fld, m.dim(q)));
    if (c >= 0) {
      ck.check(prefix + "unitality", false, name_m(q, c) + " in degree " + std::to_string(q));
      unital_done = true;
    }
  }
  if (!unital_done) ck.check(prefix + "unitality", true);

  // Leibniz d(xa) = (dx)a + (-1)^|x| x(da)
  bool leibniz_done = false;
  for (int q = wm.lo; q <= wm.hi && !leibniz_done; ++q)
    for (int p = wa.lo; p <= wa.hi && !leibniz_done; ++p) {
      if (m.dim(q) == 0 || f.underlying.dim(p) == 0) continue;
      if (!wm.contains(q + p) || !wm.contains(q + p - 1)) continue;
      SparseMatrix lhs = m.diff(q + p) * act(q, p);
      SparseMatrix rhs =
          act(q - 1, p) * kron(m.diff(q), SparseMatrix::identity(fld, f.underlying.dim(p)));
      SparseMatrix second =
          act(q, p - 1) * kron(SparseMatrix::identity(fld, m.dim(q)), f.underlying.diff(p));
      rhs = q % 2 == 0 ? rhs + second : rhs - second;
      int c = first_diff_col(lhs, rhs);
      if (c >= 0) {
        int j = c % f.underlying.dim(p), i = c / f.underlying.dim(p);
        std::ostringstream os;
        os << "(" << name_m(q, i) << ", " << name_f(p, j) << ") in degrees (" << q << "," << p
           << ")";
        ck.check(prefix + "leibniz", false, os.str());
        leibniz_done = true;
      }
    }
  if (!leibniz_done) ck.check(prefix + "leibniz", true);
}

}  // namespace

ValidationReport validate(const DgAlgebra& a) {
  Checker ck;
  const ChainComplex& u = a.underlying;
  const Field& f = u.field();
  Window w = u.window();

  // shape sanity first; a malformed table aborts the remaining checks
  bool shapes = a.unit.rows() == u.dim(0) && a.unit.cols() == 1 &&
                a.augmentation.rows() == 1 && a.augmentation.cols() == u.dim(0);
  for (auto& [pq, m] : a.product) {
    auto [p, q] = pq;
    if (m.rows() != u.dim(p + q) || m.cols() != u.dim(p) * u.dim(q)) shapes = false;
  }
  ck.check("shapes", shapes);
  if (!shapes) return ck.rep;

  ck.check("unit-nonzero", !is_zero(a.unit));

  auto prod = [&](int p, int q) { return a.product_at(p, q); };
  auto name = [&](int d, int i) { return a.basis_name(d, i); };
  check_left_action(ck, "", a, u, prod, name, name);

  // right unitality is not implied by the left-action kernel
  bool runital = true;
  std::string rv;
  for (int q = w.lo; q <= w.hi && runital; ++q) {
    if (u.dim(q) == 0) continue;
    SparseMatrix lhs = a.product_at(q, 0) * kron(SparseMatrix::identity(f, u.dim(q)), a.unit);
    int c = first_diff_col(lhs, SparseMatrix::identity(f, u.dim(q)));
    if (c >= 0) {
      runital = false;
      rv = a.basis_name(q, c) + " in degree " + std::to_string(q);
    }
  }
  ck.check("right-unitality", runital, rv);

  // augmentation: dg map, multiplicative, counital on the unit
  bool aug_dg = w.contains(1) ? is_zero(a.augmentation * u.diff(1)) : true;
  ck.check("augmentation-dg", aug_dg);
  SparseMatrix aug_mult = a.augmentation * a.product_at(0, 0);
  ck.check("augmentation-multiplicative",
           first_diff_col(aug_mult, kron(a.augmentation, a.augmentation)) < 0);
  SparseMatrix aug_unit = a.augmentation * a.unit;
  ck.check("augmentation-unit", aug_unit.rows() == 1 && aug_unit.at(0, 0).is_one());

  // bar finiteness regime: augmentation ideal concentrated in degrees >= 0
  bool regime = true;
  for (int n = w.lo; n < 0; ++n)
    if (u.dim(n) > 0) regime = false;
  ck.check("regime", regime,
           regime ? "" : "bar finiteness regime requires the augmentation ideal in degrees >= 0");
  return ck.rep;
}

ValidationReport validate(const DgLeftModule& m) {
  Checker ck;
  bool shapes = true;
  for (auto& [pq, mat] : m.action) {
    auto [p, q] = pq;
    if (mat.rows() != m.underlying.dim(p + q) ||
        mat.cols() != m.algebra.underlying.dim(p) * m.underlying.dim(q))
      shapes = false;
  }
  ck.check("shapes", shapes);
  if (!shapes) return ck.rep;
  auto act = [&](int p, int q) { return m.action_at(p, q); };
  auto name_a = [&](int d, int i) { return m.algebra.basis_name(d, i); };
  auto name_m = [&](int d, int i) { return m.basis_name(d, i); };
  check_left_action(ck, "", m.algebra, m.underlying, act, name_a, name_m);
  return ck.rep;
}

ValidationReport validate(const DgBimodule& m) {
  Checker ck;
  bool shapes = true;
  for (auto& [pq, mat] : m.left_action) {
    auto [p, q] = pq;
    if (mat.rows() != m.underlying.dim(p + q) ||
        mat.cols() != m.left_algebra.underlying.dim(p) * m.underlying.dim(q))
      shapes = false;
  }
  for (auto& [qp, mat] : m.right_action) {
    auto [q, p] = qp;
    if (mat.rows() != m.underlying.dim(q + p) ||
        mat.cols() != m.underlying.dim(q) * m.right_algebra.underlying.dim(p))
      shapes = false;
  }
  ck.check("shapes", shapes);
  if (!shapes) return ck.rep;
  auto actl = [&](int p, int q) { return m.left_action_at(p, q); };
  auto actr = [&](int q, int p) { return m.right_action_at(q, p); };
  auto name_a = [&](int d, int i) { return m.left_algebra.basis_name(d, i); };
  auto name_b = [&](int d, int i) { return m.right_algebra.basis_name(d, i); };
  auto name_m = [&](int d, int i) { return m.basis_name(d, i); };
  check_left_action(ck, "left-", m.left_algebra, m.underlying, actl, name_a, name_m);
  check_right_action(ck, "right-", m.right_algebra, m.underlying, actr, name_b, name_m);

  // commutation a(xb) = (ax)b
  const Field& f = m.underlying.field();
  Window wa = m.left_algebra.underlying.window(), wm = m.underlying.window(),
         wb = m.right_algebra.underlying.window();
  bool comm = true;
  std::string cv;
  for (int p = wa.lo; p <= wa.hi && comm; ++p)
    for (int q = wm.lo; q <= wm.hi && comm; ++q)
      for (int r = wb.lo; r <= wb.hi && comm; ++r) {
        if (m.left_algebra.underlying.dim(p) == 0 || m.underlying.dim(q) == 0 ||
            m.right_algebra.underlying.dim(r) == 0)
          continue;
        if (!wm.contains(q + r) || !wm.contains(p + q) || !wm.contains(p + q + r)) continue;
        SparseMatrix lhs =
            actl(p, q + r) *
            kron(SparseMatrix::identity(f, m.left_algebra.underlying.dim(p)), actr(q, r));
        SparseMatrix rhs =
            actr(p + q, r) *
            kron(actl(p, q), SparseMatrix::identity(f, m.right_algebra.underlying.dim(r)));
        int c = first_diff_col(lhs, rhs);
        if (c >= 0) {
          comm = false;
          int k = c % m.right_algebra.underlying.dim(r), ij = c / m.right_algebra.underlying.dim(r);
          int j = ij % m.underlying.dim(q), i = ij / m.underlying.dim(q);
          std::ostringstream os;
          os << "(" << name_a(p, i) << ", " << name_m(q, j) << ", " << name_b(r, k)
             << ") in degrees (" << p << "," << q << "," << r << ")";
          cv = os.str();
        }
      }
  ck.check("commutation", comm, cv);
  return ck.rep;
}

ValidationReport validate(const Multimodule& m) {
  Checker ck;
  ck.check("arity", m.algebras.size() == m.bimodules.size() + 1);
  for (size_t i = 0; i < m.bimodules.size(); ++i) {
    bool left = m.bimodules[i].left_algebra.name == m.algebras[i].name &&
                m.bimodules[i].left_algebra.underlying == m.algebras[i].underlying;
    bool right = m.bimodules[i].right_algebra.name == m.algebras[i + 1].name &&
                 m.bimodules[i].right_algebra.underlying == m.algebras[i + 1].underlying;
    ck.check("side-match M^{" + std::to_string(i) + "," + std::to_string(i + 1) + "}",
             left && right);
    ValidationReport sub = validate(m.bimodules[i]);
    ck.check("bimodule M^{" + std::to_string(i) + "," + std::to_string(i + 1) + "}", sub.ok(),
             sub.ok() ? "" : sub.str());
  }
  return ck.rep;
}

namespace {
template <typename T>
void require_valid_impl(const T& t, const char* what) {
  ValidationReport r = validate(t);
  if (!r.ok()) fail(std::string(what) + " failed validation:\n" + r.str());
}
}  // namespace

void require_valid(const DgAlgebra& a) { require_valid_impl(a, "algebra"); }
void require_valid(const DgLeftModule& m) { require_valid_impl(m, "left module"); }
void require_valid(const DgBimodule& m) { require_valid_impl(m, "bimodule"); }
void require_valid(const Multimodule& m) { require_valid_impl(m, "multimodule"); }

ValidationReport validate(const DgAlgebraMap& f) {
  Checker ck;
  // unit preserved
  SparseMatrix u = f.map.component(0) * f.src.unit;
  ck.check("unit", first_diff_col(u, f.dst.unit) < 0);
  // multiplicative on basis pairs
  Window w = f.src.underlying.window();
  bool mult = true;
  std::string mv;
  for (int p = w.lo; p <= w.hi && mult; ++p)
    for (int q = w.lo; q <= w.hi && mult; ++q) {
      if (f.src.underlying.dim(p) == 0 || f.src.underlying.dim(q) == 0 || !w.contains(p + q))
        continue;
      SparseMatrix lhs = f.map.component(p + q) * f.src.product_at(p, q);
      SparseMatrix rhs = f.dst.product_at(p, q) * kron(f.map.component(p), f.map.component(q));
      int c = first_diff_col(lhs, rhs);
      if (c >= 0) {
        mult = false;
        int j = c % f.src.underlying.dim(q), i = c / f.src.underlying.dim(q);
        mv = "(" + f.src.basis_name(p, i) + ", " + f.src.basis_name(q, j) + ") in degrees (" +
             std::to_string(p) + "," + std::to_string(q) + ")";
      }
    }
  ck.check("multiplicative", mult, mv);
  // augmentation preserved
  ck.check("augmentation",
           first_diff_col(f.dst.augmentation * f.map.component(0), f.src.augmentation) < 0);
  return ck.rep;
}

DgAlgebraMap make_algebra_map(const DgAlgebra& src, const DgAlgebra& dst,
                              const std::map<int, SparseMatrix>& components) {
  DgAlgebraMap f{src, dst, ChainMap::build(src.underlying, dst.underlying, components)};
  ValidationReport r = validate(f);
  if (!r.ok()) fail("algebra map failed validation:\n" + r.str());
  return f;
}

DgAlgebra unit_algebra(const Field& f, Window w) {
  DgAlgebra a;
  a.name = "1";
  a.underlying = unit_complex(f, w);
  a.unit = SparseMatrix::identity(f, 1);
  a.product.emplace(std::pair{0, 0}, SparseMatrix::identity(f, 1));
  a.augmentation = SparseMatrix::identity(f, 1);
  a.basis_names[0] = {"1"};
  require_valid(a);
  return a;
}

DgAlgebraMap algebra_unit_map(const DgAlgebra& a) {
  std::map<int, SparseMatrix> comps;
  comps.emplace(0, a.unit);
  return make_algebra_map(unit_algebra(a.underlying.field(), a.underlying.window()), a, comps);
}

DgAlgebraMap algebra_augmentation_map(const DgAlgebra& a) {
  std::map<int, SparseMatrix> comps;
  comps.emplace(0, a.augmentation);
  return make_algebra_map(a, unit_algebra(a.underlying.field(), a.underlying.window()), comps);
}

namespace {

// index of a_i (x) e_j (x) b_k inside ((A (x) E) (x) B)_{s+t+r}
struct TripleIndexer {
  const ChainComplex& a;
  const ChainComplex& e;
  const ChainComplex& b;
  ChainComplex ae;

  TripleIndexer(const ChainComplex& a_, const ChainComplex& e_, const ChainComplex& b_)
      : a(a_), e(e_), b(b_), ae(tensor(a_, e_)) {}

  int index(int s, int i, int t, int j, int r, int k) const {
    int n = s + t + r;
    auto outer = tensor_blocks(ae, b, n);
    int off_outer = -1;
    for (auto& blk : outer)
      if (blk.p == s + t) off_outer = blk.offset;
    auto inner = tensor_blocks(a, e, s + t);
    int off_inner = -1;
    for (auto& blk : inner)
      if (blk.p == s) off_inner = blk.offset;
    if (off_outer < 0 || off_inner < 0) return -1;
    return off_outer + (off_inner + i * e.dim(t) + j) * b.dim(r) + k;
  }
};

}  // namespace

DgBimodule free_bimodule(const DgAlgebra& a, const ChainComplex& e, const DgAlgebra& b) {
  DgBimodule m;
  m.name = a.name + "(x)E(x)" + b.name;
  m.left_algebra = a;
  m.right_algebra = b;
  m.underlying = tensor(tensor(a.underlying, e), b.underlying);
  const Field& f = m.underlying.field();
  TripleIndexer ix(a.underlying, e, b.underlying);
  Window wm = m.underlying.window(), wa = a.underlying.window(), wb = b.underlying.window();

  for (int p = wa.lo; p <= wa.hi; ++p) {
    if (a.underlying.dim(p) == 0) continue;
    for (int q = wm.lo; q <= wm.hi; ++q) {
      if (m.underlying.dim(q) == 0 || !wm.contains(p + q)) continue;
      MatrixBuilder bl(f, m.underlying.dim(p + q), a.underlying.dim(p) * m.underlying.dim(q));
      for (auto& ob : tensor_blocks(ix.ae, b.underlying, q)) {
        int r = q - ob.p;
        for (auto& ib : tensor_blocks(a.underlying, e, ob.p)) {
          int s = ib.p, t = ob.p - ib.p;
          if (!wa.contains(p + s)) continue;
          SparseMatrix prod = a.product_at(p, s);
          for (int i = 0; i < a.underlying.dim(p); ++i)
            for (int is = 0; is < a.underlying.dim(s); ++is)
              for (int u = 0; u < a.underlying.dim(p + s); ++u) {
                Scalar coef = prod.at(u, i * a.underlying.dim(s) + is);
                if (coef.is_zero()) continue;
                for (int j = 0; j < e.dim(t); ++j)
                  for (int k = 0; k < b.underlying.dim(r); ++k) {
                    int row = ix.index(p + s, u, t, j, r, k);
                    int col_m = ix.index(s, is, t, j, r, k);
                    if (row < 0 || col_m < 0) continue;
                    bl.add(row, i * m.underlying.dim(q) + col_m, coef);
                  }
              }
        }
      }
      m.left_action.emplace(std::pair{p, q}, bl.build());
    }
  }

  for (int q = wm.lo; q <= wm.hi; ++q) {
    if (m.underlying.dim(q) == 0) continue;
    for (int p = wb.lo; p <= wb.hi; ++p) {
      if (b.underlying.dim(p) == 0 || !wm.contains(q + p)) continue;
      MatrixBuilder br(f, m.underlying.dim(q + p), m.underlying.dim(q) * b.underlying.dim(p));
      for (auto& ob : tensor_blocks(ix.ae, b.underlying, q)) {
        int r = q - ob.p;
        if (!wb.contains(r + p)) continue;
        SparseMatrix prod = b.product_at(r, p);
        for (auto& ib : tensor_blocks(a.underlying, e, ob.p)) {
          int s = ib.p, t = ob.p - ib.p;
          for (int k = 0; k < b.underlying.dim(r); ++k)
            for (int kp = 0; kp < b.underlying.dim(p); ++kp)
              for (int u = 0; u < b.underlying.dim(r + p); ++u) {
                Scalar coef = prod.at(u, k * b.underlying.dim(p) + kp);
                if (coef.is_zero()) continue;
                for (int i = 0; i < a.underlying.dim(s); ++i)
                  for (int j = 0; j < e.dim(t); ++j) {
                    int row = ix.index(s, i, t, j, r + p, u);
                    int col_m = ix.index(s, i, t, j, r, k);
                    if (row < 0 || col_m < 0) continue;
                    br.add(row, col_m * b.underlying.dim(p) + kp, coef);
                  }
              }
        }
      }
      m.right_action.emplace(std::pair{q, p}, br.build());
    }
  }
  require_valid(m);
  return m;
}

DgLeftModule free_left_module(const DgAlgebra& a, const ChainComplex& e) {
  DgLeftModule m;
  m.name = a.name + "(x)E";
  m.algebra = a;
  m.underlying = tensor(a.underlying, e);
  const Field& f = m.underlying.field();
  Window wm = m.underlying.window(), wa = a.underlying.window();
  for (int p = wa.lo; p <= wa.hi; ++p) {
    if (a.underlying.dim(p) == 0) continue;
    for (int q = wm.lo; q <= wm.hi; ++q) {
      if (m.underlying.dim(q) == 0 || !wm.contains(p + q)) continue;
      MatrixBuilder bl(f, m.underlying.dim(p + q), a.underlying.dim(p) * m.underlying.dim(q));
      auto src_blocks = tensor_blocks(a.underlying, e, q);
      auto dst_blocks = tensor_blocks(a.underlying, e, p + q);
      for (auto& ib : src_blocks) {
        int s = ib.p, t = q - ib.p;
        if (!wa.contains(p + s)) continue;
        int off_dst = -1;
        for (auto& db : dst_blocks)
          if (db.p == p + s) off_dst = db.offset;
        if (off_dst < 0) continue;
        SparseMatrix prod = a.product_at(p, s);
        for (int i = 0; i < a.underlying.dim(p); ++i)
          for (int is = 0; is < a.underlying.dim(s); ++is)
            for (int u = 0; u < a.underlying.dim(p + s); ++u) {
              Scalar coef = prod.at(u, i * a.underlying.dim(s) + is);
              if (coef.is_zero()) continue;
              for (int j = 0; j < e.dim(t); ++j)
                bl.add(off_dst + u * e.dim(t) + j,
                       i * m.underlying.dim(q) + ib.offset + is * e.dim(t) + j, coef);
            }
      }
      m.action.emplace(std::pair{p, q}, bl.build());
    }
  }
  require_valid(m);
  return m;
}

DgLeftModule restrict_scalars(const DgAlgebraMap& f, const DgLeftModule& m) {
  ValidationReport r = validate(f);
  if (!r.ok()) fail("restrict_scalars: invalid algebra map:\n" + r.str());
  if (!(f.dst.underlying == m.algebra.underlying) || f.dst.name != m.algebra.name)
    fail("restrict_scalars: module is not over the map's target");
  DgLeftModule out;
  out.name = m.name + "|" + f.src.name;
  out.algebra = f.src;
  out.underlying = m.underlying;
  out.basis_names = m.basis_names;
  out.sector = m.sector;
  const Field& fld = m.underlying.field();
  Window wa = f.src.underlying.window(), wm = m.underlying.window();
  for (int p = wa.lo; p <= wa.hi; ++p) {
    if (f.src.underlying.dim(p) == 0) continue;
    for (int q = wm.lo; q <= wm.hi; ++q) {
      if (m.underlying.dim(q) == 0 || !wm.contains(p + q)) continue;
      SparseMatrix act = m.action_at(p, q) *
                         kron(f.map.component(p), SparseMatrix::identity(fld, m.underlying.dim(q)));
      out.action.emplace(std::pair{p, q}, act);
    }
  }
  require_valid(out);
  return out;
}

DgBimodule regular_bimodule(const DgAlgebra& a) {
  DgBimodule m;
  m.name = a.name;
  m.left_algebra = a;
  m.right_algebra = a;
  m.underlying = a.underlying;
  m.left_action = a.product;
  m.right_action = a.product;
  m.basis_names = a.basis_names;
  m.sector = a.sector;
  require_valid(m);
  return m;
}

DgBimodule trivial_bimodule(const DgAlgebra& a, const DgAlgebra& b) {
  DgBimodule m;
  m.name = "1";
  m.left_algebra = a;
  m.right_algebra = b;
  m.underlying = unit_complex(a.underlying.field(), a.underlying.window());
  m.left_action.emplace(std::pair{0, 0}, a.augmentation);
  m.right_action.emplace(std::pair{0, 0}, b.augmentation);
  m.basis_names[0] = {"1"};
  require_valid(m);
  return m;
}

DgLeftModule trivial_left_module(const DgAlgebra& a) {
  DgLeftModule m;
  m.name = "1";
  m.algebra = a;
  m.underlying = unit_complex(a.underlying.field(), a.underlying.window());
  m.action.emplace(std::pair{0, 0}, a.augmentation);
  m.basis_names[0] = {"1"};
  require_valid(m);
  return m;
}

DgBimodule as_bimodule(const DgLeftModule& m) {
  DgBimodule out;
  out.name = m.name;
  out.left_algebra = m.algebra;
  out.right_algebra = unit_algebra(m.underlying.field(), m.underlying.window());
  out.underlying = m.underlying;
  out.left_action = m.action;
  out.basis_names = m.basis_names;
  out.sector = m.sector;
  Window wm = m.underlying.window();
  for (int q = wm.lo; q <= wm.hi; ++q)
    if (m.underlying.dim(q) > 0)
      out.right_action.emplace(std::pair{q, 0},
                               SparseMatrix::identity(m.underlying.field(), m.underlying.dim(q)));
  require_valid(out);
  return out;
}

}  // namespace kd
