#include "kd/simplicial.hpp"

#include <sstream>
#include <stdexcept>

namespace kd {

std::string MonotoneMap::str() const {
  std::ostringstream os;
  os << "[" << src << "]->[" << tgt << "]:(";
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) os << ",";
    os << values[i];
  }
  os << ")";
  return os.str();
}

void validate(const MonotoneMap& f) {
  if (f.src < 0 || f.tgt < 0) throw std::invalid_argument("monotone map: negative ordinal");
  if (f.values.size() != static_cast<size_t>(f.src + 1))
    throw std::invalid_argument("monotone map: value table has wrong length");
  for (int i = 0; i <= f.src; ++i) {
    int v = f.values[static_cast<size_t>(i)];
    if (v < 0 || v > f.tgt) throw std::invalid_argument("monotone map: value out of range");
    if (i > 0 && v < f.values[static_cast<size_t>(i - 1)])
      throw std::invalid_argument("monotone map: not weakly increasing");
  }
}

MonotoneMap identity_map(int n) {
  MonotoneMap f{n, n, {}};
  f.values.resize(static_cast<size_t>(n + 1));
  for (int i = 0; i <= n; ++i) f.values[static_cast<size_t>(i)] = i;
  return f;
}

MonotoneMap compose(const MonotoneMap& f, const MonotoneMap& g) {
  if (f.tgt != g.src) throw std::invalid_argument("compose: boundary mismatch");
  MonotoneMap h{f.src, g.tgt, {}};
  h.values.reserve(f.values.size());
  for (int v : f.values) h.values.push_back(g.values[static_cast<size_t>(v)]);
  return h;
}

bool is_convex(const MonotoneMap& f) {
  for (int i = 0; i < f.src; ++i)
    if (f.values[static_cast<size_t>(i + 1)] - f.values[static_cast<size_t>(i)] > 1) return false;
  return true;
}

MonotoneMap face_map(int n, int i) {
  if (n < 1 || i < 0 || i > n) throw std::invalid_argument("face_map: bad index");
  MonotoneMap f{n - 1, n, {}};
  for (int j = 0; j <= n - 1; ++j) f.values.push_back(j < i ? j : j + 1);
  return f;
}

MonotoneMap degeneracy_map(int n, int i) {
  if (n < 0 || i < 0 || i > n) throw std::invalid_argument("degeneracy_map: bad index");
  MonotoneMap f{n + 1, n, {}};
  for (int j = 0; j <= n + 1; ++j) f.values.push_back(j <= i ? j : j - 1);
  return f;
}

MonotoneMap constant_map(int src, int tgt, int value) {
  MonotoneMap f{src, tgt, std::vector<int>(static_cast<size_t>(src + 1), value)};
  validate(f);
  return f;
}

MonotoneMap plus(const MonotoneMap& f) {
  MonotoneMap g{f.src + 1, f.tgt + 1, f.values};
  g.values.push_back(f.tgt + 1);
  return g;
}

void validate(const NablaMorphism& m) {
  validate(m.lambda);
  if (m.src.flag != 0 && m.src.flag != 1) throw std::invalid_argument("nabla: bad source flag");
  if (m.tgt.flag != 0 && m.tgt.flag != 1) throw std::invalid_argument("nabla: bad target flag");
  if (m.src.flag > m.tgt.flag) throw std::invalid_argument("nabla: flag must not decrease");
  if (m.lambda.src != m.tgt.k || m.lambda.tgt != m.src.k)
    throw std::invalid_argument("nabla: simplex part must map [tgt.k] -> [src.k]");
}

NablaMorphism nabla_identity(const NablaObject& a) { return {a, a, identity_map(a.k)}; }

NablaMorphism nabla_compose(const NablaMorphism& m2, const NablaMorphism& m1) {
  if (!(m1.tgt == m2.src)) throw std::invalid_argument("nabla_compose: boundary mismatch");
  // simplex parts compose in the reversed order
  return {m1.src, m2.tgt, compose(m2.lambda, m1.lambda)};
}

Ordinal delta_obj(const NablaObject& a) { return {a.flag == 0 ? a.k + 1 : a.k}; }

MonotoneMap delta(const NablaMorphism& m) {
  validate(m);
  if (m.src.flag == 0 && m.tgt.flag == 0) return plus(m.lambda);
  if (m.src.flag == 1 && m.tgt.flag == 1) return m.lambda;
  // flag 0 -> 1: include [src.k] into [src.k]+ after lambda
  MonotoneMap g{m.lambda.src, m.lambda.tgt + 1, m.lambda.values};
  return g;
}

MonotoneMap eta(const NablaObject& a) {
  Ordinal d = delta_obj(a);
  MonotoneMap f{d.n, 1, std::vector<int>(static_cast<size_t>(d.n + 1), 0)};
  if (a.flag == 0) f.values.back() = 1;
  return f;
}

std::vector<MonotoneMap> all_monotone(int a, int b) {
  std::vector<MonotoneMap> out;
  std::vector<int> cur(static_cast<size_t>(a + 1), 0);
  while (true) {
    out.push_back(MonotoneMap{a, b, cur});
    int i = a;
    while (i >= 0 && cur[static_cast<size_t>(i)] == b) --i;
    if (i < 0) break;
    int v = cur[static_cast<size_t>(i)] + 1;
    for (int j = i; j <= a; ++j) cur[static_cast<size_t>(j)] = v;
  }
  return out;
}

}  // namespace kd
