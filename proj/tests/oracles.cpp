#include "oracles.hpp"

#include <stdexcept>

namespace kd::oracle {

int rank_colreduce(std::vector<std::vector<Scalar>> m, const Field& f) {
  if (m.empty() || m[0].empty()) return 0;
  int rows = static_cast<int>(m.size());
  int cols = static_cast<int>(m[0].size());
  auto low = [&](int j) {
    for (int i = rows - 1; i >= 0; --i)
      if (!m[i][j].is_zero()) return i;
    return -1;
  };
  std::vector<int> owner(rows, -1);  // owner[i] = column with low i, already reduced
  int rank = 0;
  for (int j = 0; j < cols; ++j) {
    int l = low(j);
    while (l >= 0 && owner[l] >= 0) {
      int j2 = owner[l];
      Scalar coef = m[l][j] / m[l][j2];
      for (int i = 0; i <= l; ++i) m[i][j] = m[i][j] - coef * m[i][j2];
      l = low(j);
    }
    if (l >= 0) {
      owner[l] = j;
      ++rank;
    }
  }
  (void)f;
  return rank;
}

std::map<int, int> homology_ranks(const std::map<int, int>& dims,
                                  const std::map<int, std::vector<std::vector<Scalar>>>& d,
                                  const Field& f) {
  std::map<int, int> ranks;
  auto rank_at = [&](int n) {
    auto it = d.find(n);
    return it == d.end() ? 0 : rank_colreduce(it->second, f);
  };
  for (const auto& [n, dim] : dims) {
    int h = dim - rank_at(n) - rank_at(n + 1);
    ranks[n] = h;
  }
  return ranks;
}

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;
  }
  return r;
}

BigInt monotone_count(int a, int b) {
  // weakly increasing (a+1)-tuples with values in {0..b}
  return binomial(a + b + 1, a + 1);
}

std::map<int, int> convolve(const std::map<int, int>& a, const std::map<int, int>& b) {
  std::map<int, int> r;
  for (const auto& [da, na] : a)
    for (const auto& [db, nb] : b)
      if (na && nb) r[da + db] += na * nb;
  return r;
}

std::map<int, int> word_dims(const std::map<int, int>& letter_dims, int weight) {
  std::map<int, int> r{{0, 1}};
  for (int w = 0; w < weight; ++w) r = convolve(r, letter_dims);
  return r;
}

std::map<int, int> bar_dims(const std::map<int, int>& m_dims, const std::map<int, int>& letter_dims,
                            const std::map<int, int>& n_dims, int max_weight) {
  std::map<int, int> total;
  for (int w = 0; w <= max_weight; ++w) {
    auto words = word_dims(letter_dims, w);
    auto piece = convolve(convolve(m_dims, words), n_dims);
    for (const auto& [deg, dim] : piece) total[deg] += dim;
  }
  return total;
}

std::map<int, int> kunneth(const std::map<int, int>& ha, const std::map<int, int>& hb) {
  return convolve(ha, hb);
}

}  // namespace kd::oracle
