#pragma once

// Independent oracles used to freeze expected values. These deliberately avoid
// the library's elimination and bar-assembly code paths: ranks are computed by
// elementary column reduction (Smith-style, no row operations), dimensions by
// direct combinatorial counting.

#include "kd/field.hpp"

#include <map>
#include <vector>

namespace kd::oracle {

// Rank by left-to-right column reduction with low-entry pairing.
int rank_colreduce(std::vector<std::vector<Scalar>> m, const Field& f);

// Homology ranks of a complex given as dims per degree and dense differentials
// d[n]: degree n -> n-1, using rank_colreduce only.
std::map<int, int> homology_ranks(const std::map<int, int>& dims,
                                  const std::map<int, std::vector<std::vector<Scalar>>>& d,
                                  const Field& f);

BigInt binomial(int n, int k);

// Number of weakly increasing maps [a] -> [b].
BigInt monotone_count(int a, int b);

// Dimensions per degree of the w-fold tensor power of a graded space.
std::map<int, int> word_dims(const std::map<int, int>& letter_dims, int weight);

// Dimensions per degree of M (x) letters^{(x)w} (x) N summed over w <= max_weight,
// letters already carrying their suspended degree.
std::map<int, int> bar_dims(const std::map<int, int>& m_dims, const std::map<int, int>& letter_dims,
                            const std::map<int, int>& n_dims, int max_weight);

// Field Kunneth: ranks of H(A (x) B) from ranks of H(A), H(B).
std::map<int, int> kunneth(const std::map<int, int>& ha, const std::map<int, int>& hb);

std::map<int, int> convolve(const std::map<int, int>& a, const std::map<int, int>& b);

}  // namespace kd::oracle
