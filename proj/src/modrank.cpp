#include "relbetti/modrank.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace relbetti {
namespace modp {
namespace {

uint32_t mul(uint32_t a, uint32_t b) { return uint32_t(uint64_t(a) * b % kPrime); }

uint32_t power(uint32_t base, uint64_t e) {
  uint32_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

std::optional<uint32_t> reduce_rational(const Rational& q) {
  mpz_class p(static_cast<unsigned long>(kPrime));
  mpz_class n, d;
  if (q.is_small()) {
    n = static_cast<long>(q.small_num());
    d = static_cast<long>(q.small_den());
  } else {
    mpq_class m = q.to_mpq();
    n = m.get_num();
    d = m.get_den();
  }
  mpz_class nr, dr;
  mpz_mod(nr.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
  mpz_mod(dr.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t());
  if (dr == 0) return std::nullopt;
  return mul(uint32_t(nr.get_ui()), inv(uint32_t(dr.get_ui())));
}

}  // namespace

uint32_t inv(uint32_t a) { return power(a, kPrime - 2); }

uint32_t sqrt_minus_one() {
  // 3 generates F_p^*, so 3^((p-1)/4) has order 4.
  static const uint32_t root = power(3, (kPrime - 1) / 4);
  return root;
}

std::optional<uint32_t> reduce(const GScalar& s) {
  auto re = reduce_rational(s.re);
  if (!re) return std::nullopt;
  if (s.im.is_zero()) return re;
  auto im = reduce_rational(s.im);
  if (!im) return std::nullopt;
  return uint32_t((uint64_t(*re) + mul(*im, sqrt_minus_one())) % kPrime);
}

}  // namespace modp

std::optional<size_t> rank_mod_p(const SparseMatrix& m, size_t cap) {
  using modp::kPrime;
  bool by_columns = m.rows() <= m.cols();
  size_t len = by_columns ? m.rows() : m.cols();
  size_t count = by_columns ? m.cols() : m.rows();
  cap = std::min({cap, len, count});
  if (cap == 0) return 0;

  // Vectors to insert, each as sparse (index, residue) lists.
  std::vector<std::vector<std::pair<Index, uint32_t>>> vecs(count);
  for (Index j = 0; j < m.cols(); ++j) {
    for (const auto& e : m.col(j)) {
      auto r = modp::reduce(e.v);
      if (!r) return std::nullopt;
      if (*r == 0) continue;
      if (by_columns) {
        vecs[j].emplace_back(e.i, *r);
      } else {
        vecs[e.i].emplace_back(j, *r);
      }
    }
  }

  std::vector<size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(0x5eed);
  for (size_t k = count; k > 1; --k) std::swap(order[k - 1], order[rng() % k]);

  std::vector<std::vector<uint32_t>> rows;
  std::vector<int> row_of_lead(len, -1);
  std::vector<uint32_t> v(len);
  for (size_t idx : order) {
    if (vecs[idx].empty()) continue;
    std::fill(v.begin(), v.end(), 0);
    size_t first = len;
    for (auto [i, r] : vecs[idx]) {
      v[i] = r;
      first = std::min(first, size_t(i));
    }
    size_t lead = len;
    for (size_t k = first; k < len; ++k) {
      if (v[k] == 0) continue;
      int r = row_of_lead[k];
      if (r < 0) {
        if (lead == len) lead = k;
        continue;
      }
      const uint32_t* row = rows[size_t(r)].data();
      uint64_t c = kPrime - v[k];
      for (size_t j = k; j < len; ++j) v[j] = uint32_t((v[j] + c * row[j]) % kPrime);
    }
    if (lead == len) continue;
    uint32_t s = modp::inv(v[lead]);
    for (size_t j = lead; j < len; ++j) v[j] = uint32_t(uint64_t(v[j]) * s % kPrime);
    row_of_lead[lead] = int(rows.size());
    rows.push_back(v);
    if (rows.size() >= cap) break;
  }
  return rows.size();
}

BlockSplit split_blocks(const SparseMatrix& m) {
  // Union-find over rows [0, R) and columns [R, R + C).
  size_t R = m.rows(), C = m.cols();
  std::vector<size_t> parent(R + C);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (Index j = 0; j < C; ++j) {
    for (const auto& e : m.col(j)) {
      size_t a = find(e.i), b = find(R + j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<int> block_of_root(R + C, -1);
  BlockSplit out;
  auto block_for = [&](size_t x) {
    size_t r = find(x);
    if (block_of_root[r] < 0) {
      block_of_root[r] = int(out.row_blocks.size());
      out.row_blocks.emplace_back();
      out.col_blocks.emplace_back();
    }
    return size_t(block_of_root[r]);
  };
  for (Index i = 0; i < R; ++i) out.row_blocks[block_for(i)].push_back(i);
  for (Index j = 0; j < C; ++j) out.col_blocks[block_for(R + j)].push_back(j);
  return out;
}

SparseMatrix extract_block(const SparseMatrix& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  std::vector<int> pos(m.rows(), -1);
  for (size_t k = 0; k < rows.size(); ++k) pos[rows[k]] = int(k);
  std::vector<SVec> out;
  out.reserve(cols.size());
  for (Index j : cols) {
    SVec c;
    for (const auto& e : m.col(j)) {
      if (pos[e.i] >= 0) c.push_back(SEntry{Index(pos[e.i]), e.v});
    }
    std::sort(c.begin(), c.end(), [](const SEntry& a, const SEntry& b) { return a.i < b.i; });
    out.push_back(std::move(c));
  }
  return SparseMatrix::from_columns(Index(rows.size()), std::move(out));
}

}  // namespace relbetti
