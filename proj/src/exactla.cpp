#include "birsym/exactla.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "birsym/algebra.hpp"

namespace birsym {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Barrett reduction for products of residues below p < 2^31.
struct Modulus {
  u32 p;
  u64 m;
  explicit Modulus(u32 prime) : p(prime), m(~u64{0} / prime) {}
  u32 reduce(u64 x) const {
    u64 q = static_cast<u64>((static_cast<unsigned __int128>(x) * m) >> 64);
    u64 r = x - q * p;
    while (r >= p) r -= p;
    return static_cast<u32>(r);
  }
  u32 mul(u32 a, u32 b) const { return reduce(static_cast<u64>(a) * b); }
  u32 neg(u32 a) const { return a == 0 ? 0 : p - a; }
};

u64 mulmod64(u64 a, u64 b, u64 n) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % n);
}

u64 powmod64(u64 a, u64 e, u64 n) {
  u64 r = 1 % n;
  a %= n;
  while (e) {
    if (e & 1) r = mulmod64(r, a, n);
    a = mulmod64(a, a, n);
    e >>= 1;
  }
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint32_t> pick_primes(std::size_t count, std::uint64_t seed, std::int64_t avoid) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<u64> dist((u64{1} << 30) + 1, (u64{1} << 31) - 1);
  std::vector<u32> primes;
  while (primes.size() < count) {
    u64 c = dist(rng) | 1;
    while (!is_prime(c)) c += 2;
    if (c >= (u64{1} << 31)) continue;
    if (avoid != 0 && avoid % static_cast<std::int64_t>(c) == 0) continue;
    if (std::find(primes.begin(), primes.end(), c) != primes.end()) continue;
    primes.push_back(static_cast<u32>(c));
  }
  return primes;
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (r != 1) throw Error("inverse_mod: value not invertible");
  return static_cast<u32>(t < 0 ? t + p : t);
}

class ModpEliminator {
 public:
  ModpEliminator(const SparseMatrix& matrix, const EliminationOptions& options, ModpEchelon& out)
      : mod_(out.p_), options_(options), out_(out) {
    const std::size_t ncols = matrix.cols();
    col_rows_.resize(ncols);
    count_.assign(ncols, 0);
    queued_.assign(ncols, kAbsent);
    done_.assign(ncols, 0);
    rows_.reserve(matrix.rows());
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
      ModRow row;
      for (const auto& e : matrix.row(i)) {
        u32 v = reduce_mod(e.value, mod_.p);
        if (v) row.push_back({e.col, v});
      }
      if (row.empty()) continue;
      const u32 id = static_cast<u32>(rows_.size());
      for (const auto& e : row) {
        ++count_[e.col];
        col_rows_[e.col].push_back(id);
      }
      active_nnz_ += row.size();
      rows_.push_back(std::move(row));
    }
    alive_.assign(rows_.size(), 1);
    stamp_.assign(rows_.size(), 0);
    active_rows_ = rows_.size();
    for (u32 c = 0; c < ncols; ++c) {
      if (count_[c]) {
        queue_.insert({count_[c], c});
        queued_[c] = count_[c];
      }
    }
  }

  void run() {
    while (!queue_.empty()) {
      if (should_go_dense()) {
        out_.dense_switch_at_ = out_.pivot_cols_.size();
        dense_phase();
        return;
      }
      pivot_step();
    }
  }

 private:
  static constexpr u32 kAbsent = std::numeric_limits<u32>::max();

  bool should_go_dense() const {
    const std::size_t acols = queue_.size();
    const std::size_t cells = active_rows_ * acols;
    if (cells == 0 || cells > options_.dense_max_cells) return false;
    if (acols <= options_.dense_small_cols) return true;
    return static_cast<double>(active_nnz_) > options_.dense_density * static_cast<double>(cells);
  }

  static const ModEntry* find(const ModRow& row, u32 col) {
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const ModEntry& e, u32 c) { return e.col < c; });
    return it != row.end() && it->col == col ? &*it : nullptr;
  }

  void touch(u32 col) {
    if (!touched_flag_.empty() && touched_flag_[col]) return;
    if (touched_flag_.empty()) touched_flag_.assign(count_.size(), 0);
    touched_flag_[col] = 1;
    touched_.push_back(col);
  }

  void pivot_step() {
    const u32 c = queue_.begin()->second;
    ++epoch_;
    candidates_.clear();
    for (u32 r : col_rows_[c]) {
      if (!alive_[r] || stamp_[r] == epoch_) continue;
      stamp_[r] = epoch_;
      if (find(rows_[r], c)) candidates_.push_back(r);
    }
    u32 piv = candidates_.front();
    for (u32 r : candidates_)
      if (rows_[r].size() < rows_[piv].size() || (rows_[r].size() == rows_[piv].size() && r < piv))
        piv = r;

    ModRow prow = std::move(rows_[piv]);
    alive_[piv] = 0;
    --active_rows_;
    active_nnz_ -= prow.size();
    const u32 inv = inverse_mod(find(prow, c)->value, mod_.p);
    for (auto& e : prow) {
      e.value = mod_.mul(e.value, inv);
      --count_[e.col];
      touch(e.col);
    }

    for (u32 r : candidates_) {
      if (r == piv) continue;
      ModRow& row = rows_[r];
      const u32 f = mod_.neg(find(row, c)->value);
      scratch_.clear();
      scratch_.reserve(row.size() + prow.size());
      std::size_t i = 0, j = 0;
      while (i < row.size() || j < prow.size()) {
        if (j == prow.size() || (i < row.size() && row[i].col < prow[j].col)) {
          scratch_.push_back(row[i++]);
        } else if (i == row.size() || prow[j].col < row[i].col) {
          const u32 col = prow[j].col;
          scratch_.push_back({col, mod_.mul(f, prow[j].value)});
          ++count_[col];
          col_rows_[col].push_back(r);
          touch(col);
          ++j;
        } else {
          const u32 col = row[i].col;
          const u32 v = mod_.reduce(row[i].value + static_cast<u64>(f) * prow[j].value);
          if (v) {
            scratch_.push_back({col, v});
          } else {
            --count_[col];
            touch(col);
          }
          ++i;
          ++j;
        }
      }
      active_nnz_ += scratch_.size();
      active_nnz_ -= row.size();
      row.swap(scratch_);
      if (row.empty()) {
        alive_[r] = 0;
        --active_rows_;
        ModRow().swap(row);
      }
    }

    done_[c] = 1;
    std::vector<u32>().swap(col_rows_[c]);
    out_.pivot_cols_.push_back(c);
    if (out_.keep_) out_.pivot_rows_.push_back(std::move(prow));

    for (u32 col : touched_) {
      touched_flag_[col] = 0;
      if (queued_[col] != kAbsent) {
        if (queued_[col] == count_[col] && !done_[col]) continue;
        queue_.erase({queued_[col], col});
        queued_[col] = kAbsent;
      }
      if (done_[col] || count_[col] == 0) continue;
      queue_.insert({count_[col], col});
      queued_[col] = count_[col];
      auto& list = col_rows_[col];
      if (list.size() > 2 * static_cast<std::size_t>(count_[col]) + 16) {
        std::erase_if(list, [&](u32 r) { return !alive_[r] || !find(rows_[r], col); });
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
      }
    }
    touched_.clear();
  }

  void dense_phase() {
    std::vector<u32> cols;
    cols.reserve(queue_.size());
    for (const auto& [cnt, col] : queue_) cols.push_back(col);
    std::sort(cols.begin(), cols.end());
    std::vector<std::int64_t> pos(count_.size(), -1);
    for (std::size_t j = 0; j < cols.size(); ++j) pos[cols[j]] = static_cast<std::int64_t>(j);
    const std::size_t nc = cols.size();
    std::vector<std::vector<u32>> dense;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (!alive_[r]) continue;
      std::vector<u32> d(nc, 0);
      for (const auto& e : rows_[r]) d[pos[e.col]] = e.value;
      dense.push_back(std::move(d));
      ModRow().swap(rows_[r]);
    }
    std::size_t rank = 0;
    std::size_t nr = dense.size();
    for (std::size_t j = 0; j < nc && rank < nr; ++j) {
      std::size_t i = rank;
      while (i < nr && dense[i][j] == 0) ++i;
      if (i == nr) continue;
      std::swap(dense[i], dense[rank]);
      auto& prow = dense[rank];
      const u32 inv = inverse_mod(prow[j], mod_.p);
      for (std::size_t k = j; k < nc; ++k) prow[k] = mod_.mul(prow[k], inv);
      for (std::size_t i2 = rank + 1; i2 < nr; ++i2) {
        auto& row = dense[i2];
        if (row[j] == 0) continue;
        const u32 f = mod_.neg(row[j]);
        row[j] = 0;
        for (std::size_t k = j + 1; k < nc; ++k)
          if (prow[k]) row[k] = mod_.reduce(row[k] + static_cast<u64>(f) * prow[k]);
      }
      out_.pivot_cols_.push_back(cols[j]);
      if (out_.keep_) {
        ModRow sparse;
        for (std::size_t k = j; k < nc; ++k)
          if (prow[k]) sparse.push_back({cols[k], prow[k]});
        out_.pivot_rows_.push_back(std::move(sparse));
      }
      std::vector<u32>().swap(prow);
      ++rank;
      // drop rows that became zero so later columns scan fewer rows
      if ((j & 63) == 63) {
        auto first = dense.begin() + static_cast<std::ptrdiff_t>(rank);
        auto last = std::remove_if(first, dense.begin() + static_cast<std::ptrdiff_t>(nr),
                                   [&](const std::vector<u32>& row) {
                                     return std::all_of(row.begin() + static_cast<std::ptrdiff_t>(j + 1),
                                                        row.end(), [](u32 v) { return v == 0; });
                                   });
        nr = static_cast<std::size_t>(last - dense.begin());
      }
    }
    queue_.clear();
  }

  Modulus mod_;
  EliminationOptions options_;
  ModpEchelon& out_;
  std::vector<ModRow> rows_;
  std::vector<char> alive_;
  std::vector<std::vector<u32>> col_rows_;
  std::vector<u32> count_;
  std::vector<u32> queued_;
  std::vector<char> done_;
  std::set<std::pair<u32, u32>> queue_;
  std::size_t active_rows_ = 0;
  std::size_t active_nnz_ = 0;
  std::vector<u32> stamp_;
  u32 epoch_ = 0;
  std::vector<u32> candidates_;
  std::vector<u32> touched_;
  std::vector<char> touched_flag_;
  ModRow scratch_;
};

ModpEchelon::ModpEchelon(const SparseMatrix& matrix, std::uint32_t p, const EliminationOptions& options)
    : p_(p), ncols_(matrix.cols()), keep_(options.keep_pivots) {
  if (p < 2 || p >= (u32{1} << 31) || !is_prime(p)) throw Error("modulus must be a prime below 2^31");
  ModpEliminator(matrix, options, *this).run();
  std::vector<char> pivot(ncols_, 0);
  for (u32 c : pivot_cols_) pivot[c] = 1;
  free_pos_.assign(ncols_, -1);
  for (u32 c = 0; c < ncols_; ++c) {
    if (!pivot[c]) {
      free_pos_[c] = static_cast<std::int64_t>(free_cols_.size());
      free_cols_.push_back(c);
    }
  }
}

void ModpEchelon::reduce(std::vector<std::uint32_t>& v) const {
  if (!keep_) throw Error("echelon was built without pivot rows");
  Modulus mod(p_);
  for (std::size_t t = 0; t < pivot_cols_.size(); ++t) {
    const u32 f = v[pivot_cols_[t]];
    if (f == 0) continue;
    const u32 nf = mod.neg(f);
    for (const auto& e : pivot_rows_[t]) v[e.col] = mod.reduce(v[e.col] + static_cast<u64>(nf) * e.value);
  }
}

std::vector<std::uint32_t> ModpEchelon::project(std::span<const Entry> v) const {
  std::vector<u32> dense(ncols_, 0);
  for (const auto& e : v) {
    if (e.col >= ncols_) throw Error("vector index out of range for the relation matrix");
    dense[e.col] = reduce_mod(static_cast<std::int64_t>(dense[e.col]) + reduce_mod(e.value, p_), p_);
  }
  reduce(dense);
  std::vector<u32> coords(free_cols_.size());
  for (std::size_t j = 0; j < free_cols_.size(); ++j) coords[j] = dense[free_cols_[j]];
  return coords;
}

bool ModpEchelon::in_rowspan(std::span<const Entry> v) const {
  auto coords = project(v);
  return std::all_of(coords.begin(), coords.end(), [](u32 x) { return x == 0; });
}

std::size_t rank_mod_p(const SparseMatrix& matrix, std::uint32_t p, const EliminationOptions& options) {
  EliminationOptions o = options;
  o.keep_pivots = false;
  return ModpEchelon(matrix, p, o).rank();
}

RankReport rank_q(const SparseMatrix& matrix, const std::vector<std::uint32_t>& primes,
                  const EliminationOptions& options, std::size_t threads) {
  if (primes.empty()) throw Error("rank_q: empty prime list");
  RankReport report;
  const auto start = std::chrono::steady_clock::now();
  auto one = [&](u32 p) {
    const auto t0 = std::chrono::steady_clock::now();
    PrimeRank pr;
    pr.prime = p;
    pr.rank = rank_mod_p(matrix, p, options);
    pr.seconds = seconds_since(t0);
    return pr;
  };
  threads = std::max<std::size_t>(1, threads);
  for (std::size_t first = 0; first < primes.size(); first += threads) {
    std::vector<std::future<PrimeRank>> batch;
    const std::size_t last = std::min(primes.size(), first + threads);
    for (std::size_t i = first; i < last; ++i)
      batch.push_back(std::async(threads == 1 ? std::launch::deferred : std::launch::async, one, primes[i]));
    for (auto& f : batch) report.per_prime.push_back(f.get());
  }
  for (const auto& pr : report.per_prime) {
    if (pr.rank != report.per_prime.front().rank) report.agree = false;
    report.rank = std::max(report.rank, pr.rank);
  }
  report.seconds = seconds_since(start);
  return report;
}

bool in_rowspan_q(const SparseMatrix& relations, std::span<const Entry> v,
                  const std::vector<std::uint32_t>& primes) {
  if (primes.empty()) throw Error("in_rowspan_q: empty prime list");
  EliminationOptions o;
  o.keep_pivots = true;
  for (u32 p : primes)
    if (!ModpEchelon(relations, p, o).in_rowspan(v)) return false;
  return true;
}

std::vector<std::uint32_t> support_closure(const SparseMatrix& relations, std::span<const Entry> seed) {
  const std::size_t ncols = relations.cols();
  std::vector<std::vector<u32>> col_rows(ncols);
  for (std::size_t i = 0; i < relations.rows(); ++i)
    for (const auto& e : relations.row(i)) col_rows[e.col].push_back(static_cast<u32>(i));
  std::vector<char> col_seen(ncols, 0), row_seen(relations.rows(), 0);
  std::vector<u32> stack, out;
  for (const auto& e : seed) {
    if (e.col >= ncols) throw Error("vector index out of range for the relation matrix");
    if (e.value != 0 && !col_seen[e.col]) {
      col_seen[e.col] = 1;
      stack.push_back(e.col);
    }
  }
  while (!stack.empty()) {
    const u32 c = stack.back();
    stack.pop_back();
    out.push_back(c);
    for (u32 r : col_rows[c]) {
      if (row_seen[r]) continue;
      row_seen[r] = 1;
      for (const auto& e : relations.row(r)) {
        if (!col_seen[e.col]) {
          col_seen[e.col] = 1;
          stack.push_back(e.col);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Diagonalizes `a` by unimodular row and column operations; column operations
// are mirrored on `v`. Returns the rank.
std::size_t diagonalize(std::vector<std::vector<mpz_class>>& a, std::vector<std::vector<mpz_class>>& v) {
  const std::size_t nr = a.size();
  const std::size_t nc = nr ? a[0].size() : 0;
  std::size_t t = 0;
  mpz_class q, best;
  auto swap_cols = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (std::size_t i = 0; i < nr; ++i) std::swap(a[i][x], a[i][y]);
    for (auto& row : v) std::swap(row[x], row[y]);
  };
  for (; t < std::min(nr, nc); ++t) {
    // smallest nonzero entry of the remaining block
    std::size_t bi = nr, bj = nc;
    for (std::size_t i = t; i < nr; ++i)
      for (std::size_t j = t; j < nc; ++j)
        if (sgn(a[i][j]) != 0 && (bi == nr || mpz_cmpabs((a[i][j]).get_mpz_t(), (best).get_mpz_t()) < 0)) {
          best = a[i][j];
          bi = i;
          bj = j;
          if (mpz_cmpabs_ui(best.get_mpz_t(), 1) == 0) goto found;
        }
  found:
    if (bi == nr) break;
    std::swap(a[t], a[bi]);
    swap_cols(t, bj);
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < nr; ++i) {
        if (sgn(a[i][t]) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
        if (sgn(q) != 0)
          for (std::size_t k = t; k < nc; ++k)
            if (sgn(a[t][k]) != 0) a[i][k] -= q * a[t][k];
        if (sgn(a[i][t]) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < nc; ++j) {
        if (sgn(a[t][j]) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        if (sgn(q) != 0) {
          for (std::size_t i = t; i < nr; ++i)
            if (sgn(a[i][t]) != 0) a[i][j] -= q * a[i][t];
          for (auto& row : v)
            if (sgn(row[t]) != 0) row[j] -= q * row[t];
        }
        if (sgn(a[t][j]) != 0) clean = false;
      }
      if (clean) break;
      // move the smallest remainder in row/column t onto the diagonal
      std::size_t si = t, sj = t;
      for (std::size_t i = t + 1; i < nr; ++i)
        if (sgn(a[i][t]) != 0 && mpz_cmpabs((a[i][t]).get_mpz_t(), (a[si][sj]).get_mpz_t()) < 0) si = i, sj = t;
      for (std::size_t j = t + 1; j < nc; ++j)
        if (sgn(a[t][j]) != 0 && mpz_cmpabs((a[t][j]).get_mpz_t(), (a[si][sj]).get_mpz_t()) < 0) si = t, sj = j;
      if (si != t) std::swap(a[t], a[si]);
      if (sj != t) swap_cols(t, sj);
    }
    // rows below are now zero in column t; free their memory lazily
  }
  return t;
}

}  // namespace

IntegerQuotient::IntegerQuotient(const SparseMatrix& relations,
                                 std::optional<std::vector<std::uint32_t>> columns,
                                 std::size_t dense_budget)
    : ncols_(relations.cols()) {
  local_.assign(ncols_, -1);
  std::vector<u32> global;
  if (columns) {
    global = *columns;
  } else {
    global.resize(ncols_);
    std::iota(global.begin(), global.end(), 0u);
  }
  for (std::size_t j = 0; j < global.size(); ++j) local_[global[j]] = static_cast<std::int64_t>(j);
  const std::size_t m = global.size();

  std::vector<SparseRow> rows;
  for (std::size_t i = 0; i < relations.rows(); ++i) {
    auto r = relations.row(i);
    if (r.empty()) continue;
    bool inside = std::all_of(r.begin(), r.end(), [&](const Entry& e) { return local_[e.col] >= 0; });
    if (!inside) continue;
    SparseRow row;
    for (const auto& e : r) row.push_back({static_cast<u32>(local_[e.col]), e.value});
    rows.push_back(std::move(row));
  }

  // Unit pivots first: each eliminates one generator without changing the group.
  std::vector<std::vector<u32>> col_rows(m);
  std::vector<u32> count(m, 0);
  for (u32 r = 0; r < rows.size(); ++r)
    for (const auto& e : rows[r]) {
      col_rows[e.col].push_back(r);
      ++count[e.col];
    }
  std::vector<char> alive(rows.size(), 1), eliminated(m, 0), stuck(m, 0);
  std::set<std::pair<u32, u32>> queue;
  std::vector<u32> queued(m, std::numeric_limits<u32>::max());
  for (u32 c = 0; c < m; ++c)
    if (count[c]) {
      queue.insert({count[c], c});
      queued[c] = count[c];
    }
  auto value_at = [](const SparseRow& row, u32 col) -> const Entry* {
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const Entry& e, u32 c) { return e.col < c; });
    return it != row.end() && it->col == col ? &*it : nullptr;
  };
  std::vector<u32> touched, candidates;
  SparseRow scratch;
  while (!queue.empty()) {
    const u32 c = queue.begin()->second;
    queue.erase(queue.begin());
    queued[c] = std::numeric_limits<u32>::max();
    candidates.clear();
    std::sort(col_rows[c].begin(), col_rows[c].end());
    col_rows[c].erase(std::unique(col_rows[c].begin(), col_rows[c].end()), col_rows[c].end());
    std::int64_t piv = -1;
    for (u32 r : col_rows[c]) {
      if (!alive[r]) continue;
      const Entry* e = value_at(rows[r], c);
      if (!e) continue;
      candidates.push_back(r);
      if ((e->value == 1 || e->value == -1) &&
          (piv < 0 || rows[r].size() < rows[static_cast<std::size_t>(piv)].size()))
        piv = r;
    }
    if (piv < 0) {
      stuck[c] = 1;
      continue;
    }
    SparseRow prow = std::move(rows[static_cast<std::size_t>(piv)]);
    alive[static_cast<std::size_t>(piv)] = 0;
    const std::int64_t s = value_at(prow, c)->value;
    for (const auto& e : prow) {
      --count[e.col];
      touched.push_back(e.col);
    }
    for (u32 r : candidates) {
      if (r == static_cast<u32>(piv)) continue;
      SparseRow& row = rows[r];
      const std::int64_t f = value_at(row, c)->value * s;
      scratch.clear();
      std::size_t i = 0, j = 0;
      while (i < row.size() || j < prow.size()) {
        if (j == prow.size() || (i < row.size() && row[i].col < prow[j].col)) {
          scratch.push_back(row[i++]);
        } else if (i == row.size() || prow[j].col < row[i].col) {
          __int128 v = -static_cast<__int128>(f) * prow[j].value;
          if (v > (std::int64_t{1} << 62) || v < -(std::int64_t{1} << 62))
            throw Error("integer elimination: coefficient overflow");
          scratch.push_back({prow[j].col, static_cast<std::int64_t>(v)});
          ++count[prow[j].col];
          col_rows[prow[j].col].push_back(r);
          touched.push_back(prow[j].col);
          ++j;
        } else {
          __int128 v = row[i].value - static_cast<__int128>(f) * prow[j].value;
          if (v > (std::int64_t{1} << 62) || v < -(std::int64_t{1} << 62))
            throw Error("integer elimination: coefficient overflow");
          if (v != 0) {
            scratch.push_back({row[i].col, static_cast<std::int64_t>(v)});
          } else {
            --count[row[i].col];
            touched.push_back(row[i].col);
          }
          ++i;
          ++j;
        }
      }
      row.swap(scratch);
      if (row.empty()) alive[r] = 0;
    }
    eliminated[c] = 1;
    std::vector<u32>().swap(col_rows[c]);
    sub_cols_.push_back(c);
    sub_rows_.push_back(std::move(prow));
    for (u32 col : touched) {
      if (eliminated[col] || stuck[col]) continue;
      if (queued[col] != std::numeric_limits<u32>::max()) {
        if (queued[col] == count[col]) continue;
        queue.erase({queued[col], col});
        queued[col] = std::numeric_limits<u32>::max();
      }
      if (count[col] == 0) continue;
      queue.insert({count[col], col});
      queued[col] = count[col];
    }
    touched.clear();
  }

  // Dense core: surviving rows on the columns that still carry entries.
  core_pos_.assign(m, -1);
  std::size_t extra_free = 0;
  for (u32 c = 0; c < m; ++c) {
    if (eliminated[c]) continue;
    if (count[c] == 0) {
      core_pos_[c] = -2;
      ++extra_free;
      continue;
    }
    core_pos_[c] = static_cast<std::int64_t>(core_cols_.size());
    core_cols_.push_back(c);
  }
  std::vector<std::size_t> live;
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (alive[r] && !rows[r].empty()) live.push_back(r);
  core_rows_ = live.size();
  const std::size_t nc = core_cols_.size();
  if (core_rows_ * nc > dense_budget)
    throw Error("Smith form core of " + std::to_string(core_rows_) + "x" + std::to_string(nc) +
                " exceeds the dense budget; use ranks modulo several primes instead");
  std::vector<std::vector<mpz_class>> a(core_rows_, std::vector<mpz_class>(nc));
  for (std::size_t i = 0; i < live.size(); ++i)
    for (const auto& e : rows[live[i]]) a[i][static_cast<std::size_t>(core_pos_[e.col])] = e.value;
  transform_.assign(nc, std::vector<mpz_class>(nc));
  for (std::size_t j = 0; j < nc; ++j) transform_[j][j] = 1;
  const std::size_t rank = diagonalize(a, transform_);
  for (std::size_t t = 0; t < rank; ++t) diagonal_.push_back(abs(a[t][t]));
  free_rank_ = nc - rank + extra_free;
}

std::vector<mpz_class> IntegerQuotient::torsion() const {
  std::vector<mpz_class> d;
  for (const auto& x : diagonal_)
    if (x > 1) d.push_back(x);
  // turn the diagonal into a divisibility chain
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      mpz_class g = gcd(d[i], d[j]);
      mpz_class l = lcm(d[i], d[j]);
      d[i] = g;
      d[j] = l;
    }
  std::vector<mpz_class> out;
  for (auto& x : d)
    if (x > 1) out.push_back(x);
  return out;
}

std::vector<mpz_class> IntegerQuotient::coordinates(std::span<const Entry> v) const {
  std::vector<mpz_class> w(core_pos_.size());
  for (const auto& e : v) {
    if (e.col >= ncols_) throw Error("vector index out of range for the relation matrix");
    if (e.value == 0) continue;
    const std::int64_t l = local_[e.col];
    if (l < 0) throw Error("vector has support outside the quotient's columns");
    w[static_cast<std::size_t>(l)] += e.value;
  }
  for (std::size_t t = 0; t < sub_cols_.size(); ++t) {
    const u32 c = sub_cols_[t];
    if (sgn(w[c]) == 0) continue;
    mpz_class f = w[c];
    const SparseRow& row = sub_rows_[t];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, u32 col) { return e.col < col; });
    if (it->value < 0) f = -f;
    for (const auto& e : row) w[e.col] -= f * e.value;
  }
  // y = w_core * V, plus a trailing marker for columns without relations
  const std::size_t nc = core_cols_.size();
  std::vector<mpz_class> y(nc + 1);
  for (std::size_t i = 0; i < core_pos_.size(); ++i) {
    if (sgn(w[i]) == 0) continue;
    if (core_pos_[i] == -2) {
      y[nc] = 1;
      continue;
    }
    const auto& vrow = transform_[static_cast<std::size_t>(core_pos_[i])];
    for (std::size_t j = 0; j < nc; ++j)
      if (sgn(vrow[j]) != 0) y[j] += w[i] * vrow[j];
  }
  return y;
}

std::optional<mpz_class> IntegerQuotient::order(std::span<const Entry> v) const {
  auto y = coordinates(v);
  const std::size_t nc = core_cols_.size();
  if (sgn(y[nc]) != 0) return std::nullopt;
  for (std::size_t j = diagonal_.size(); j < nc; ++j)
    if (sgn(y[j]) != 0) return std::nullopt;
  mpz_class result = 1;
  for (std::size_t j = 0; j < diagonal_.size(); ++j) {
    if (sgn(y[j]) == 0) continue;
    mpz_class g = gcd(diagonal_[j], y[j]);
    result = lcm(result, mpz_class(diagonal_[j] / g));
  }
  return result;
}

bool IntegerQuotient::contains(std::span<const Entry> v) const {
  auto o = order(v);
  return o && *o == 1;
}

std::vector<mpz_class> snf(const SparseMatrix& relations, std::size_t dense_budget) {
  return IntegerQuotient(relations, std::nullopt, dense_budget).torsion();
}

std::optional<mpz_class> element_order(const SparseMatrix& relations, std::span<const Entry> v,
                                       std::size_t dense_budget) {
  auto cols = support_closure(relations, v);
  if (cols.empty()) return mpz_class(1);
  return IntegerQuotient(relations, std::move(cols), dense_budget).order(v);
}

bool in_rowspan_z(const SparseMatrix& relations, std::span<const Entry> v, std::size_t dense_budget) {
  auto o = element_order(relations, v, dense_budget);
  return o && *o == 1;
}

DenseModMatrix multiply_mod_p(const DenseModMatrix& a, const DenseModMatrix& b, std::uint32_t p) {
  const std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
  Modulus mod(p);
  DenseModMatrix c(n, std::vector<u32>(m, 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != k) throw Error("multiply_mod_p: dimension mismatch");
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] = mod.reduce(c[i][j] + static_cast<u64>(a[i][t]) * b[t][j]);
    }
  }
  return c;
}

std::vector<std::uint32_t> charpoly_mod_p(const DenseModMatrix& input, std::uint32_t p) {
  const std::size_t n = input.size();
  for (const auto& row : input)
    if (row.size() != n) throw Error("charpoly_mod_p: matrix is not square");
  Modulus mod(p);
  DenseModMatrix h = input;
  for (auto& row : h)
    for (auto& x : row) x %= p;
  // similarity transform to upper Hessenberg form
  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t i = m;
    while (i < n && h[i][m - 1] == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      std::swap(h[i], h[m]);
      for (auto& row : h) std::swap(row[i], row[m]);
    }
    const u32 inv = inverse_mod(h[m][m - 1], p);
    for (std::size_t r = m + 1; r < n; ++r) {
      if (h[r][m - 1] == 0) continue;
      const u32 u = mod.mul(h[r][m - 1], inv);
      const u32 nu = mod.neg(u);
      for (std::size_t k = 0; k < n; ++k) h[r][k] = mod.reduce(h[r][k] + static_cast<u64>(nu) * h[m][k]);
      for (std::size_t k = 0; k < n; ++k) h[k][m] = mod.reduce(h[k][m] + static_cast<u64>(u) * h[k][r]);
    }
  }
  // p_k(x) = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}
  std::vector<std::vector<u32>> polys(n + 1);
  polys[0] = {1};
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<u32> pk(k + 1, 0);
    const auto& prev = polys[k - 1];
    for (std::size_t d = 0; d < prev.size(); ++d) {
      pk[d + 1] = mod.reduce(pk[d + 1] + static_cast<u64>(prev[d]));
      pk[d] = mod.reduce(pk[d] + static_cast<u64>(mod.neg(h[k - 1][k - 1])) * prev[d]);
    }
    u32 prod = 1;
    for (std::size_t i = k - 1; i-- > 0;) {
      prod = mod.mul(prod, h[i + 1][i]);
      if (prod == 0) break;
      const u32 coef = mod.neg(mod.mul(h[i][k - 1], prod));
      if (coef == 0) continue;
      for (std::size_t d = 0; d < polys[i].size(); ++d)
        pk[d] = mod.reduce(pk[d] + static_cast<u64>(coef) * polys[i][d]);
    }
    polys[k] = std::move(pk);
  }
  return polys[n];
}

}  // namespace birsym
