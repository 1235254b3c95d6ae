#include "birsym/sparse.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

#include "birsym/algebra.hpp"

namespace birsym {

void normalize_row(SparseRow& row) {
  std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < row.size();) {
    std::uint32_t c = row[i].col;
    std::int64_t v = 0;
    for (; i < row.size() && row[i].col == c; ++i) v += row[i].value;
    if (v != 0) row[out++] = {c, v};
  }
  row.resize(out);
}

void SparseMatrix::add_row(SparseRow row) {
  normalize_row(row);
  for (const auto& e : row)
    if (e.col >= ncols_) throw Error("sparse row has column index out of range");
  entries_.insert(entries_.end(), row.begin(), row.end());
  row_ptr_.push_back(entries_.size());
}

void SparseMatrix::reserve(std::size_t rows, std::size_t nnz) {
  row_ptr_.reserve(rows + 1);
  entries_.reserve(nnz);
}

SparseMatrix SparseMatrix::from_triplets(
    std::size_t nrows, std::size_t ncols,
    const std::vector<std::tuple<std::size_t, std::size_t, std::int64_t>>& triplets) {
  std::vector<SparseRow> rows(nrows);
  for (const auto& [i, j, v] : triplets) {
    if (i >= nrows || j >= ncols) throw Error("triplet index out of range");
    rows[i].push_back({static_cast<std::uint32_t>(j), v});
  }
  SparseMatrix m(ncols);
  for (auto& r : rows) m.add_row(std::move(r));
  return m;
}

std::vector<std::vector<std::int64_t>> SparseMatrix::to_dense() const {
  std::vector<std::vector<std::int64_t>> d(rows(), std::vector<std::int64_t>(ncols_, 0));
  for (std::size_t i = 0; i < rows(); ++i)
    for (const auto& e : row(i)) d[i][e.col] = e.value;
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<SparseRow> t(ncols_);
  for (std::size_t i = 0; i < rows(); ++i)
    for (const auto& e : row(i)) t[e.col].push_back({static_cast<std::uint32_t>(i), e.value});
  SparseMatrix m(rows());
  for (auto& r : t) m.add_row(std::move(r));
  return m;
}

SparseMatrix SparseMatrix::stacked(const SparseMatrix& other) const {
  if (other.cols() != ncols_) throw Error("stacked: column counts differ");
  SparseMatrix m(ncols_);
  m.reserve(rows() + other.rows(), nonzeros() + other.nonzeros());
  for (std::size_t i = 0; i < rows(); ++i) m.add_row(SparseRow(row(i).begin(), row(i).end()));
  for (std::size_t i = 0; i < other.rows(); ++i)
    m.add_row(SparseRow(other.row(i).begin(), other.row(i).end()));
  return m;
}

void write_sms(std::ostream& out, const SparseMatrix& matrix) {
  out << matrix.rows() << ' ' << matrix.cols() << " M\n";
  for (std::size_t i = 0; i < matrix.rows(); ++i)
    for (const auto& e : matrix.row(i)) out << (i + 1) << ' ' << (e.col + 1) << ' ' << e.value << '\n';
  out << "0 0 0\n";
}

SparseMatrix read_sms(std::istream& in) {
  std::size_t nrows = 0, ncols = 0;
  std::string tag;
  if (!(in >> nrows >> ncols >> tag)) throw Error("SMS: malformed header");
  std::vector<std::tuple<std::size_t, std::size_t, std::int64_t>> triplets;
  while (true) {
    std::size_t i = 0, j = 0;
    std::int64_t v = 0;
    if (!(in >> i >> j >> v)) throw Error("SMS: missing 0 0 0 terminator");
    if (i == 0 && j == 0) break;
    if (i < 1 || j < 1) throw Error("SMS: indices are 1-based");
    triplets.emplace_back(i - 1, j - 1, v);
  }
  return SparseMatrix::from_triplets(nrows, ncols, triplets);
}

void write_sms_file(const std::string& path, const SparseMatrix& matrix) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_sms(out, matrix);
}

SparseMatrix read_sms_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_sms(in);
}

SmsStreamWriter::SmsStreamWriter(std::string path, std::size_t ncols)
    : path_(std::move(path)), body_path_(path_ + ".body"), ncols_(ncols) {
  body_ = std::fopen(body_path_.c_str(), "w");
  if (!body_) throw Error("cannot open " + body_path_ + " for writing");
}

SmsStreamWriter::~SmsStreamWriter() {
  try {
    close();
  } catch (...) {
  }
}

void SmsStreamWriter::add_row(std::span<const Entry> row) {
  ++rows_;
  for (const auto& e : row) {
    std::fprintf(body_, "%zu %u %lld\n", rows_, e.col + 1, static_cast<long long>(e.value));
    ++nnz_;
  }
}

void SmsStreamWriter::close() {
  if (!body_) return;
  std::fclose(body_);
  body_ = nullptr;
  std::FILE* out = std::fopen(path_.c_str(), "w");
  std::FILE* body = std::fopen(body_path_.c_str(), "r");
  if (!out || !body) {
    if (out) std::fclose(out);
    if (body) std::fclose(body);
    throw Error("cannot assemble SMS file " + path_);
  }
  std::fprintf(out, "%zu %zu M\n", rows_, ncols_);
  char buf[1 << 16];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, body)) > 0) std::fwrite(buf, 1, n, out);
  std::fprintf(out, "0 0 0\n");
  std::fclose(body);
  std::fclose(out);
  std::remove(body_path_.c_str());
}

}  // namespace birsym
