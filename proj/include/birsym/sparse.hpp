#pragma once

// Integer sparse matrices in compressed-row form, plus the SMS text format:
//   nrows ncols M
//   i j v        (1-based, one nonzero per line)
//   0 0 0

#include <cstdint>
#include <cstdio>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace birsym {

struct Entry {
  std::uint32_t col = 0;
  std::int64_t value = 0;
};

using SparseRow = std::vector<Entry>;  // sorted by column, no zeros

// Sorts by column, merges duplicate columns and drops zeros.
void normalize_row(SparseRow& row);

class SparseMatrix {
 public:
  SparseMatrix() = default;
  explicit SparseMatrix(std::size_t ncols) : ncols_(ncols) {}

  std::size_t rows() const { return row_ptr_.size() - 1; }
  std::size_t cols() const { return ncols_; }
  std::size_t nonzeros() const { return entries_.size(); }

  // Appends a row; the row is normalized first. Zero rows are kept.
  void add_row(SparseRow row);
  std::span<const Entry> row(std::size_t i) const {
    return {entries_.data() + row_ptr_[i], entries_.data() + row_ptr_[i + 1]};
  }
  void set_cols(std::size_t ncols) { ncols_ = ncols; }
  void reserve(std::size_t rows, std::size_t nnz);

  static SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols,
                                    const std::vector<std::tuple<std::size_t, std::size_t,
                                                                 std::int64_t>>& triplets);
  std::vector<std::vector<std::int64_t>> to_dense() const;
  SparseMatrix transpose() const;
  // Rows of `this` followed by rows of `other`; column counts must agree.
  SparseMatrix stacked(const SparseMatrix& other) const;

 private:
  std::size_t ncols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Entry> entries_;
};

void write_sms(std::ostream& out, const SparseMatrix& matrix);
SparseMatrix read_sms(std::istream& in);
void write_sms_file(const std::string& path, const SparseMatrix& matrix);
SparseMatrix read_sms_file(const std::string& path);

// Streams rows to an SMS file without holding them in memory; the header is
// patched in when the writer is closed.
class SmsStreamWriter {
 public:
  SmsStreamWriter(std::string path, std::size_t ncols);
  ~SmsStreamWriter();
  SmsStreamWriter(const SmsStreamWriter&) = delete;
  SmsStreamWriter& operator=(const SmsStreamWriter&) = delete;

  void add_row(std::span<const Entry> row);
  void close();
  std::size_t rows() const { return rows_; }

 private:
  std::string path_;
  std::string body_path_;
  std::size_t ncols_;
  std::size_t rows_ = 0;
  std::size_t nnz_ = 0;
  std::FILE* body_ = nullptr;
};

}  // namespace birsym
