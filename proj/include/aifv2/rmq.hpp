#pragma once

#include <cstdint>
#include <vector>

#include "aifv2/errors.hpp"
#include "aifv2/numeric.hpp"

namespace aifv2 {

// Minimum of a matrix region together with the cell that attains it.
// row/col are -1 exactly when every cell in the region is +infinity.
template <class V>
struct MinCell {
  V value;
  int row = -1;
  int col = -1;

  bool absent() const { return row < 0; }
};

// Non-owning view of a dense row-major matrix.
template <class V>
struct MatrixView {
  const V* data = nullptr;
  int rows = 0;
  int cols = 0;
  const V& at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

// Restricted range-minimum tables over a fixed matrix M:
//   rcq(a, b)  = min over M[a..rows-1][b]          (column suffix)
//   rrmq(a, b) = min over M[a..rows-1][0..b]       (bottom-left region)
// Build is O(rows * cols); each query is O(1).  Ties resolve to the cell
// with the smallest row, then the smallest column, so query results are a
// deterministic function of the matrix.  +infinity cells never win; if a
// whole region is infinite the result has value +infinity and no cell.
//
// A caller that only ever asks one kind of query can build just that table
// (WhichTables::rcq_only / rrmq_only) and skip writing the other, which
// halves the memory the build streams.
enum class WhichTables { both, rcq_only, rrmq_only };

template <class V>
class RestrictedRmqTables {
 public:
  RestrictedRmqTables() = default;

  explicit RestrictedRmqTables(const MatrixView<V>& m) { build(m); }

  // Rebuilds the tables for a new matrix, reusing storage.
  void build(const MatrixView<V>& m, WhichTables which = WhichTables::both) {
    if (m.rows <= 0 || m.cols <= 0)
      throw InputError("rmq: matrix must be non-empty");
    rows_ = m.rows;
    cols_ = m.cols;
    which_ = which;
    const std::size_t total = static_cast<std::size_t>(rows_) * cols_;
    const bool want_rcq = which != WhichTables::rrmq_only;
    const bool want_rrmq = which != WhichTables::rcq_only;
    rcq_.resize(want_rcq ? total : 0);
    rrmq_.resize(want_rrmq ? total : 0);

    // One pass over the matrix, bottom row first, everything streaming
    // row-major: after merging row a, colrun_[b] is exactly rcq(a, b), and
    // rrmq(a, .) is its running prefix minimum.  colrun_ stays
    // cache-resident, and the per-column / per-row merge orders match the
    // naive two-pass construction, so results are identical.
    colrun_.assign(cols_, absent_cell());
    for (int a = rows_ - 1; a >= 0; --a) {
      for (int b = 0; b < cols_; ++b)
        colrun_[b] = better(cell_at(m, a, b), colrun_[b]);
      if (want_rcq) {
        MinCell<V>* out = &rcq_[idx(a, 0)];
        for (int b = 0; b < cols_; ++b) out[b] = colrun_[b];
      }
      if (want_rrmq) {
        MinCell<V>* out = &rrmq_[idx(a, 0)];
        MinCell<V> run = absent_cell();
        for (int b = 0; b < cols_; ++b) {
          run = better(run, colrun_[b]);
          out[b] = run;
        }
      }
    }
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const MinCell<V>& rcq(int a, int b) const {
    if (which_ == WhichTables::rrmq_only)
      throw InputError("rmq: rcq table was not built");
    check_range(a, b);
    return rcq_[idx(a, b)];
  }
  const MinCell<V>& rrmq(int a, int b) const {
    if (which_ == WhichTables::rcq_only)
      throw InputError("rmq: rrmq table was not built");
    check_range(a, b);
    return rrmq_[idx(a, b)];
  }

 private:
  static MinCell<V> absent_cell() {
    return MinCell<V>{num_traits<V>::infinity(), -1, -1};
  }
  static MinCell<V> cell_at(const MatrixView<V>& m, int r, int c) {
    const V& v = m.at(r, c);
    if (num_traits<V>::is_infinite(v)) return absent_cell();
    return MinCell<V>{v, r, c};
  }
  // Deterministic merge: smaller value wins; on equal values the lexically
  // smaller (row, col) wins.  Two absent cells merge to absent.
  static const MinCell<V>& better(const MinCell<V>& x, const MinCell<V>& y) {
    if (x.absent()) return y;
    if (y.absent()) return x;
    if (x.value < y.value) return x;
    if (y.value < x.value) return y;
    if (x.row != y.row) return x.row < y.row ? x : y;
    return x.col <= y.col ? x : y;
  }

  std::size_t idx(int a, int b) const {
    return static_cast<std::size_t>(a) * cols_ + b;
  }
  void check_range(int a, int b) const {
    if (a < 0 || a >= rows_ || b < 0 || b >= cols_)
      throw InputError("rmq: query out of range");
  }

  int rows_ = 0;
  int cols_ = 0;
  WhichTables which_ = WhichTables::both;
  std::vector<MinCell<V>> rcq_;
  std::vector<MinCell<V>> rrmq_;
  std::vector<MinCell<V>> colrun_;
};

}  // namespace aifv2
