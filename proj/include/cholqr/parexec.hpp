#pragma once

#include <array>
#include <vector>

#include "cholqr/cholqr.hpp"
#include "cholqr/types.hpp"

namespace cholqr::parexec {

/// Row-block view of a matrix distributed over p workers. One contiguous
/// storage backs all blocks, so concatenating the blocks in order is exactly
/// the original matrix.
class BlockedMatrix {
 public:
  BlockedMatrix() = default;
  BlockedMatrix(Matrix storage, int p);

  int block_count() const { return static_cast<int>(offsets_.size()) - 1; }
  Index rows() const { return storage_.rows(); }
  Index cols() const { return storage_.cols(); }

  Index offset(int b) const { return offsets_[static_cast<std::size_t>(b)]; }
  Index block_rows(int b) const { return offset(b + 1) - offset(b); }

  MatrixRef block(int b) {
    return storage_.middleRows(offset(b), block_rows(b));
  }
  ConstMatrixRef block(int b) const {
    return storage_.middleRows(offset(b), block_rows(b));
  }

  MatrixRef full() { return storage_; }
  ConstMatrixRef full() const { return storage_; }
  Matrix take_storage() { return std::move(storage_); }

 private:
  Matrix storage_;
  std::vector<Index> offsets_;  // size p+1; offset(b) = ceil(b*m/p)
};

/// Split A into p contiguous near-equal row blocks; block sizes differ by at
/// most one, larger blocks first.
BlockedMatrix partition_rows(const ConstMatrixRef& a, int p);

Matrix concatenate(const BlockedMatrix& b);

/// Global Grammian: per-chunk partials evaluated by the workers and combined
/// by the fixed pairwise tree of kernels::gram. The chunking is a function of
/// the row count alone, so the result is bitwise identical to kernels::gram
/// for every worker count.
Matrix parallel_gram(const BlockedMatrix& b);

/// Each worker solves its own block against the broadcast R; row-wise back
/// substitution makes the output bitwise independent of the partition.
void parallel_trisolve_in_place(BlockedMatrix& b, const ConstMatrixRef& r);
BlockedMatrix parallel_trisolve(const BlockedMatrix& b, const ConstMatrixRef& r);

/// Analytic collective-communication model (reduce/broadcast/gather counts
/// and data volumes) for a method run on p processes. Volumes are in values,
/// not bytes. The randomized methods span a min/max range: the minimum skips
/// the sketch gather, the maximum includes it (n*l extra values); the
/// simulated counters attached to runs report the maximum variant.
struct CommModel {
  int rounds_min = 0;
  int rounds_max = 0;
  double volume_min = 0;
  double volume_max = 0;
};

CommModel comm_model(Method method, int p, Index n, Index l);

struct TimingBreakdown {
  std::array<double, kStageCount> stage_ms{};
  double total_ms = 0.0;
  /// Simulated collective counters (computed, not measured).
  int comm_rounds = 0;
  double comm_volume = 0.0;
};

struct ParallelRun {
  QRFactorization factorization;
  TimingBreakdown timing;
};

/// Execute a family member with all Grammians and triangular solves routed
/// through the p-worker kernels. p == 1 runs the exact same code path as the
/// sequential API.
ParallelRun run_parallel(Method method, const ConstMatrixRef& a, int p,
                         const MethodConfig& cfg = {});

}  // namespace cholqr::parexec
