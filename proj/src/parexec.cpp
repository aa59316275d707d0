#include "cholqr/parexec.hpp"

#include "cholqr/errors.hpp"
#include "cholqr/kernels.hpp"
#include "engine.hpp"

namespace cholqr::parexec {

BlockedMatrix::BlockedMatrix(Matrix storage, int p) : storage_(std::move(storage)) {
  const Index m = storage_.rows();
  detail::require(p >= 1 && static_cast<Index>(p) <= m, "partition: need 1 <= p <= m");
  offsets_.resize(static_cast<std::size_t>(p) + 1);
  for (int b = 0; b <= p; ++b)
    offsets_[static_cast<std::size_t>(b)] =
        (static_cast<Index>(b) * m + static_cast<Index>(p) - 1) / static_cast<Index>(p);
  offsets_[0] = 0;
  offsets_[static_cast<std::size_t>(p)] = m;
}

BlockedMatrix partition_rows(const ConstMatrixRef& a, int p) {
  return BlockedMatrix(Matrix(a), p);
}

Matrix concatenate(const BlockedMatrix& b) { return b.full(); }

Matrix parallel_gram(const BlockedMatrix& b) {
  return cholqr::detail::gram_of_view(b.full(), b.block_count());
}

void parallel_trisolve_in_place(BlockedMatrix& b, const ConstMatrixRef& r) {
  for (Index j = 0; j < r.rows(); ++j)
    if (r(j, j) == 0.0) throw SingularTriangular(j);
  cholqr::detail::run_on_workers(b.block_count(), [&](int w) {
    kernels::right_trisolve_in_place(b.block(w), r);
  });
}

BlockedMatrix parallel_trisolve(const BlockedMatrix& b, const ConstMatrixRef& r) {
  BlockedMatrix out(Matrix(b.full()), b.block_count());
  parallel_trisolve_in_place(out, r);
  return out;
}

CommModel comm_model(Method method, int p, Index n, Index l) {
  const double pn2 = static_cast<double>(p) * static_cast<double>(n) * static_cast<double>(n);
  const double nl = static_cast<double>(n) * static_cast<double>(l);
  switch (method) {
    case Method::CholeskyQr:
      return {2, 2, pn2, pn2};
    case Method::CholeskyQr2:
      return {4, 4, 2.0 * pn2, 2.0 * pn2};
    case Method::ShiftedCholeskyQr3:
      return {6, 6, 3.0 * pn2, 3.0 * pn2};
    case Method::RluCholeskyQr:
    case Method::RqrCholeskyQr:
    case Method::RqrCholeskyQrGaussian:
      return {3, 4, 1.5 * pn2, 1.5 * pn2 + nl};
    case Method::HouseholderQr:
      return {0, 0, 0.0, 0.0};  // not modeled
  }
  throw std::invalid_argument("unknown method");
}

ParallelRun run_parallel(Method method, const ConstMatrixRef& a, int p, const MethodConfig& cfg) {
  cholqr::detail::RunOutput out = cholqr::detail::run_method(method, a, p, cfg);
  ParallelRun run;
  run.factorization = std::move(out.fact);
  run.timing.stage_ms = out.stage_ms;
  run.timing.total_ms = out.total_ms;
  const Index l = cfg.sketch.resolved_size(a.rows(), a.cols());
  const CommModel model = comm_model(method, p, a.cols(), l);
  run.timing.comm_rounds = model.rounds_max;
  run.timing.comm_volume = model.volume_max;
  return run;
}

}  // namespace cholqr::parexec
