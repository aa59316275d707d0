#pragma once

#include <cstdint>
#include <vector>

#include "cholqr/rng.hpp"
#include "cholqr/types.hpp"

namespace cholqr::sketch {

enum class Strategy { Uniform, Leverage, Gaussian };

const char* strategy_name(Strategy s);

/// How to form the l x n sketch A1 = P A.
struct SketchConfig {
  Strategy strategy = Strategy::Uniform;
  /// Explicit row count l; 0 means "use rate".
  Index size = 0;
  /// Sampling rate l/n, used when size == 0. Default 2 (l = 2n).
  double rate = 2.0;
  std::uint64_t seed = 0;
  /// Re-sketch policy for degenerate draws (applied by the preconditioned
  /// algorithms, not by the samplers themselves).
  int max_retries = 2;
  double retry_growth = 2.0;
  /// The concentration results assume i.i.d. draws, so sampling is done with
  /// replacement by default; this flag switches to distinct rows.
  bool without_replacement = false;

  /// Resolved l, clamped to [n, m].
  Index resolved_size(Index m, Index n) const;
};

/// A sampled or projected submatrix plus the metadata needed to reproduce it.
struct Sketch {
  Matrix a1;
  Strategy strategy = Strategy::Uniform;
  /// Row indices in draw order (extraction strategies only).
  std::vector<Index> indices;
  /// Per-row scale factors 1/||q_i|| (leverage strategy only).
  std::vector<double> weights;
  /// Projection seed (Gaussian strategy only).
  std::uint64_t projection_seed = 0;
};

/// Draw l rows i.i.d. uniformly (with replacement unless configured
/// otherwise); each draw has probability 1/m.
Sketch sample_rows_uniform(const ConstMatrixRef& a, const SketchConfig& cfg, rng::Stream& stream);

/// Draw l rows i.i.d. from the leverage-score distribution of an orthogonal
/// factor Q of A: row i is picked with probability ||q_i||^2 / n and stored
/// rescaled by 1/||q_i||. Q is an oracle input; this sampler exists to
/// validate the theory and is not used by the production algorithms.
Sketch sample_rows_leverage(const ConstMatrixRef& a, const ConstMatrixRef& q,
                            const SketchConfig& cfg, rng::Stream& stream);

/// a1 = Omega * A with Omega an l x m matrix of i.i.d. N(0,1) entries derived
/// from the stream's seed; the provenance stores the seed, never Omega.
Sketch sketch_gaussian(const ConstMatrixRef& a, const SketchConfig& cfg, rng::Stream& stream);

/// Dispatch on cfg.strategy. Leverage is rejected here (oracle-only).
Sketch make_sketch(const ConstMatrixRef& a, const SketchConfig& cfg, rng::Stream& stream);

/// Rebuild a1 from provenance for extraction sketches (bitwise identical).
Matrix reconstruct_extraction(const ConstMatrixRef& a, const Sketch& s);

}  // namespace cholqr::sketch
