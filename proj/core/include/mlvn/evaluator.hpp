#pragma once

#include <condition_variable>
#include <deque>
#include <future>
#include <memory>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "mlvn/board.hpp"
#include "mlvn/komi_grid.hpp"

namespace mlvn {

/// Network output for one position. All values are from Black's perspective.
struct Evaluation {
  std::vector<float> raw_tanh;   // per grid komi, in [-1, 1]
  std::vector<float> ownership;  // per point, P(Black owns it)

  /// (t + 1) / 2 for komi index k.
  float win_rate(int k) const noexcept { return (raw_tanh[k] + 1.0f) / 2.0f; }
  std::vector<double> win_rates() const;
};

enum class ScoreMarker { Crossing, BelowGrid, AboveGrid };

struct PredictedScore {
  /// Black's predicted lead without komi.
  int lead = 0;
  ScoreMarker marker = ScoreMarker::Crossing;
};

/// First k (from the low-komi end) with v_k >= 0.5 and v_{k+1} < 0.5 gives a
/// lead of k + 0.5. Without a crossing the result saturates at k_min - 0.5
/// (v_{k_min} < 0.5) or k_max + 0.5.
PredictedScore predicted_score(const Evaluation& eval, const KomiGrid& grid);

/// Expected territory difference sum_P (2 O_P - 1).
double bv_territory(const Evaluation& eval);

/// Leaf evaluator used by search and the measurement harness.
class Evaluator {
 public:
  virtual ~Evaluator() = default;

  virtual const KomiGrid& grid() const = 0;
  /// Whether positions of this board size can be evaluated.
  virtual bool supports_size(int size) const = 0;
  virtual Evaluation evaluate(const Board& board) = 0;
  virtual std::vector<Evaluation> evaluate_batch(std::span<const Board* const> boards);
};

/// Returns the same raw values for every position, on any board size.
class ConstantEvaluator final : public Evaluator {
 public:
  /// `raw_tanh` is broadcast over the grid, `ownership` over the board.
  ConstantEvaluator(KomiGrid grid, float raw_tanh, float ownership = 0.5f);

  const KomiGrid& grid() const override { return grid_; }
  bool supports_size(int) const override { return true; }
  Evaluation evaluate(const Board& board) override;

 private:
  KomiGrid grid_;
  float raw_tanh_;
  float ownership_;
};

/// Evaluates every position with the final labels of a known game: v_k = 1
/// when k < n, else 0, and the game's final ownership.
class OracleEvaluator final : public Evaluator {
 public:
  OracleEvaluator(KomiGrid grid, int territory_diff, const Ownership& ownership);

  const KomiGrid& grid() const override { return grid_; }
  bool supports_size(int size) const override {
    return static_cast<std::size_t>(size) * size == eval_.ownership.size();
  }
  Evaluation evaluate(const Board& board) override;

 private:
  KomiGrid grid_;
  Evaluation eval_;
};

/// Multi-producer front end: callers submit positions, a worker thread drains
/// the queue in batches of up to `max_batch` and fulfils the futures in order.
class BatchingEvaluatorService {
 public:
  BatchingEvaluatorService(std::shared_ptr<Evaluator> backend, int max_batch = 16);
  ~BatchingEvaluatorService();

  BatchingEvaluatorService(const BatchingEvaluatorService&) = delete;
  BatchingEvaluatorService& operator=(const BatchingEvaluatorService&) = delete;

  std::future<Evaluation> submit(Board board);

  int max_batch() const noexcept { return max_batch_; }
  /// Sizes of the batches processed so far.
  std::vector<int> batch_sizes() const;

 private:
  struct Request {
    Board board;
    std::promise<Evaluation> result;
  };

  void run();

  std::shared_ptr<Evaluator> backend_;
  int max_batch_;
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<Request> queue_;
  std::vector<int> batch_sizes_;
  bool stopping_ = false;
  std::thread worker_;
};

}  // namespace mlvn
