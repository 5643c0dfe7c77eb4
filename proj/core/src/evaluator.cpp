#include "mlvn/evaluator.hpp"

#include "mlvn/error.hpp"

namespace mlvn {

std::vector<double> Evaluation::win_rates() const {
  std::vector<double> out(raw_tanh.size());
  for (std::size_t i = 0; i < raw_tanh.size(); ++i) out[i] = win_rate(static_cast<int>(i));
  return out;
}

PredictedScore predicted_score(const Evaluation& eval, const KomiGrid& grid) {
  const int count = grid.count();
  if (static_cast<int>(eval.raw_tanh.size()) != count) {
    throw Error(ErrorKind::GridMismatch, "evaluation width does not match grid");
  }
  for (int i = 0; i + 1 < count; ++i) {
    if (eval.win_rate(i) >= 0.5f && eval.win_rate(i + 1) < 0.5f) {
      return {static_cast<int>(grid.komi_at(i) + 0.5), ScoreMarker::Crossing};
    }
  }
  if (eval.win_rate(0) < 0.5f) {
    return {static_cast<int>(grid.k_min() - 0.5), ScoreMarker::BelowGrid};
  }
  return {static_cast<int>(grid.k_max() + 0.5), ScoreMarker::AboveGrid};
}

double bv_territory(const Evaluation& eval) {
  double sum = 0.0;
  for (float o : eval.ownership) sum += 2.0 * o - 1.0;
  return sum;
}

std::vector<Evaluation> Evaluator::evaluate_batch(std::span<const Board* const> boards) {
  std::vector<Evaluation> out;
  out.reserve(boards.size());
  for (const Board* b : boards) out.push_back(evaluate(*b));
  return out;
}

ConstantEvaluator::ConstantEvaluator(KomiGrid grid, float raw_tanh, float ownership)
    : grid_(grid), raw_tanh_(raw_tanh), ownership_(ownership) {}

Evaluation ConstantEvaluator::evaluate(const Board& board) {
  return {std::vector<float>(grid_.count(), raw_tanh_), std::vector<float>(board.num_points(), ownership_)};
}

OracleEvaluator::OracleEvaluator(KomiGrid grid, int territory_diff, const Ownership& ownership)
    : grid_(grid) {
  eval_.raw_tanh.resize(grid_.count());
  for (int i = 0; i < grid_.count(); ++i) {
    eval_.raw_tanh[i] = grid_.komi_at(i) < territory_diff ? 1.0f : -1.0f;
  }
  eval_.ownership.resize(ownership.size());
  for (std::size_t i = 0; i < ownership.size(); ++i) {
    eval_.ownership[i] = ownership[i] == Owner::Black ? 1.0f : (ownership[i] == Owner::White ? 0.0f : 0.5f);
  }
}

Evaluation OracleEvaluator::evaluate(const Board& board) {
  if (static_cast<int>(eval_.ownership.size()) != board.num_points()) {
    throw Error(ErrorKind::DimMismatch, "board size does not match evaluator");
  }
  return eval_;
}

BatchingEvaluatorService::BatchingEvaluatorService(std::shared_ptr<Evaluator> backend, int max_batch)
    : backend_(std::move(backend)), max_batch_(max_batch) {
  if (!backend_ || max_batch_ < 1) {
    throw Error(ErrorKind::InvalidConfig, "batching service needs a backend and batch >= 1");
  }
  worker_ = std::thread([this] { run(); });
}

BatchingEvaluatorService::~BatchingEvaluatorService() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  cv_.notify_all();
  worker_.join();
}

std::future<Evaluation> BatchingEvaluatorService::submit(Board board) {
  std::promise<Evaluation> promise;
  auto fut = promise.get_future();
  {
    std::lock_guard lock(mutex_);
    queue_.push_back({std::move(board), std::move(promise)});
  }
  cv_.notify_one();
  return fut;
}

std::vector<int> BatchingEvaluatorService::batch_sizes() const {
  std::lock_guard lock(mutex_);
  return batch_sizes_;
}

void BatchingEvaluatorService::run() {
  for (;;) {
    std::vector<Request> batch;
    {
      std::unique_lock lock(mutex_);
      cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (queue_.empty() && stopping_) return;
      while (!queue_.empty() && static_cast<int>(batch.size()) < max_batch_) {
        batch.push_back(std::move(queue_.front()));
        queue_.pop_front();
      }
      batch_sizes_.push_back(static_cast<int>(batch.size()));
    }
    std::vector<const Board*> boards;
    boards.reserve(batch.size());
    for (auto& r : batch) boards.push_back(&r.board);
    try {
      auto evals = backend_->evaluate_batch(boards);
      for (std::size_t i = 0; i < batch.size(); ++i) batch[i].result.set_value(std::move(evals[i]));
    } catch (...) {
      for (auto& r : batch) r.result.set_exception(std::current_exception());
    }
  }
}

}  // namespace mlvn
