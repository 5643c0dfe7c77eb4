#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "mlvn/error.hpp"
#include "mlvn/random.hpp"
#include "mlvn/valuefn.hpp"
#include "network_impl.hpp"

namespace mlvn {

TrainResult train(NetworkParams params, std::span<const TrainingRecord> train_set,
                  std::span<const TrainingRecord> heldout, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  if (train_set.empty()) throw Error(ErrorKind::EmptyDataset, "training set is empty");
  if (config.epochs < 0 || config.batch_size < 1 || config.learning_rate <= 0.0 ||
      config.momentum < 0.0 || config.momentum >= 1.0 || config.decay_every < 1) {
    throw Error(ErrorKind::InvalidConfig, "invalid training configuration");
  }
  const int size = params.arch.board_size;
  std::vector<std::vector<int>> symmetries;
  for (int s = 0; s < 8; ++s) symmetries.push_back(symmetry_map(size, s));

  Rng rng(mix_seed(config.seed));
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<float> velocity(params.data.size(), 0.0f);
  std::vector<float> grad;
  std::vector<const TrainingRecord*> batch;
  std::vector<const std::vector<int>*> syms;
  detail::Workspace<float> ws;
  detail::Mat<float> labels;
  detail::Mat<float> targets;

  TrainResult result;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = config.learning_rate * std::pow(config.lr_decay, epoch / config.decay_every);
    std::shuffle(order.begin(), order.end(), rng);
    double value_sum = 0.0;
    double bv_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t n = std::min<std::size_t>(config.batch_size, order.size() - start);
      batch.clear();
      syms.clear();
      for (std::size_t i = 0; i < n; ++i) {
        batch.push_back(&train_set[order[start + i]]);
        syms.push_back(config.augment ? &symmetries[uniform_below(rng, 8)] : nullptr);
      }
      detail::load_batch<float>(params, batch, &syms, ws, labels, targets);
      detail::forward_pass(params, static_cast<int>(n), ws);
      const LossBreakdown l = detail::batch_loss(labels, targets, ws);
      value_sum += l.value_mse * static_cast<double>(n);
      bv_sum += l.bv_mse * static_cast<double>(n);
      detail::backward_pass(params, labels, targets, ws, grad);
      const auto mom = static_cast<float>(config.momentum);
      const auto step = static_cast<float>(lr);
      const auto wd = static_cast<float>(config.weight_decay);
      for (std::size_t i = 0; i < params.data.size(); ++i) {
        velocity[i] = mom * velocity[i] - step * (grad[i] + wd * params.data[i]);
        params.data[i] += velocity[i];
      }
    }
    EpochStats stats;
    stats.epoch = epoch + 1;
    stats.learning_rate = lr;
    stats.train.value_mse = value_sum / static_cast<double>(order.size());
    stats.train.bv_mse = bv_sum / static_cast<double>(order.size());
    stats.train.total = stats.train.value_mse + stats.train.bv_mse;
    if (!heldout.empty()) stats.heldout = evaluate_loss(params, heldout);
    result.history.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  result.params = std::move(params);
  return result;
}

void write_loss_csv(const std::vector<EpochStats>& history, std::ostream& out) {
  out << "epoch,learning_rate,train_value_mse,train_bv_mse,train_total,"
         "heldout_value_mse,heldout_bv_mse,heldout_total\n";
  for (const auto& e : history) {
    out << e.epoch << ',' << e.learning_rate << ',' << e.train.value_mse << ',' << e.train.bv_mse
        << ',' << e.train.total;
    if (e.heldout) {
      out << ',' << e.heldout->value_mse << ',' << e.heldout->bv_mse << ',' << e.heldout->total;
    } else {
      out << ",,,";
    }
    out << '\n';
  }
}

}  // namespace mlvn
