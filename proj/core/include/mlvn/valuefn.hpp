#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlvn/evaluator.hpp"
#include "mlvn/komi_grid.hpp"
#include "mlvn/selfplay.hpp"

namespace mlvn {

/// Shape of the two-headed evaluator.
///
/// Trunk: `trunk_layers` 3x3 convolutions with `filters` channels and ReLU.
/// Value head: 1x1 conv (2 filters, ReLU) -> FC `value_hidden` (ReLU) ->
/// FC grid.count() -> tanh. Ownership head: 1x1 conv (1 filter) from the last
/// trunk layer -> per-point sigmoid.
struct ArchConfig {
  int board_size = 9;
  int trunk_layers = 5;
  int filters = 32;
  int value_hidden = 64;
  KomiGrid grid;

  int points() const noexcept { return board_size * board_size; }
  /// Throws Error{InvalidConfig}.
  void validate() const;

  friend bool operator==(const ArchConfig&, const ArchConfig&) = default;
};

struct ParamBlock {
  std::string name;
  std::size_t offset = 0;
  std::size_t size = 0;
  int fan_in = 1;
};

std::vector<ParamBlock> param_layout(const ArchConfig& arch);

/// Flat parameter vector in layer order plus its layout.
template <typename T>
struct NetworkParamsT {
  ArchConfig arch;
  std::vector<ParamBlock> blocks;
  std::vector<T> data;

  std::span<T> block(std::size_t i) { return {data.data() + blocks[i].offset, blocks[i].size}; }
  std::span<const T> block(std::size_t i) const {
    return {data.data() + blocks[i].offset, blocks[i].size};
  }

  template <typename U>
  NetworkParamsT<U> cast() const {
    return {arch, blocks, std::vector<U>(data.begin(), data.end())};
  }
};

using NetworkParams = NetworkParamsT<float>;

/// Fan-in scaled Gaussian weights (He for ReLU layers), zero biases.
NetworkParams init_params(const ArchConfig& arch, std::uint64_t seed);
NetworkParams zero_params(const ArchConfig& arch);

/// Throws Error{DimMismatch} if the features do not match the architecture.
Evaluation forward(const NetworkParams& params, const FeatureTensor& features);
std::vector<Evaluation> forward_batch(const NetworkParams& params,
                                      std::span<const FeatureTensor> features);

struct LossBreakdown {
  double value_mse = 0.0;  // mean over komi of (label - t)^2 / 2
  double bv_mse = 0.0;     // mean over points of (target - O)^2
  double total = 0.0;      // value_mse + bv_mse
};

/// Batch-mean loss; when `grad` is non-null it receives d(total)/d(params).
/// Throws Error{DimMismatch} for an empty batch or mismatched records.
template <typename T>
LossBreakdown loss_and_grad(const NetworkParamsT<T>& params, std::span<const TrainingRecord> batch,
                            std::vector<T>* grad);

/// Forward-only loss over a record set, in chunks.
LossBreakdown evaluate_loss(const NetworkParams& params, std::span<const TrainingRecord> records);

/// Loss of the all-zero network: 0.5 + mean (target - 0.5)^2.
LossBreakdown zero_network_loss(std::span<const TrainingRecord> records);

struct TrainConfig {
  int epochs = 20;
  int batch_size = 32;
  double learning_rate = 0.05;
  double momentum = 0.9;
  double lr_decay = 0.5;
  int decay_every = 8;
  double weight_decay = 0.0;
  /// Random dihedral symmetry per sample.
  bool augment = true;
  std::uint64_t seed = 1;
};

struct EpochStats {
  int epoch = 0;
  double learning_rate = 0.0;
  LossBreakdown train;
  std::optional<LossBreakdown> heldout;
};

struct TrainResult {
  NetworkParams params;
  std::vector<EpochStats> history;
};

using EpochCallback = std::function<void(const EpochStats&)>;

/// SGD with momentum and step decay. Deterministic given config.seed.
TrainResult train(NetworkParams params, std::span<const TrainingRecord> train_set,
                  std::span<const TrainingRecord> heldout, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

void write_loss_csv(const std::vector<EpochStats>& history, std::ostream& out);

/// "MLVW" checkpoint: header with architecture and grid, then little-endian floats.
void save_checkpoint(const NetworkParams& params, const std::filesystem::path& path);
NetworkParams load_checkpoint(const std::filesystem::path& path);
void save_checkpoint(const NetworkParams& params, std::ostream& out);
NetworkParams load_checkpoint(std::istream& in);

/// Evaluator backed by a network; keeps a private workspace, so one per thread.
class NetworkEvaluator final : public Evaluator {
 public:
  explicit NetworkEvaluator(NetworkParams params);

  const KomiGrid& grid() const override { return params_.arch.grid; }
  bool supports_size(int size) const override { return size == params_.arch.board_size; }
  const NetworkParams& params() const noexcept { return params_; }
  Evaluation evaluate(const Board& board) override;
  std::vector<Evaluation> evaluate_batch(std::span<const Board* const> boards) override;

 private:
  NetworkParams params_;
};

/// Index map for the 8 board symmetries: out[v] is the image of vertex v.
std::vector<int> symmetry_map(int size, int symmetry);

}  // namespace mlvn
