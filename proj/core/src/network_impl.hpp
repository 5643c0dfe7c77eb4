#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "mlvn/valuefn.hpp"

namespace mlvn::detail {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

/// Activations of one forward pass, kept for the backward pass.
/// Spatial tensors are [channels][batch * points].
template <typename T>
struct Workspace {
  int batch = 0;
  Mat<T> input;
  std::vector<Mat<T>> col;
  std::vector<Mat<T>> pre;
  std::vector<Mat<T>> act;
  Mat<T> vh_pre, vh_act;
  Mat<T> fc_in;  // [2 * points][batch]
  Mat<T> h_pre, h_act;
  Mat<T> out_pre, tanh_out;  // [K][batch]
  Mat<T> bv_pre, bv_out;     // [1][batch * points]
};

template <typename T>
Eigen::Map<const Mat<T>> map_block(const NetworkParamsT<T>& p, std::size_t block, int rows, int cols) {
  return Eigen::Map<const Mat<T>>(p.data.data() + p.blocks[block].offset, rows, cols);
}

template <typename T>
Eigen::Map<const Vec<T>> vec_block(const NetworkParamsT<T>& p, std::size_t block) {
  return Eigen::Map<const Vec<T>>(p.data.data() + p.blocks[block].offset,
                                  static_cast<Eigen::Index>(p.blocks[block].size));
}

template <typename T>
void forward_pass(const NetworkParamsT<T>& p, int batch, Workspace<T>& ws);

template <typename T>
void backward_pass(const NetworkParamsT<T>& p, const Mat<T>& labels, const Mat<T>& targets,
                   Workspace<T>& ws, std::vector<T>& grad);

template <typename T>
LossBreakdown batch_loss(const Mat<T>& labels, const Mat<T>& targets, const Workspace<T>& ws);

/// `syms`, when given, holds one symmetry index map per record (or nullptr).
template <typename T>
void load_batch(const NetworkParamsT<T>& p, std::span<const TrainingRecord* const> batch,
                const std::vector<const std::vector<int>*>* syms, Workspace<T>& ws, Mat<T>& labels,
                Mat<T>& targets);

}  // namespace mlvn::detail
