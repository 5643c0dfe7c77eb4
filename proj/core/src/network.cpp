#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "mlvn/error.hpp"
#include "mlvn/valuefn.hpp"
#include "network_impl.hpp"

namespace mlvn {

void ArchConfig::validate() const {
  if (board_size < 5 || board_size > 19 || board_size % 2 == 0) {
    throw Error(ErrorKind::InvalidConfig, "board_size must be odd within 5..19");
  }
  if (trunk_layers < 1) throw Error(ErrorKind::InvalidConfig, "trunk_layers must be >= 1");
  if (filters < 1) throw Error(ErrorKind::InvalidConfig, "filters must be >= 1");
  if (value_hidden < 1) throw Error(ErrorKind::InvalidConfig, "value_hidden must be >= 1");
}

std::vector<ParamBlock> param_layout(const ArchConfig& arch) {
  arch.validate();
  std::vector<ParamBlock> blocks;
  std::size_t offset = 0;
  auto add = [&](std::string name, std::size_t size, int fan_in) {
    blocks.push_back({std::move(name), offset, size, fan_in});
    offset += size;
  };
  const int f = arch.filters;
  const int s = arch.points();
  for (int l = 0; l < arch.trunk_layers; ++l) {
    const int cin = l == 0 ? kFeaturePlanes : f;
    add("conv" + std::to_string(l) + ".w", static_cast<std::size_t>(f) * cin * 9, cin * 9);
    add("conv" + std::to_string(l) + ".b", f, cin * 9);
  }
  add("value_conv.w", 2 * static_cast<std::size_t>(f), f);
  add("value_conv.b", 2, f);
  add("value_fc1.w", static_cast<std::size_t>(arch.value_hidden) * 2 * s, 2 * s);
  add("value_fc1.b", arch.value_hidden, 2 * s);
  add("value_fc2.w", static_cast<std::size_t>(arch.grid.count()) * arch.value_hidden, arch.value_hidden);
  add("value_fc2.b", arch.grid.count(), arch.value_hidden);
  add("bv_conv.w", f, f);
  add("bv_conv.b", 1, f);
  return blocks;
}

NetworkParams zero_params(const ArchConfig& arch) {
  NetworkParams p;
  p.arch = arch;
  p.blocks = param_layout(arch);
  p.data.assign(p.blocks.back().offset + p.blocks.back().size, 0.0f);
  return p;
}

NetworkParams init_params(const ArchConfig& arch, std::uint64_t seed) {
  NetworkParams p = zero_params(arch);
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    const auto& b = p.blocks[i];
    if (b.name.ends_with(".b")) continue;
    // Layers followed by ReLU get He scaling; tanh/sigmoid outputs get 1/fan_in.
    const bool relu = !b.name.starts_with("value_fc2") && !b.name.starts_with("bv_conv");
    const double stddev = std::sqrt((relu ? 2.0 : 1.0) / b.fan_in);
    std::normal_distribution<double> dist(0.0, stddev);
    for (float& w : p.block(i)) w = static_cast<float>(dist(gen));
    if (b.name == "value_fc2.w") {
      // Every komi output starts from the same row, so outputs whose labels
      // never differ (e.g. komi 2m-0.5 and 2m+0.5 under parity) stay equal
      // instead of keeping their random initial gap.
      auto w = p.block(i);
      const std::size_t h = static_cast<std::size_t>(arch.value_hidden);
      for (std::size_t k = h; k < w.size(); ++k) w[k] = w[k % h];
    }
  }
  return p;
}

std::vector<int> symmetry_map(int size, int symmetry) {
  std::vector<int> out(static_cast<std::size_t>(size) * size);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      int rr = r;
      int cc = c;
      if (symmetry & 1) cc = size - 1 - cc;
      if (symmetry & 2) rr = size - 1 - rr;
      if (symmetry & 4) std::swap(rr, cc);
      out[r * size + c] = rr * size + cc;
    }
  }
  return out;
}

namespace detail {

template <typename T>
void load_input(const FeatureTensor& f, int b, int points, const std::vector<int>* sym, Mat<T>& input) {
  for (int plane = 0; plane < kFeaturePlanes; ++plane) {
    const std::uint8_t* src = f.planes.data() + static_cast<std::size_t>(plane) * points;
    T* dst = input.data() + static_cast<std::size_t>(plane) * input.cols() + static_cast<std::size_t>(b) * points;
    if (sym) {
      for (int v = 0; v < points; ++v) dst[(*sym)[v]] = static_cast<T>(src[v]);
    } else {
      for (int v = 0; v < points; ++v) dst[v] = static_cast<T>(src[v]);
    }
  }
}

template <typename T>
void im2col(const Mat<T>& src, int size, int batch, Mat<T>& col) {
  const int points = size * size;
  const int channels = static_cast<int>(src.rows());
  col.resize(static_cast<Eigen::Index>(channels) * 9, static_cast<Eigen::Index>(batch) * points);
  for (int c = 0; c < channels; ++c) {
    const T* in = src.data() + static_cast<std::size_t>(c) * src.cols();
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        T* out = col.data() + static_cast<std::size_t>(c * 9 + ky * 3 + kx) * col.cols();
        const int dy = ky - 1;
        const int dx = kx - 1;
        for (int b = 0; b < batch; ++b) {
          const T* inb = in + static_cast<std::size_t>(b) * points;
          T* outb = out + static_cast<std::size_t>(b) * points;
          for (int y = 0; y < size; ++y) {
            const int sy = y + dy;
            if (sy < 0 || sy >= size) {
              std::fill(outb + y * size, outb + (y + 1) * size, T(0));
              continue;
            }
            for (int x = 0; x < size; ++x) {
              const int sx = x + dx;
              outb[y * size + x] = (sx < 0 || sx >= size) ? T(0) : inb[sy * size + sx];
            }
          }
        }
      }
    }
  }
}

template <typename T>
void col2im(const Mat<T>& col, int size, int batch, int channels, Mat<T>& dst) {
  const int points = size * size;
  dst.setZero(channels, static_cast<Eigen::Index>(batch) * points);
  for (int c = 0; c < channels; ++c) {
    T* out = dst.data() + static_cast<std::size_t>(c) * dst.cols();
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        const T* in = col.data() + static_cast<std::size_t>(c * 9 + ky * 3 + kx) * col.cols();
        const int dy = ky - 1;
        const int dx = kx - 1;
        for (int b = 0; b < batch; ++b) {
          const T* inb = in + static_cast<std::size_t>(b) * points;
          T* outb = out + static_cast<std::size_t>(b) * points;
          for (int y = 0; y < size; ++y) {
            const int sy = y + dy;
            if (sy < 0 || sy >= size) continue;
            for (int x = 0; x < size; ++x) {
              const int sx = x + dx;
              if (sx >= 0 && sx < size) outb[sy * size + sx] += inb[y * size + x];
            }
          }
        }
      }
    }
  }
}

template <typename T>
void forward_pass(const NetworkParamsT<T>& p, int batch, Workspace<T>& ws) {
  const ArchConfig& a = p.arch;
  const int size = a.board_size;
  const int points = a.points();
  const int bs = batch * points;
  const int layers = a.trunk_layers;
  ws.batch = batch;
  ws.col.resize(layers);
  ws.pre.resize(layers);
  ws.act.resize(layers);
  std::size_t bi = 0;
  for (int l = 0; l < layers; ++l) {
    const Mat<T>& in = l == 0 ? ws.input : ws.act[l - 1];
    im2col(in, size, batch, ws.col[l]);
    auto w = map_block(p, bi, a.filters, static_cast<int>(ws.col[l].rows()));
    auto b = vec_block(p, bi + 1);
    ws.pre[l].noalias() = w * ws.col[l];
    ws.pre[l].colwise() += b;
    ws.act[l] = ws.pre[l].cwiseMax(T(0));
    bi += 2;
  }
  const Mat<T>& trunk = ws.act[layers - 1];

  auto vw = map_block(p, bi, 2, a.filters);
  ws.vh_pre.noalias() = vw * trunk;
  ws.vh_pre.colwise() += vec_block(p, bi + 1);
  ws.vh_act = ws.vh_pre.cwiseMax(T(0));
  bi += 2;

  ws.fc_in.resize(2 * points, batch);
  for (int c = 0; c < 2; ++c) {
    for (int b = 0; b < batch; ++b) {
      for (int s = 0; s < points; ++s) ws.fc_in(c * points + s, b) = ws.vh_act(c, b * points + s);
    }
  }
  auto w1 = map_block(p, bi, a.value_hidden, 2 * points);
  ws.h_pre.noalias() = w1 * ws.fc_in;
  ws.h_pre.colwise() += vec_block(p, bi + 1);
  ws.h_act = ws.h_pre.cwiseMax(T(0));
  bi += 2;

  auto w2 = map_block(p, bi, a.grid.count(), a.value_hidden);
  ws.out_pre.noalias() = w2 * ws.h_act;
  ws.out_pre.colwise() += vec_block(p, bi + 1);
  ws.tanh_out = ws.out_pre.array().tanh().matrix();
  bi += 2;

  auto bw = map_block(p, bi, 1, a.filters);
  ws.bv_pre.noalias() = bw * trunk;
  ws.bv_pre.array() += p.block(bi + 1)[0];
  ws.bv_out = (T(1) / (T(1) + (-ws.bv_pre.array()).exp())).matrix();
  (void)bs;
}

template <typename T>
void backward_pass(const NetworkParamsT<T>& p, const Mat<T>& labels, const Mat<T>& targets,
                   Workspace<T>& ws, std::vector<T>& grad) {
  const ArchConfig& a = p.arch;
  const int size = a.board_size;
  const int points = a.points();
  const int batch = ws.batch;
  const int layers = a.trunk_layers;
  const int k = a.grid.count();
  grad.assign(p.data.size(), T(0));
  auto gmap = [&](std::size_t block, int rows, int cols) {
    return Eigen::Map<Mat<T>>(grad.data() + p.blocks[block].offset, rows, cols);
  };
  auto gvec = [&](std::size_t block) {
    return Eigen::Map<Vec<T>>(grad.data() + p.blocks[block].offset,
                              static_cast<Eigen::Index>(p.blocks[block].size));
  };
  const std::size_t vconv = 2 * static_cast<std::size_t>(layers);
  const std::size_t fc1 = vconv + 2;
  const std::size_t fc2 = fc1 + 2;
  const std::size_t bvb = fc2 + 2;

  // Value head.
  const T scale_v = T(1) / (static_cast<T>(k) * batch);
  Mat<T> d_out = ((ws.tanh_out - labels) * scale_v).cwiseProduct(
      (T(1) - ws.tanh_out.array().square()).matrix());
  gmap(fc2, k, a.value_hidden).noalias() = d_out * ws.h_act.transpose();
  gvec(fc2 + 1) = d_out.rowwise().sum();
  Mat<T> d_h = map_block(p, fc2, k, a.value_hidden).transpose() * d_out;
  d_h.array() *= (ws.h_pre.array() > T(0)).template cast<T>();
  gmap(fc1, a.value_hidden, 2 * points).noalias() = d_h * ws.fc_in.transpose();
  gvec(fc1 + 1) = d_h.rowwise().sum();
  Mat<T> d_fc_in = map_block(p, fc1, a.value_hidden, 2 * points).transpose() * d_h;
  Mat<T> d_vh(2, static_cast<Eigen::Index>(batch) * points);
  for (int c = 0; c < 2; ++c) {
    for (int b = 0; b < batch; ++b) {
      for (int s = 0; s < points; ++s) d_vh(c, b * points + s) = d_fc_in(c * points + s, b);
    }
  }
  d_vh.array() *= (ws.vh_pre.array() > T(0)).template cast<T>();
  const Mat<T>& trunk = ws.act[layers - 1];
  gmap(vconv, 2, a.filters).noalias() = d_vh * trunk.transpose();
  gvec(vconv + 1) = d_vh.rowwise().sum();
  Mat<T> d_act = map_block(p, vconv, 2, a.filters).transpose() * d_vh;

  // Ownership head.
  const T scale_b = T(2) / (static_cast<T>(points) * batch);
  Mat<T> d_bv = ((ws.bv_out - targets) * scale_b).cwiseProduct(
      (ws.bv_out.array() * (T(1) - ws.bv_out.array())).matrix());
  gmap(bvb, 1, a.filters).noalias() = d_bv * trunk.transpose();
  grad[p.blocks[bvb + 1].offset] = d_bv.sum();
  d_act.noalias() += map_block(p, bvb, 1, a.filters).transpose() * d_bv;

  // Trunk.
  for (int l = layers - 1; l >= 0; --l) {
    d_act.array() *= (ws.pre[l].array() > T(0)).template cast<T>();
    const int cin9 = static_cast<int>(ws.col[l].rows());
    gmap(2 * l, a.filters, cin9).noalias() = d_act * ws.col[l].transpose();
    gvec(2 * l + 1) = d_act.rowwise().sum();
    if (l > 0) {
      Mat<T> d_col = map_block(p, 2 * l, a.filters, cin9).transpose() * d_act;
      col2im(d_col, size, batch, cin9 / 9, d_act);
    }
  }
}

template <typename T>
LossBreakdown batch_loss(const Mat<T>& labels, const Mat<T>& targets, const Workspace<T>& ws) {
  LossBreakdown l;
  l.value_mse = static_cast<double>((labels - ws.tanh_out).array().square().sum()) / 2.0 /
                static_cast<double>(labels.size());
  l.bv_mse = static_cast<double>((targets - ws.bv_out).array().square().sum()) /
             static_cast<double>(targets.size());
  l.total = l.value_mse + l.bv_mse;
  return l;
}

template <typename T>
void load_batch(const NetworkParamsT<T>& p, std::span<const TrainingRecord* const> batch,
                const std::vector<const std::vector<int>*>* syms, Workspace<T>& ws, Mat<T>& labels,
                Mat<T>& targets) {
  const ArchConfig& a = p.arch;
  const int points = a.points();
  const int n = static_cast<int>(batch.size());
  if (n == 0) throw Error(ErrorKind::DimMismatch, "empty batch");
  ws.input.setZero(kFeaturePlanes, static_cast<Eigen::Index>(n) * points);
  labels.resize(a.grid.count(), n);
  targets.resize(1, static_cast<Eigen::Index>(n) * points);
  for (int b = 0; b < n; ++b) {
    const TrainingRecord& r = *batch[b];
    if (r.features.size != a.board_size ||
        r.features.planes.size() != static_cast<std::size_t>(kFeaturePlanes) * points ||
        static_cast<int>(r.labels.size()) != a.grid.count() ||
        static_cast<int>(r.ownership.size()) != points) {
      throw Error(ErrorKind::DimMismatch, "record does not match network architecture");
    }
    const std::vector<int>* sym = syms ? (*syms)[b] : nullptr;
    load_input(r.features, b, points, sym, ws.input);
    for (int i = 0; i < a.grid.count(); ++i) labels(i, b) = static_cast<T>(r.labels[i]);
    for (int v = 0; v < points; ++v) {
      const int dst = sym ? (*sym)[v] : v;
      targets(0, b * points + dst) = static_cast<T>(r.ownership_target(v));
    }
  }
}

template void forward_pass<float>(const NetworkParamsT<float>&, int, Workspace<float>&);
template void backward_pass<float>(const NetworkParamsT<float>&, const Mat<float>&, const Mat<float>&,
                                   Workspace<float>&, std::vector<float>&);
template LossBreakdown batch_loss<float>(const Mat<float>&, const Mat<float>&, const Workspace<float>&);
template void load_batch<float>(const NetworkParamsT<float>&, std::span<const TrainingRecord* const>,
                                const std::vector<const std::vector<int>*>*, Workspace<float>&,
                                Mat<float>&, Mat<float>&);

}  // namespace detail

namespace {

void check_features(const ArchConfig& a, const FeatureTensor& f) {
  if (f.size != a.board_size ||
      f.planes.size() != static_cast<std::size_t>(kFeaturePlanes) * a.points()) {
    throw Error(ErrorKind::DimMismatch, "feature tensor does not match network architecture");
  }
}

std::vector<Evaluation> run_forward(const NetworkParams& params, std::span<const FeatureTensor> features,
                                    detail::Workspace<float>& ws) {
  const ArchConfig& a = params.arch;
  const int points = a.points();
  const int n = static_cast<int>(features.size());
  std::vector<Evaluation> out;
  if (n == 0) return out;
  ws.input.setZero(kFeaturePlanes, static_cast<Eigen::Index>(n) * points);
  for (int b = 0; b < n; ++b) {
    check_features(a, features[b]);
    detail::load_input(features[b], b, points, nullptr, ws.input);
  }
  detail::forward_pass(params, n, ws);
  out.resize(n);
  for (int b = 0; b < n; ++b) {
    out[b].raw_tanh.resize(a.grid.count());
    for (int i = 0; i < a.grid.count(); ++i) out[b].raw_tanh[i] = ws.tanh_out(i, b);
    out[b].ownership.resize(points);
    for (int v = 0; v < points; ++v) out[b].ownership[v] = ws.bv_out(0, b * points + v);
  }
  return out;
}

}  // namespace

Evaluation forward(const NetworkParams& params, const FeatureTensor& features) {
  thread_local detail::Workspace<float> ws;
  auto out = run_forward(params, std::span<const FeatureTensor>(&features, 1), ws);
  return std::move(out.front());
}

std::vector<Evaluation> forward_batch(const NetworkParams& params, std::span<const FeatureTensor> features) {
  thread_local detail::Workspace<float> ws;
  return run_forward(params, features, ws);
}

template <typename T>
LossBreakdown loss_and_grad(const NetworkParamsT<T>& params, std::span<const TrainingRecord> batch,
                            std::vector<T>* grad) {
  detail::Workspace<T> ws;
  detail::Mat<T> labels;
  detail::Mat<T> targets;
  std::vector<const TrainingRecord*> ptrs;
  for (const auto& r : batch) ptrs.push_back(&r);
  detail::load_batch<T>(params, ptrs, nullptr, ws, labels, targets);
  detail::forward_pass(params, static_cast<int>(batch.size()), ws);
  const LossBreakdown loss = detail::batch_loss(labels, targets, ws);
  if (grad) detail::backward_pass(params, labels, targets, ws, *grad);
  return loss;
}

template LossBreakdown loss_and_grad<float>(const NetworkParamsT<float>&, std::span<const TrainingRecord>,
                                            std::vector<float>*);
template LossBreakdown loss_and_grad<double>(const NetworkParamsT<double>&, std::span<const TrainingRecord>,
                                             std::vector<double>*);

LossBreakdown evaluate_loss(const NetworkParams& params, std::span<const TrainingRecord> records) {
  if (records.empty()) throw Error(ErrorKind::EmptyDataset, "no records to evaluate");
  constexpr std::size_t kChunk = 256;
  detail::Workspace<float> ws;
  detail::Mat<float> labels;
  detail::Mat<float> targets;
  double value_sum = 0.0;
  double bv_sum = 0.0;
  for (std::size_t start = 0; start < records.size(); start += kChunk) {
    const auto chunk = records.subspan(start, std::min(kChunk, records.size() - start));
    std::vector<const TrainingRecord*> ptrs;
    for (const auto& r : chunk) ptrs.push_back(&r);
    detail::load_batch<float>(params, ptrs, nullptr, ws, labels, targets);
    detail::forward_pass(params, static_cast<int>(chunk.size()), ws);
    const LossBreakdown l = detail::batch_loss(labels, targets, ws);
    value_sum += l.value_mse * static_cast<double>(chunk.size());
    bv_sum += l.bv_mse * static_cast<double>(chunk.size());
  }
  LossBreakdown out;
  out.value_mse = value_sum / static_cast<double>(records.size());
  out.bv_mse = bv_sum / static_cast<double>(records.size());
  out.total = out.value_mse + out.bv_mse;
  return out;
}

LossBreakdown zero_network_loss(std::span<const TrainingRecord> records) {
  if (records.empty()) throw Error(ErrorKind::EmptyDataset, "no records to evaluate");
  double bv = 0.0;
  std::size_t count = 0;
  for (const auto& r : records) {
    for (std::size_t v = 0; v < r.ownership.size(); ++v) {
      const double d = r.ownership_target(static_cast<int>(v)) - 0.5;
      bv += d * d;
      ++count;
    }
  }
  LossBreakdown out;
  out.value_mse = 0.5;
  out.bv_mse = bv / static_cast<double>(count);
  out.total = out.value_mse + out.bv_mse;
  return out;
}

NetworkEvaluator::NetworkEvaluator(NetworkParams params) : params_(std::move(params)) {}

Evaluation NetworkEvaluator::evaluate(const Board& board) {
  if (board.size() != params_.arch.board_size) {
    throw Error(ErrorKind::DimMismatch, "board size does not match network");
  }
  return forward(params_, encode_features(board));
}

std::vector<Evaluation> NetworkEvaluator::evaluate_batch(std::span<const Board* const> boards) {
  std::vector<FeatureTensor> feats;
  feats.reserve(boards.size());
  for (const Board* b : boards) {
    if (b->size() != params_.arch.board_size) {
      throw Error(ErrorKind::DimMismatch, "board size does not match network");
    }
    feats.push_back(encode_features(*b));
  }
  return forward_batch(params_, feats);
}

// Checkpoint I/O.

namespace {

constexpr char kCheckpointMagic[4] = {'M', 'L', 'V', 'W'};
constexpr std::uint16_t kCheckpointVersion = 1;

template <typename U>
void put_le(std::ostream& out, U v) {
  unsigned char buf[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), sizeof(U));
}

template <typename U>
U get_le(std::istream& in) {
  unsigned char buf[sizeof(U)];
  in.read(reinterpret_cast<char*>(buf), sizeof(U));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(U))) {
    throw Error(ErrorKind::FormatError, "truncated checkpoint");
  }
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(static_cast<U>(buf[i]) << (8 * i));
  return v;
}

std::int16_t tenths(double k) { return static_cast<std::int16_t>(std::lround(k * 10.0)); }

}  // namespace

void save_checkpoint(const NetworkParams& params, std::ostream& out) {
  const ArchConfig& a = params.arch;
  out.write(kCheckpointMagic, 4);
  put_le<std::uint16_t>(out, kCheckpointVersion);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(a.board_size));
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(kFeaturePlanes));
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(a.trunk_layers));
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(a.filters));
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(a.value_hidden));
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(tenths(a.grid.k_min())));
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(tenths(a.grid.k_max())));
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(tenths(a.grid.center())));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.data.size()));
  for (float w : params.data) {
    std::uint32_t bits;
    std::memcpy(&bits, &w, sizeof bits);
    put_le<std::uint32_t>(out, bits);
  }
  if (!out) throw Error(ErrorKind::IoError, "checkpoint write failed");
}

NetworkParams load_checkpoint(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw Error(ErrorKind::FormatError, "bad checkpoint magic");
  }
  if (get_le<std::uint16_t>(in) != kCheckpointVersion) {
    throw Error(ErrorKind::FormatError, "unsupported checkpoint version");
  }
  ArchConfig a;
  a.board_size = get_le<std::uint8_t>(in);
  if (get_le<std::uint8_t>(in) != kFeaturePlanes) {
    throw Error(ErrorKind::FormatError, "checkpoint has unexpected input planes");
  }
  a.trunk_layers = get_le<std::uint16_t>(in);
  a.filters = get_le<std::uint16_t>(in);
  a.value_hidden = get_le<std::uint16_t>(in);
  const double k_min = static_cast<std::int16_t>(get_le<std::uint16_t>(in)) / 10.0;
  const double k_max = static_cast<std::int16_t>(get_le<std::uint16_t>(in)) / 10.0;
  const double center = static_cast<std::int16_t>(get_le<std::uint16_t>(in)) / 10.0;
  NetworkParams p;
  try {
    a.grid = KomiGrid(k_min, k_max, center);
    p = zero_params(a);
  } catch (const Error& e) {
    throw Error(ErrorKind::FormatError, std::string("bad checkpoint header: ") + e.what());
  }
  const std::uint32_t count = get_le<std::uint32_t>(in);
  if (count != p.data.size()) throw Error(ErrorKind::FormatError, "checkpoint parameter count mismatch");
  for (float& w : p.data) {
    const std::uint32_t bits = get_le<std::uint32_t>(in);
    std::memcpy(&w, &bits, sizeof bits);
  }
  return p;
}

void save_checkpoint(const NetworkParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  save_checkpoint(params, out);
}

NetworkParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return load_checkpoint(in);
}

}  // namespace mlvn
