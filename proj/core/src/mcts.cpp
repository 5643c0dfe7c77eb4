#include "mlvn/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <ostream>

#include "mlvn/error.hpp"
#include "mlvn/playout.hpp"

namespace mlvn {

ScoreHistogram::ScoreHistogram(int points) : range_(points), counts_(2 * static_cast<std::size_t>(points) + 1, 0) {}

void ScoreHistogram::add(int n, std::uint64_t count) {
  if (n < -range_ || n > range_) throw Error(ErrorKind::OutOfRange, "score outside histogram range");
  counts_[n + range_] += count;
  total_ += count;
  sum_ += static_cast<std::int64_t>(n) * static_cast<std::int64_t>(count);
}

std::uint64_t ScoreHistogram::count(int n) const noexcept {
  if (n < -range_ || n > range_) return 0;
  return counts_[n + range_];
}

double ScoreHistogram::mean() const {
  if (total_ == 0) throw Error(ErrorKind::EmptyHistogram, "histogram is empty");
  return static_cast<double>(sum_) / static_cast<double>(total_);
}

std::uint64_t ScoreHistogram::count_above(double komi) const noexcept {
  // Smallest integer strictly greater than komi.
  const double lo = std::floor(komi) + 1.0;
  if (lo > range_) return 0;
  std::uint64_t sum = 0;
  for (int n = std::max(static_cast<int>(lo), -range_); n <= range_; ++n) sum += counts_[n + range_];
  return sum;
}

double rollout_winrate(const ScoreHistogram& histogram, double komi) {
  if (histogram.empty()) throw Error(ErrorKind::EmptyHistogram, "histogram is empty");
  return static_cast<double>(histogram.count_above(komi)) / static_cast<double>(histogram.total());
}

void SearchConfig::validate() const {
  if (playouts < 1) throw Error(ErrorKind::InvalidConfig, "playouts must be >= 1");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorKind::InvalidConfig, "lambda must be in [0, 1]");
  if (c_puct < 0.0) throw Error(ErrorKind::InvalidConfig, "c_puct must be >= 0");
  if (batch_size < 1) throw Error(ErrorKind::InvalidConfig, "batch_size must be >= 1");
  if (rollout_move_cap < 0) throw Error(ErrorKind::InvalidConfig, "rollout_move_cap must be >= 0");
  if (expansion_threshold < 0) throw Error(ErrorKind::InvalidConfig, "expansion_threshold must be >= 0");
}

double mixed_winrate(const RootStats& stats, double komi) {
  if (komi < stats.grid.k_min() - 1.0 || komi > stats.grid.k_max() + 1.0) {
    throw Error(ErrorKind::OutOfRange, "komi outside the grid span");
  }
  const double r = rollout_winrate(stats.histogram, komi);
  const double v = stats.grid.interpolate(stats.value_rate, komi);
  return (1.0 - stats.lambda) * r + stats.lambda * v;
}

namespace {

struct NodeStats {
  ScoreHistogram histogram;
  std::vector<double> value_sums;
};

struct Node {
  Move move;
  float prior = 0.0f;
  int visits = 0;
  int virtual_loss = 0;
  // Running sums at the search komi, Black's perspective.
  double rollout_wins = 0.0;
  double value_sum = 0.0;
  bool expanded = false;
  bool terminal = false;
  std::unique_ptr<NodeStats> stats;
  std::vector<Node> children;

  double black_rate(double lambda) const {
    return (1.0 - lambda) * rollout_wins / visits + lambda * value_sum / visits;
  }
};

struct Leaf {
  std::vector<Node*> path;
  Board board;
};

class Search {
 public:
  Search(const SearchConfig& config, Evaluator& evaluator, double komi, const SearchHooks& hooks, int points)
      : config_(config), evaluator_(evaluator), grid_(evaluator.grid()), komi_(komi), hooks_(hooks),
        points_(points), rng_(mix_seed(config.seed)) {}

  SearchResult run(const Board& board) {
    expand(root_, board);
    int started = 0;
    std::vector<Leaf> batch;
    while (started < config_.playouts) {
      batch.clear();
      const int want = std::min(config_.batch_size, config_.playouts - started);
      for (int i = 0; i < want; ++i) {
        Leaf leaf = select(board);
        ++started;
        if (leaf.path.back()->terminal && config_.exact_terminals) {
          finish_terminal(leaf);
        } else {
          batch.push_back(std::move(leaf));
        }
      }
      evaluate(batch);
    }
    return report(board);
  }

 private:
  void expand(Node& node, const Board& board) {
    node.expanded = true;
    std::vector<Move> moves;
    for (int v = 0; v < board.num_points(); ++v) {
      const Move m = Move::at(v);
      if (board.is_legal(m) && !board.is_true_eye(v, board.to_move())) moves.push_back(m);
    }
    moves.push_back(Move::pass());
    std::shuffle(moves.begin(), moves.end() - 1, rng_);
    std::vector<float> priors;
    if (hooks_.priors) {
      priors = hooks_.priors(board, moves);
      if (priors.size() != moves.size()) {
        throw Error(ErrorKind::DimMismatch, "prior hook returned the wrong number of priors");
      }
      double sum = 0.0;
      for (float p : priors) sum += std::max(0.0f, p);
      for (float& p : priors) p = sum > 0.0 ? static_cast<float>(std::max(0.0f, p) / sum) : 1.0f / moves.size();
    } else {
      priors.assign(moves.size(), 1.0f / static_cast<float>(moves.size()));
    }
    node.children.resize(moves.size());
    for (std::size_t i = 0; i < moves.size(); ++i) {
      node.children[i].move = moves[i];
      node.children[i].prior = priors[i];
    }
  }

  // Value of `child` for the player choosing at its parent.
  double child_q(const Node& parent, const Node& child, bool black_to_move) const {
    if (child.visits == 0) {
      if (child.virtual_loss > 0) return 0.0;
      if (parent.visits == 0) return 0.5;
      const double rate = parent.black_rate(config_.lambda);
      return black_to_move ? rate : 1.0 - rate;
    }
    const double rate = child.black_rate(config_.lambda);
    const double q = black_to_move ? rate : 1.0 - rate;
    return q * child.visits / (child.visits + child.virtual_loss);
  }

  Leaf select(const Board& root_board) {
    Leaf leaf{{&root_}, root_board};
    Node* node = &root_;
    node->virtual_loss += 1;
    for (;;) {
      if (!node->expanded) {
        if (node->terminal || node->visits < config_.expansion_threshold) break;
        expand(*node, leaf.board);
      }
      const bool black = leaf.board.to_move() == Color::Black;
      const double sqrt_parent = std::sqrt(static_cast<double>(node->visits + node->virtual_loss));
      Node* best = nullptr;
      double best_score = -std::numeric_limits<double>::infinity();
      for (Node& child : node->children) {
        const double u = config_.c_puct * child.prior * sqrt_parent / (1.0 + child.visits + child.virtual_loss);
        const double score = child_q(*node, child, black) + u;
        if (score > best_score) {
          best_score = score;
          best = &child;
        }
      }
      leaf.board.play(best->move);
      best->virtual_loss += 1;
      if (leaf.board.game_over()) best->terminal = true;
      leaf.path.push_back(best);
      node = best;
      if (best->terminal) break;
    }
    return leaf;
  }

  void evaluate(std::vector<Leaf>& batch) {
    if (batch.empty()) return;
    std::vector<const Board*> boards;
    boards.reserve(batch.size());
    for (const Leaf& l : batch) boards.push_back(&l.board);
    const auto evals = evaluator_.evaluate_batch(boards);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const int n = hooks_.rollout ? hooks_.rollout(batch[i].board, rng_)
                                   : rollout(batch[i].board, rng_, move_cap(batch[i].board));
      backup(batch[i].path, n, evals[i].win_rates());
    }
  }

  void finish_terminal(Leaf& leaf) {
    const int n = leaf.board.final_ownership().second.territory_diff;
    std::vector<double> values(grid_.count());
    for (int k = 0; k < grid_.count(); ++k) values[k] = grid_.komi_at(k) < n ? 1.0 : 0.0;
    backup(leaf.path, n, values);
  }

  int move_cap(const Board& b) const {
    return config_.rollout_move_cap > 0 ? config_.rollout_move_cap : 3 * b.num_points();
  }

  void backup(const std::vector<Node*>& path, int n, const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != grid_.count()) {
      throw Error(ErrorKind::GridMismatch, "evaluation width does not match grid");
    }
    const double win = n > komi_ ? 1.0 : 0.0;
    const double v = grid_.interpolate(values, komi_);
    for (Node* node : path) {
      node->virtual_loss -= 1;
      node->visits += 1;
      node->rollout_wins += win;
      node->value_sum += v;
      if (!node->stats) {
        node->stats = std::make_unique<NodeStats>(NodeStats{ScoreHistogram(points_), std::vector<double>(grid_.count(), 0.0)});
      }
      node->stats->histogram.add(n);
      for (std::size_t k = 0; k < values.size(); ++k) node->stats->value_sums[k] += values[k];
    }
  }

  SearchResult report(const Board& board) {
    SearchResult result;
    RootStats& s = result.stats;
    s.grid = grid_;
    s.lambda = config_.lambda;
    s.visits = root_.visits;
    s.search_komi = komi_;
    s.histogram = root_.stats ? root_.stats->histogram : ScoreHistogram(points_);
    const int count = grid_.count();
    s.rollout_rate.resize(count);
    s.value_rate.resize(count);
    s.mixed_rate.resize(count);
    for (int k = 0; k < count; ++k) {
      if (root_.visits == 0) break;
      s.rollout_rate[k] = rollout_winrate(s.histogram, grid_.komi_at(k));
      s.value_rate[k] = root_.stats->value_sums[k] / root_.visits;
      s.mixed_rate[k] = (1.0 - config_.lambda) * s.rollout_rate[k] + config_.lambda * s.value_rate[k];
    }
    const bool black = board.to_move() == Color::Black;
    auto better = [&](const Node& a, const Node& b) {
      if (a.visits != b.visits) return a.visits > b.visits;
      if (a.visits == 0) return false;
      const double qa = a.black_rate(config_.lambda);
      const double qb = b.black_rate(config_.lambda);
      return black ? qa > qb : qa < qb;
    };
    const Node* best = nullptr;
    for (const Node& c : root_.children) {
      ChildStats cs;
      cs.move = c.move;
      cs.prior = c.prior;
      cs.visits = c.visits;
      cs.black_winrate = c.visits > 0 ? c.black_rate(config_.lambda) : std::numeric_limits<double>::quiet_NaN();
      s.children.push_back(cs);
      if (!best || better(c, *best)) best = &c;
    }
    result.best = best ? best->move : Move::pass();
    s.root_eval = evaluator_.evaluate(board);
    return result;
  }

  const SearchConfig& config_;
  Evaluator& evaluator_;
  KomiGrid grid_;
  double komi_;
  const SearchHooks& hooks_;
  int points_;
  Rng rng_;
  Node root_;
};

}  // namespace

SearchResult search(const Board& board, const SearchConfig& config, Evaluator& evaluator, double dynamic_komi,
                    const SearchHooks& hooks) {
  config.validate();
  if (board.game_over()) throw Error(ErrorKind::GameOver, "search on a finished game");
  return Search(config, evaluator, dynamic_komi, hooks, board.num_points()).run(board);
}

void write_search_trace(const Board& board, const RootStats& stats, std::ostream& out) {
  for (const ChildStats& c : stats.children) {
    nlohmann::json line{{"move", board.vertex_name(c.move)},
                        {"N", c.visits},
                        {"prior", c.prior},
                        {"komi", stats.search_komi}};
    if (c.visits > 0) {
      line["w"] = c.black_winrate;
    } else {
      line["w"] = nullptr;
    }
    out << line.dump() << '\n';
  }
}

}  // namespace mlvn
