#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mlvn/engine.hpp"

namespace mlvn {

/// GTP v2 front end over an Engine, plus the mlvn-values, mlvn-ownership,
/// mlvn-dynkomi and mlvn-score-prediction extensions.
class GtpServer {
 public:
  explicit GtpServer(Engine& engine);

  /// Full response for one input line ("=..." or "?...", terminated by a
  /// blank line); empty for blank or comment-only input.
  std::string handle(std::string_view line);
  bool quit_requested() const noexcept { return quit_; }

  /// Reads commands until EOF or quit.
  void serve(std::istream& in, std::ostream& out);

  static const std::vector<std::string>& commands();

 private:
  std::string dispatch(const std::string& command, const std::vector<std::string>& args);

  Engine& engine_;
  bool quit_ = false;
};

}  // namespace mlvn
