#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace tpgm {

using NodePair = std::pair<std::size_t, std::size_t>;

/// Partial permutation between the n1 pattern nodes and the n2 target nodes:
/// every pattern node maps to at most one target node and vice versa.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::size_t n1, std::size_t n2);

  static Assignment from_pairs(std::size_t n1, std::size_t n2, const std::vector<NodePair>& pairs);
  static Assignment identity(std::size_t n);

  std::size_t n1() const noexcept { return target_.size(); }
  std::size_t n2() const noexcept { return source_.size(); }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  /// Adds i -> j. Throws if either endpoint is already matched.
  void set(std::size_t i, std::size_t j);

  std::optional<std::size_t> target(std::size_t i) const;
  std::optional<std::size_t> source(std::size_t j) const;
  bool contains(std::size_t i, std::size_t j) const;

  /// Matched pairs in increasing pattern-node order.
  std::vector<NodePair> pairs() const;

  /// vec(X) as a 0/1 vector with pair index i*n2 + j.
  std::vector<double> indicator() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> target_;
  std::vector<std::size_t> source_;
  std::size_t count_ = 0;
};

}  // namespace tpgm
