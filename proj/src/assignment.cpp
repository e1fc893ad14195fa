#include "tpgm/assignment.hpp"

#include <string>

#include "tpgm/error.hpp"

namespace tpgm {

Assignment::Assignment(std::size_t n1, std::size_t n2) : target_(n1, kNone), source_(n2, kNone) {}

Assignment Assignment::from_pairs(std::size_t n1, std::size_t n2, const std::vector<NodePair>& pairs) {
  Assignment a(n1, n2);
  for (const auto& [i, j] : pairs) a.set(i, j);
  return a;
}

Assignment Assignment::identity(std::size_t n) {
  Assignment a(n, n);
  for (std::size_t i = 0; i < n; ++i) a.set(i, i);
  return a;
}

void Assignment::set(std::size_t i, std::size_t j) {
  if (i >= n1() || j >= n2())
    fail(ErrorKind::dimension, "assignment pair (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") outside " + std::to_string(n1()) + "x" + std::to_string(n2()));
  if (target_[i] != kNone || source_[j] != kNone)
    fail(ErrorKind::invalid_argument, "assignment pair (" + std::to_string(i) + "," +
                                          std::to_string(j) + ") breaks the partial permutation");
  target_[i] = j;
  source_[j] = i;
  ++count_;
}

std::optional<std::size_t> Assignment::target(std::size_t i) const {
  if (i >= n1() || target_[i] == kNone) return std::nullopt;
  return target_[i];
}

std::optional<std::size_t> Assignment::source(std::size_t j) const {
  if (j >= n2() || source_[j] == kNone) return std::nullopt;
  return source_[j];
}

bool Assignment::contains(std::size_t i, std::size_t j) const {
  return i < n1() && target_[i] == j;
}

std::vector<NodePair> Assignment::pairs() const {
  std::vector<NodePair> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < n1(); ++i)
    if (target_[i] != kNone) out.emplace_back(i, target_[i]);
  return out;
}

std::vector<double> Assignment::indicator() const {
  std::vector<double> v(n1() * n2(), 0.0);
  for (std::size_t i = 0; i < n1(); ++i)
    if (target_[i] != kNone) v[i * n2() + target_[i]] = 1.0;
  return v;
}

}  // namespace tpgm
