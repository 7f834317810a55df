#include "varseq/jet_context.hpp"

#include <set>

#include "varseq/errors.hpp"
#include "varseq/multi_index.hpp"
#include "varseq/rational.hpp"

namespace varseq {

JetContext::JetContext(int n, int m, int r, std::vector<std::string> base_names,
                       std::vector<std::string> fiber_names)
    : n_(n), m_(m), r_(r), base_names_(std::move(base_names)),
      fiber_names_(std::move(fiber_names)) {
  if (n < 1 || m < 1 || r < 0) {
    throw DomainError("context requires n >= 1, m >= 1, r >= 0");
  }
  if (n > kMaxBaseDim) {
    throw DomainError("base dimension above " + std::to_string(kMaxBaseDim) +
                      " is not supported");
  }
  if (static_cast<int>(base_names_.size()) != n ||
      static_cast<int>(fiber_names_.size()) != m) {
    throw DomainError("context names do not match the dimensions");
  }
  std::set<std::string> seen;
  for (const auto* names : {&base_names_, &fiber_names_}) {
    for (const auto& name : *names) {
      if (name.empty() || !seen.insert(name).second) {
        throw DomainError("coordinate names must be non-empty and distinct: '" + name + "'");
      }
    }
  }
}

std::shared_ptr<const JetContext> JetContext::make(int n, int m, int r) {
  std::vector<std::string> base, fiber;
  for (int i = 1; i <= n; ++i) base.push_back(n == 1 ? "x" : "x" + std::to_string(i));
  for (int a = 1; a <= m; ++a) fiber.push_back(m == 1 ? "u" : "u" + std::to_string(a));
  return make(n, m, r, std::move(base), std::move(fiber));
}

std::shared_ptr<const JetContext> JetContext::make(int n, int m, int r,
                                                   std::vector<std::string> base_names,
                                                   std::vector<std::string> fiber_names) {
  return std::make_shared<const JetContext>(n, m, r, std::move(base_names),
                                            std::move(fiber_names));
}

std::size_t JetContext::dimension() const {
  return static_cast<std::size_t>(n_) +
         static_cast<std::size_t>(m_) * binomial(n_ + r_, r_).get_num().get_ui();
}

std::size_t JetContext::max_contact_degree() const {
  if (r_ == 0) return static_cast<std::size_t>(2 * n_ - 1);
  return static_cast<std::size_t>(m_) * binomial(n_ + r_ - 1, n_).get_num().get_ui() +
         static_cast<std::size_t>(2 * n_ - 1);
}

std::optional<int> JetContext::base_index(const std::string& name) const {
  for (int i = 0; i < n_; ++i) {
    if (base_names_[i] == name) return i + 1;
  }
  return std::nullopt;
}

std::optional<int> JetContext::fiber_index(const std::string& name) const {
  for (int a = 0; a < m_; ++a) {
    if (fiber_names_[a] == name) return a + 1;
  }
  return std::nullopt;
}

bool JetContext::operator==(const JetContext& other) const {
  return n_ == other.n_ && m_ == other.m_ && base_names_ == other.base_names_ &&
         fiber_names_ == other.fiber_names_;
}

}  // namespace varseq
