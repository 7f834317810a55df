#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace varseq {

/// Chart data of a trivial fibered chart and a jet order: n base coordinates,
/// m fiber coordinates, jet order r.
class JetContext {
 public:
  /// Validates n >= 1, m >= 1, r >= 0, n <= kMaxBaseDim and distinct names.
  JetContext(int n, int m, int r, std::vector<std::string> base_names,
             std::vector<std::string> fiber_names);

  /// Default names: x1..xn (or x for n = 1), u1..um (or u for m = 1).
  static std::shared_ptr<const JetContext> make(int n, int m, int r);
  static std::shared_ptr<const JetContext> make(int n, int m, int r,
                                                std::vector<std::string> base_names,
                                                std::vector<std::string> fiber_names);

  int n() const { return n_; }
  int m() const { return m_; }
  int r() const { return r_; }
  const std::vector<std::string>& base_names() const { return base_names_; }
  const std::vector<std::string>& fiber_names() const { return fiber_names_; }

  /// dim J^r Y = n + m * C(n + r, r).
  std::size_t dimension() const;
  /// Maximal degree of nontrivial contact forms on J^r Y.
  std::size_t max_contact_degree() const;

  std::optional<int> base_index(const std::string& name) const;   // 1-based
  std::optional<int> fiber_index(const std::string& name) const;  // 1-based

  bool operator==(const JetContext& other) const;

 private:
  int n_;
  int m_;
  int r_;
  std::vector<std::string> base_names_;
  std::vector<std::string> fiber_names_;
};

using ContextPtr = std::shared_ptr<const JetContext>;

}  // namespace varseq
