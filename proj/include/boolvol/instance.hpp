#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "boolvol/function_spec.hpp"

namespace boolvol {

namespace detail {
class Family;
struct Cache;
}  // namespace detail

/// One entry per bit, each 0 or 1.
using BitConfig = std::vector<std::uint8_t>;

struct UpdateResult {
  bool output = false;
  bool changed = false;
};

/// Mutable evaluation cache for one configuration. Single owner; not safe
/// for concurrent use.
class EvaluationState {
 public:
  EvaluationState(std::shared_ptr<const detail::Family> family, BitConfig config);
  EvaluationState(const EvaluationState& other);
  EvaluationState& operator=(const EvaluationState& other);
  EvaluationState(EvaluationState&&) noexcept;
  EvaluationState& operator=(EvaluationState&&) noexcept;
  ~EvaluationState();

  bool output() const noexcept { return output_; }
  const BitConfig& config() const noexcept { return config_; }

  /// Sets bit `bit` to `value`. Re-evaluation is skipped when the value is
  /// unchanged. Throws IndexOutOfRange / InvalidArgument.
  UpdateResult apply_update(std::uint64_t bit, std::uint8_t value);

  /// Node recomputations performed by the most recent apply_update.
  std::uint64_t last_recomputations() const noexcept { return last_recomputations_; }

  /// Family-specific cached node values (tree vertices, live-child counts).
  const std::vector<std::uint32_t>& node_cache() const noexcept;
  /// Family-specific scalar counter (ones count, running parity, ...).
  std::uint64_t counter() const noexcept;

 private:
  std::shared_ptr<const detail::Family> family_;
  BitConfig config_;
  std::unique_ptr<detail::Cache> cache_;
  bool output_ = false;
  std::uint64_t last_recomputations_ = 0;
};

/// Immutable, shareable instance of a function family.
class FunctionInstance {
 public:
  explicit FunctionInstance(std::shared_ptr<const detail::Family> family);

  const FunctionSpec& spec() const noexcept;
  std::uint64_t arity() const noexcept;
  /// Tree depth for tree families, 0 otherwise.
  std::uint32_t depth() const noexcept;

  /// Full evaluation. Throws ArityMismatch.
  bool evaluate(std::span<const std::uint8_t> config) const;

  /// Throws ArityMismatch.
  EvaluationState build_state(BitConfig config) const;

 private:
  std::shared_ptr<const detail::Family> family_;
};

/// Throws InvalidSpec / ArityTooLarge / NotPowerOfTwo.
FunctionInstance make_instance(const FunctionSpec& spec);

/// Truth table in file order (bit 1 most significant).
FunctionInstance import_truth_table(const std::vector<std::uint8_t>& outputs);

}  // namespace boolvol
