#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "boolvol/function_spec.hpp"

namespace boolvol::detail {

/// Per-state scratch owned by an EvaluationState. Families decide the
/// meaning: node values, live-child counts, a ones count, a running parity.
struct Cache {
  std::vector<std::uint32_t> nodes;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
};

class Family {
 public:
  Family(FunctionSpec spec, std::uint64_t arity, std::uint32_t depth)
      : spec_(std::move(spec)), arity_(arity), depth_(depth) {}
  virtual ~Family() = default;

  const FunctionSpec& spec() const noexcept { return spec_; }
  std::uint64_t arity() const noexcept { return arity_; }
  /// Tree depth for tree families, 0 otherwise.
  std::uint32_t depth() const noexcept { return depth_; }

  /// Full evaluation straight from the definition; shares no code with the
  /// incremental path.
  virtual bool evaluate(std::span<const std::uint8_t> x) const = 0;

  /// Fills `cache` for configuration x and returns the output.
  virtual bool init(std::span<const std::uint8_t> x, Cache& cache) const = 0;

  /// Called after x[bit] was flipped. Returns the new output and adds the
  /// number of node recomputations to `recomputed`.
  virtual bool update(std::span<const std::uint8_t> x, Cache& cache, std::uint64_t bit,
                      std::uint64_t& recomputed) const = 0;

 private:
  FunctionSpec spec_;
  std::uint64_t arity_;
  std::uint32_t depth_;
};

/// Validates the spec and builds its structural index.
std::shared_ptr<const Family> make_family(const FunctionSpec& spec);

}  // namespace boolvol::detail
