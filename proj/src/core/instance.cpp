#include "boolvol/instance.hpp"

#include <string>

#include "boolvol/error.hpp"
#include "core/families.hpp"

namespace boolvol {

namespace {

void check_length(const detail::Family& family, std::size_t size) {
  if (size != family.arity()) {
    throw Error(ErrorCode::ArityMismatch, "configuration has " + std::to_string(size) +
                                              " bits, instance arity is " +
                                              std::to_string(family.arity()));
  }
}

void check_bits(std::span<const std::uint8_t> config) {
  for (auto b : config) {
    if (b > 1) throw Error(ErrorCode::InvalidArgument, "configuration entries must be 0 or 1");
  }
}

}  // namespace

EvaluationState::EvaluationState(std::shared_ptr<const detail::Family> family, BitConfig config)
    : family_(std::move(family)),
      config_(std::move(config)),
      cache_(std::make_unique<detail::Cache>()) {
  output_ = family_->init(config_, *cache_);
}

EvaluationState::EvaluationState(const EvaluationState& other)
    : family_(other.family_),
      config_(other.config_),
      cache_(std::make_unique<detail::Cache>(*other.cache_)),
      output_(other.output_),
      last_recomputations_(other.last_recomputations_) {}

EvaluationState& EvaluationState::operator=(const EvaluationState& other) {
  if (this != &other) {
    family_ = other.family_;
    config_ = other.config_;
    cache_ = std::make_unique<detail::Cache>(*other.cache_);
    output_ = other.output_;
    last_recomputations_ = other.last_recomputations_;
  }
  return *this;
}

EvaluationState::EvaluationState(EvaluationState&&) noexcept = default;
EvaluationState& EvaluationState::operator=(EvaluationState&&) noexcept = default;
EvaluationState::~EvaluationState() = default;

UpdateResult EvaluationState::apply_update(std::uint64_t bit, std::uint8_t value) {
  if (bit >= config_.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "bit index " + std::to_string(bit) +
                                                " out of range for arity " +
                                                std::to_string(config_.size()));
  }
  if (value > 1) throw Error(ErrorCode::InvalidArgument, "bit value must be 0 or 1");
  last_recomputations_ = 0;
  if (config_[bit] == value) return {output_, false};
  config_[bit] = value;
  bool before = output_;
  output_ = family_->update(config_, *cache_, bit, last_recomputations_);
  return {output_, output_ != before};
}

const std::vector<std::uint32_t>& EvaluationState::node_cache() const noexcept {
  return cache_->nodes;
}

std::uint64_t EvaluationState::counter() const noexcept { return cache_->a; }

FunctionInstance::FunctionInstance(std::shared_ptr<const detail::Family> family)
    : family_(std::move(family)) {}

const FunctionSpec& FunctionInstance::spec() const noexcept { return family_->spec(); }
std::uint64_t FunctionInstance::arity() const noexcept { return family_->arity(); }
std::uint32_t FunctionInstance::depth() const noexcept { return family_->depth(); }

bool FunctionInstance::evaluate(std::span<const std::uint8_t> config) const {
  check_length(*family_, config.size());
  check_bits(config);
  return family_->evaluate(config);
}

EvaluationState FunctionInstance::build_state(BitConfig config) const {
  check_length(*family_, config.size());
  check_bits(config);
  return EvaluationState(family_, std::move(config));
}

FunctionInstance make_instance(const FunctionSpec& spec) {
  return FunctionInstance(detail::make_family(spec));
}

FunctionInstance import_truth_table(const std::vector<std::uint8_t>& outputs) {
  return make_instance(family::TruthTable{outputs, {}});
}

}  // namespace boolvol
