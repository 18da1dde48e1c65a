#include "core/families.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "boolvol/error.hpp"

namespace boolvol::detail {

namespace {

constexpr std::uint64_t kMaxArity = (std::uint64_t{1} << 31) - 1;
constexpr int kMaxTableInputs = 24;

std::uint64_t pow3(std::int64_t e) {
  std::uint64_t r = 1;
  for (std::int64_t i = 0; i < e; ++i) {
    r *= 3;
    if (r > kMaxArity) return kMaxArity + 1;
  }
  return r;
}

void require_arity(std::uint64_t arity, const std::string& what) {
  if (arity > kMaxArity) {
    throw Error(ErrorCode::ArityTooLarge, what + " has arity above 2^31-1");
  }
}

void require_positive(std::int64_t v, const std::string& what) {
  if (v < 1) throw Error(ErrorCode::InvalidSpec, what + " must be at least 1");
}

void require_depth(std::int64_t d, const std::string& what) {
  if (d < 0) throw Error(ErrorCode::InvalidSpec, what + ": negative depth");
}

bool parity_of(std::span<const std::uint8_t> x) {
  std::uint8_t acc = 0;
  for (auto b : x) acc ^= b;
  return acc != 0;
}

class DictatorFamily final : public Family {
 public:
  using Family::Family;
  bool evaluate(std::span<const std::uint8_t> x) const override { return x[0] != 0; }
  bool init(std::span<const std::uint8_t> x, Cache&) const override { return x[0] != 0; }
  bool update(std::span<const std::uint8_t> x, Cache&, std::uint64_t,
              std::uint64_t& recomputed) const override {
    ++recomputed;
    return x[0] != 0;
  }
};

class ParityFamily final : public Family {
 public:
  using Family::Family;
  bool evaluate(std::span<const std::uint8_t> x) const override { return parity_of(x); }
  bool init(std::span<const std::uint8_t> x, Cache& c) const override {
    c.a = parity_of(x);
    return c.a != 0;
  }
  bool update(std::span<const std::uint8_t>, Cache& c, std::uint64_t,
              std::uint64_t& recomputed) const override {
    ++recomputed;
    c.a ^= 1;
    return c.a != 0;
  }
};

// c.a holds the parity of bits 2..m.
class DictatorAndParityFamily final : public Family {
 public:
  using Family::Family;
  bool evaluate(std::span<const std::uint8_t> x) const override {
    return x[0] != 0 && !parity_of(x.subspan(1));
  }
  bool init(std::span<const std::uint8_t> x, Cache& c) const override {
    c.a = parity_of(x.subspan(1));
    return x[0] != 0 && c.a == 0;
  }
  bool update(std::span<const std::uint8_t> x, Cache& c, std::uint64_t bit,
              std::uint64_t& recomputed) const override {
    ++recomputed;
    if (bit != 0) c.a ^= 1;
    return x[0] != 0 && c.a == 0;
  }
};

// c.a holds the parity of bits 3..m.
class Type2Family final : public Family {
 public:
  using Family::Family;
  bool evaluate(std::span<const std::uint8_t> x) const override {
    return x[1] ? x[0] != 0 : parity_of(x.subspan(2));
  }
  bool init(std::span<const std::uint8_t> x, Cache& c) const override {
    c.a = parity_of(x.subspan(2));
    return x[1] ? x[0] != 0 : c.a != 0;
  }
  bool update(std::span<const std::uint8_t> x, Cache& c, std::uint64_t bit,
              std::uint64_t& recomputed) const override {
    ++recomputed;
    if (bit >= 2) c.a ^= 1;
    return x[1] ? x[0] != 0 : c.a != 0;
  }
};

// c.a holds the number of ones.
class MajorityFamily final : public Family {
 public:
  using Family::Family;
  bool evaluate(std::span<const std::uint8_t> x) const override {
    std::uint64_t ones = 0;
    for (auto b : x) ones += b;
    return 2 * ones >= arity() + 1;
  }
  bool init(std::span<const std::uint8_t> x, Cache& c) const override {
    c.a = static_cast<std::uint64_t>(std::count(x.begin(), x.end(), std::uint8_t{1}));
    return 2 * c.a >= arity() + 1;
  }
  bool update(std::span<const std::uint8_t> x, Cache& c, std::uint64_t bit,
              std::uint64_t& recomputed) const override {
    ++recomputed;
    if (x[bit]) ++c.a; else --c.a;
    return 2 * c.a >= arity() + 1;
  }
};

// Bits: 0 = fallback dictator, 1..n = gate block, n+1.. = parity block.
// c.a = ones in the gate block, c.b = parity of the parity block.
class BigInfluenceTameFamily final : public Family {
 public:
  BigInfluenceTameFamily(FunctionSpec spec, std::uint64_t arity, std::uint64_t gates)
      : Family(std::move(spec), arity, 0), gates_(gates) {}

  bool evaluate(std::span<const std::uint8_t> x) const override {
    auto gate = x.subspan(1, gates_);
    bool all_ones = std::all_of(gate.begin(), gate.end(), [](auto b) { return b != 0; });
    return all_ones ? parity_of(x.subspan(1 + gates_)) : x[0] != 0;
  }
  bool init(std::span<const std::uint8_t> x, Cache& c) const override {
    auto gate = x.subspan(1, gates_);
    c.a = static_cast<std::uint64_t>(std::count(gate.begin(), gate.end(), std::uint8_t{1}));
    c.b = parity_of(x.subspan(1 + gates_));
    return output(x, c);
  }
  bool update(std::span<const std::uint8_t> x, Cache& c, std::uint64_t bit,
              std::uint64_t& recomputed) const override {
    ++recomputed;
    if (bit >= 1 && bit <= gates_) {
      if (x[bit]) ++c.a; else --c.a;
    } else if (bit > gates_) {
      c.b ^= 1;
    }
    return output(x, c);
  }

 private:
  bool output(std::span<const std::uint8_t> x, const Cache& c) const {
    return c.a == gates_ ? c.b != 0 : x[0] != 0;
  }
  std::uint64_t gates_;
};

// Internal vertices are cached level by level: level L starts at
// (3^L - 1) / 2. Leaves are read from the configuration.
class IterMaj3Family final : public Family {
 public:
  IterMaj3Family(FunctionSpec spec, std::uint64_t arity, std::uint32_t depth)
      : Family(std::move(spec), arity, depth) {
    std::uint64_t width = 1;
    for (std::uint32_t level = 0; level <= depth; ++level) {
      offsets_.push_back(internal_);
      if (level < depth) internal_ += width;
      width *= 3;
    }
  }

  bool evaluate(std::span<const std::uint8_t> x) const override { return eval(x, 0, 0); }

  bool init(std::span<const std::uint8_t> x, Cache& c) const override {
    c.nodes.assign(internal_, 0);
    for (std::uint32_t level = depth(); level-- > 0;) {
      std::uint64_t width = offsets_[level + 1] - offsets_[level];
      for (std::uint64_t j = 0; j < width; ++j) {
        c.nodes[offsets_[level] + j] = majority_of_children(x, c, level, j);
      }
    }
    return root(x, c);
  }

  bool update(std::span<const std::uint8_t> x, Cache& c, std::uint64_t bit,
              std::uint64_t& recomputed) const override {
    ++recomputed;  // the leaf itself
    std::uint64_t j = bit;
    for (std::uint32_t level = depth(); level > 0; --level) {
      std::uint64_t parent = j / 3;
      std::uint32_t value = majority_of_children(x, c, level - 1, parent);
      ++recomputed;
      auto& slot = c.nodes[offsets_[level - 1] + parent];
      if (slot == value) break;
      slot = value;
      j = parent;
    }
    return root(x, c);
  }

 private:
  bool eval(std::span<const std::uint8_t> x, std::uint32_t level, std::uint64_t j) const {
    if (level == depth()) return x[j] != 0;
    int ones = 0;
    for (std::uint64_t k = 0; k < 3; ++k) ones += eval(x, level + 1, 3 * j + k);
    return ones >= 2;
  }

  std::uint32_t value(std::span<const std::uint8_t> x, const Cache& c, std::uint32_t level,
                      std::uint64_t j) const {
    return level == depth() ? x[j] : c.nodes[offsets_[level] + j];
  }

  std::uint32_t majority_of_children(std::span<const std::uint8_t> x, const Cache& c,
                                     std::uint32_t level, std::uint64_t j) const {
    auto ones = value(x, c, level + 1, 3 * j) + value(x, c, level + 1, 3 * j + 1) +
                value(x, c, level + 1, 3 * j + 2);
    return ones >= 2 ? 1 : 0;
  }

  bool root(std::span<const std::uint8_t> x, const Cache& c) const {
    return depth() == 0 ? x[0] != 0 : c.nodes[0] != 0;
  }

  std::vector<std::uint64_t> offsets_;
  std::uint64_t internal_ = 0;
};

// Vertices are cached in heap order (children of h are 2h+1, 2h+2); bits
// are numbered in depth-first preorder.
class AndOrFamily final : public Family {
 public:
  AndOrFamily(FunctionSpec spec, std::uint64_t arity, std::uint32_t depth)
      : Family(std::move(spec), arity, depth),
        bit_to_heap_(arity),
        heap_to_bit_(arity),
        first_leaf_((std::uint64_t{1} << depth) - 1) {
    assign(0, 0, depth);
  }

  bool evaluate(std::span<const std::uint8_t> x) const override { return eval(x, 0, depth()); }

  bool init(std::span<const std::uint8_t> x, Cache& c) const override {
    c.nodes.assign(arity(), 0);
    for (std::uint64_t h = arity(); h-- > 0;) c.nodes[h] = gate_output(x, c, h);
    return c.nodes[0] != 0;
  }

  bool update(std::span<const std::uint8_t> x, Cache& c, std::uint64_t bit,
              std::uint64_t& recomputed) const override {
    std::uint64_t h = bit_to_heap_[bit];
    while (true) {
      std::uint32_t value = gate_output(x, c, h);
      ++recomputed;
      if (value == c.nodes[h]) break;
      c.nodes[h] = value;
      if (h == 0) break;
      h = (h - 1) / 2;
    }
    return c.nodes[0] != 0;
  }

 private:
  void assign(std::uint64_t heap, std::uint64_t pos, std::uint32_t remaining) {
    bit_to_heap_[pos] = static_cast<std::uint32_t>(heap);
    heap_to_bit_[heap] = static_cast<std::uint32_t>(pos);
    if (remaining == 0) return;
    assign(2 * heap + 1, pos + 1, remaining - 1);
    assign(2 * heap + 2, pos + (std::uint64_t{1} << remaining), remaining - 1);
  }

  // Preorder recursion: a subtree of height r occupies 2^(r+1) - 1 bits.
  bool eval(std::span<const std::uint8_t> x, std::uint64_t pos, std::uint32_t remaining) const {
    bool is_or = x[pos] != 0;
    if (remaining == 0) return is_or;
    bool left = eval(x, pos + 1, remaining - 1);
    bool right = eval(x, pos + (std::uint64_t{1} << remaining), remaining - 1);
    return is_or ? (left || right) : (left && right);
  }

  std::uint32_t gate_output(std::span<const std::uint8_t> x, const Cache& c,
                            std::uint64_t h) const {
    std::uint8_t gate = x[heap_to_bit_[h]];
    if (h >= first_leaf_) return gate;
    std::uint32_t left = c.nodes[2 * h + 1];
    std::uint32_t right = c.nodes[2 * h + 2];
    return gate ? (left | right) : (left & right);
  }

  std::vector<std::uint32_t> bit_to_heap_;
  std::vector<std::uint32_t> heap_to_bit_;
  std::uint64_t first_leaf_;
};

// Edge e into level k (1-based) at position j has index edge_start_[k] + j.
// Each internal vertex (levels 0..n-1) caches its number of live children:
// child edge open and child connected to level n. Level-n vertices are
// connected by definition.
class PercolationFamily final : public Family {
 public:
  PercolationFamily(FunctionSpec spec, const LevelProfile& profile, std::uint32_t level)
      : Family(std::move(spec), profile.edges_through(level), level) {
    children_.assign(profile.children.begin(), profile.children.begin() + level);
    std::uint64_t width = 1;
    std::uint64_t edges = 0;
    std::uint64_t vertices = 0;
    widths_.push_back(1);
    vertex_start_.push_back(0);
    edge_start_.push_back(0);  // unused slot for level 0
    for (std::uint32_t k = 1; k <= level; ++k) {
      vertices += width;
      width *= children_[k - 1];
      widths_.push_back(width);
      edge_start_.push_back(edges);
      vertex_start_.push_back(vertices);
      edges += width;
    }
    internal_ = vertices;
  }

  bool evaluate(std::span<const std::uint8_t> x) const override {
    std::vector<std::uint8_t> reach{1};
    std::vector<std::uint8_t> next;
    for (std::uint32_t k = 1; k <= depth(); ++k) {
      next.assign(widths_[k], 0);
      bool any = false;
      for (std::uint64_t j = 0; j < widths_[k]; ++j) {
        next[j] = reach[j / children_[k - 1]] && x[edge_start_[k] + j];
        any = any || next[j];
      }
      if (!any) return false;
      reach.swap(next);
    }
    return true;
  }

  bool init(std::span<const std::uint8_t> x, Cache& c) const override {
    c.nodes.assign(internal_, 0);
    for (std::uint32_t k = depth(); k >= 1; --k) {
      for (std::uint64_t j = 0; j < widths_[k]; ++j) {
        if (x[edge_start_[k] + j] && connected(c, k, j)) {
          ++c.nodes[vertex_start_[k - 1] + j / children_[k - 1]];
        }
      }
    }
    return c.nodes[0] > 0;
  }

  bool update(std::span<const std::uint8_t> x, Cache& c, std::uint64_t bit,
              std::uint64_t& recomputed) const override {
    auto it = std::upper_bound(edge_start_.begin() + 1, edge_start_.end(), bit);
    auto k = static_cast<std::uint32_t>(std::distance(edge_start_.begin(), it) - 1);
    std::uint64_t j = bit - edge_start_[k];
    if (!connected(c, k, j)) return c.nodes[0] > 0;
    bool opened = x[bit] != 0;
    while (true) {
      std::uint64_t parent = j / children_[k - 1];
      auto& count = c.nodes[vertex_start_[k - 1] + parent];
      bool before = count > 0;
      if (opened) ++count; else --count;
      ++recomputed;
      bool after = count > 0;
      if (before == after || k == 1) break;
      // The parent's own connectivity flipped; it matters upstairs only if
      // the edge into the parent is open.
      if (!x[edge_start_[k - 1] + parent]) break;
      opened = after;
      j = parent;
      --k;
    }
    return c.nodes[0] > 0;
  }

 private:
  bool connected(const Cache& c, std::uint32_t k, std::uint64_t j) const {
    return k == depth() || c.nodes[vertex_start_[k] + j] > 0;
  }

  std::vector<std::uint32_t> children_;
  std::vector<std::uint64_t> widths_;
  std::vector<std::uint64_t> vertex_start_;
  std::vector<std::uint64_t> edge_start_;
  std::uint64_t internal_ = 0;
};

// Internal index: bit i of the index is variable i (0-based).
class TruthTableFamily final : public Family {
 public:
  TruthTableFamily(FunctionSpec spec, std::uint32_t inputs, const std::vector<std::uint8_t>& file)
      : Family(std::move(spec), inputs, 0), table_(file.size()) {
    for (std::uint64_t idx = 0; idx < table_.size(); ++idx) {
      std::uint64_t file_index = 0;
      for (std::uint32_t i = 0; i < inputs; ++i) {
        if ((idx >> i) & 1U) file_index |= std::uint64_t{1} << (inputs - 1 - i);
      }
      table_[idx] = file[file_index];
    }
  }

  bool evaluate(std::span<const std::uint8_t> x) const override {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) idx |= std::uint64_t{x[i]} << i;
    return table_[idx] != 0;
  }
  bool init(std::span<const std::uint8_t> x, Cache& c) const override {
    c.a = 0;
    for (std::size_t i = 0; i < x.size(); ++i) c.a |= std::uint64_t{x[i]} << i;
    return table_[c.a] != 0;
  }
  bool update(std::span<const std::uint8_t>, Cache& c, std::uint64_t bit,
              std::uint64_t& recomputed) const override {
    ++recomputed;
    c.a ^= std::uint64_t{1} << bit;
    return table_[c.a] != 0;
  }

 private:
  std::vector<std::uint8_t> table_;
};

}  // namespace

std::shared_ptr<const Family> make_family(const FunctionSpec& spec) {
  struct Builder {
    const FunctionSpec& spec;

    std::shared_ptr<const Family> operator()(const family::Dictator& s) const {
      require_positive(s.m, "dictator arity");
      require_arity(static_cast<std::uint64_t>(s.m), "dictator");
      return std::make_shared<DictatorFamily>(spec, s.m, 0);
    }
    std::shared_ptr<const Family> operator()(const family::Parity& s) const {
      require_positive(s.m, "parity arity");
      require_arity(static_cast<std::uint64_t>(s.m), "parity");
      return std::make_shared<ParityFamily>(spec, s.m, 0);
    }
    std::shared_ptr<const Family> operator()(const family::DictatorAndParity& s) const {
      require_positive(s.m, "dictator-and-parity arity");
      require_arity(static_cast<std::uint64_t>(s.m), "dictator-and-parity");
      return std::make_shared<DictatorAndParityFamily>(spec, s.m, 0);
    }
    std::shared_ptr<const Family> operator()(const family::Type2Example& s) const {
      if (s.m < 2) throw Error(ErrorCode::InvalidSpec, "type2 needs at least 2 bits");
      require_arity(static_cast<std::uint64_t>(s.m), "type2");
      return std::make_shared<Type2Family>(spec, s.m, 0);
    }
    std::shared_ptr<const Family> operator()(const family::Majority& s) const {
      require_positive(s.n, "majority arity");
      if (s.n % 2 == 0) throw Error(ErrorCode::InvalidSpec, "majority arity must be odd");
      require_arity(static_cast<std::uint64_t>(s.n), "majority");
      return std::make_shared<MajorityFamily>(spec, s.n, 0);
    }
    std::shared_ptr<const Family> operator()(const family::IterMaj3& s) const {
      require_depth(s.depth, "itermaj3");
      auto leaves = pow3(s.depth);
      require_arity(leaves, "itermaj3");
      return std::make_shared<IterMaj3Family>(spec, leaves, static_cast<std::uint32_t>(s.depth));
    }
    std::shared_ptr<const Family> operator()(const family::AndOrTree& s) const {
      require_depth(s.depth, "andor");
      if (s.depth > 30) throw Error(ErrorCode::ArityTooLarge, "andor has arity above 2^31-1");
      std::uint64_t vertices = (std::uint64_t{1} << (s.depth + 1)) - 1;
      return std::make_shared<AndOrFamily>(spec, vertices, static_cast<std::uint32_t>(s.depth));
    }
    std::shared_ptr<const Family> operator()(const family::BigInfluenceTame& s) const {
      if (s.n < 0) throw Error(ErrorCode::InvalidSpec, "bigtame: negative n");
      auto block = pow3(s.n);
      require_arity(block, "bigtame");
      std::uint64_t arity = 1 + static_cast<std::uint64_t>(s.n) + block;
      require_arity(arity, "bigtame");
      return std::make_shared<BigInfluenceTameFamily>(spec, arity, s.n);
    }
    std::shared_ptr<const Family> operator()(const family::TreePercolation& s) const {
      validate(s.profile);
      if (s.level < 1) throw Error(ErrorCode::InvalidSpec, "perc: level must be at least 1");
      if (static_cast<std::uint64_t>(s.level) > s.profile.levels()) {
        throw Error(ErrorCode::InvalidSpec, "perc: level exceeds profile length");
      }
      require_arity(s.profile.edges_through(s.level), "perc");
      return std::make_shared<PercolationFamily>(spec, s.profile,
                                                 static_cast<std::uint32_t>(s.level));
    }
    std::shared_ptr<const Family> operator()(const family::TruthTable& s) const {
      auto size = s.outputs.size();
      if (size == 0 || !std::has_single_bit(size)) {
        throw Error(ErrorCode::NotPowerOfTwo,
                    "truth table length " + std::to_string(size) + " is not a power of two");
      }
      auto inputs = static_cast<int>(std::countr_zero(size));
      if (inputs == 0) throw Error(ErrorCode::InvalidSpec, "truth table needs at least one input");
      if (inputs > kMaxTableInputs) {
        throw Error(ErrorCode::ArityTooLarge, "truth tables are limited to 24 inputs");
      }
      for (auto b : s.outputs) {
        if (b > 1) throw Error(ErrorCode::InvalidSpec, "truth table entries must be 0 or 1");
      }
      return std::make_shared<TruthTableFamily>(spec, static_cast<std::uint32_t>(inputs),
                                                s.outputs);
    }
  };
  return std::visit(Builder{spec}, spec);
}

}  // namespace boolvol::detail
