#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace boolvol {

/// Child counts of a spherically symmetric tree. children[k-1] is the number
/// of children of every vertex at level k-1, so level k has
/// children[0] * ... * children[k-1] vertices.
struct LevelProfile {
  std::vector<std::uint32_t> children;

  std::size_t levels() const noexcept { return children.size(); }

  /// Vertex count at `level` (level 0 is the root). Saturates at UINT64_MAX.
  std::uint64_t vertices_at(std::size_t level) const;

  /// Number of edges in the first `level` levels, i.e. the arity of the
  /// root-to-level connectivity function. Saturates at UINT64_MAX.
  std::uint64_t edges_through(std::size_t level) const;

  bool operator==(const LevelProfile&) const = default;
};

/// Throws InvalidSpec when empty or when some child count is zero.
void validate(const LevelProfile& profile);

/// One positive integer per line; blank lines and lines starting with '#'
/// are ignored.
LevelProfile read_profile(const std::filesystem::path& path);
void write_profile(const std::filesystem::path& path, const LevelProfile& profile);

/// Comma separated child counts, e.g. "2,16,7".
LevelProfile parse_inline_profile(const std::string& text);
std::string format_inline_profile(const LevelProfile& profile);

}  // namespace boolvol
