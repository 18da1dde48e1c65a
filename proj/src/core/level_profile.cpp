#include "boolvol/level_profile.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "boolvol/error.hpp"

namespace boolvol {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return b > kSaturated - a ? kSaturated : a + b;
}

std::uint32_t parse_child_count(std::string_view token, const std::string& where) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) {
    token.remove_suffix(1);
  }
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || value == 0) {
    throw Error(ErrorCode::InvalidSpec,
                "bad child count '" + std::string(token) + "' in " + where);
  }
  return value;
}

}  // namespace

std::uint64_t LevelProfile::vertices_at(std::size_t level) const {
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < level && k < children.size(); ++k) {
    count = saturating_mul(count, children[k]);
  }
  return count;
}

std::uint64_t LevelProfile::edges_through(std::size_t level) const {
  std::uint64_t total = 0;
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < level && k < children.size(); ++k) {
    count = saturating_mul(count, children[k]);
    total = saturating_add(total, count);
  }
  return total;
}

void validate(const LevelProfile& profile) {
  if (profile.children.empty()) throw Error(ErrorCode::InvalidSpec, "empty level profile");
  for (std::size_t k = 0; k < profile.children.size(); ++k) {
    if (profile.children[k] == 0) {
      throw Error(ErrorCode::InvalidSpec,
                  "level profile has zero children at level " + std::to_string(k + 1));
    }
  }
}

LevelProfile read_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open profile file " + path.string());
  LevelProfile profile;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    profile.children.push_back(parse_child_count(line, path.string()));
  }
  validate(profile);
  return profile;
}

void write_profile(const std::filesystem::path& path, const LevelProfile& profile) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write profile file " + path.string());
  for (auto c : profile.children) out << c << '\n';
}

LevelProfile parse_inline_profile(const std::string& text) {
  LevelProfile profile;
  std::string_view rest = text;
  while (true) {
    auto comma = rest.find(',');
    profile.children.push_back(parse_child_count(rest.substr(0, comma), "inline profile"));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  validate(profile);
  return profile;
}

std::string format_inline_profile(const LevelProfile& profile) {
  std::ostringstream os;
  for (std::size_t k = 0; k < profile.children.size(); ++k) {
    if (k) os << ',';
    os << profile.children[k];
  }
  return os.str();
}

}  // namespace boolvol
