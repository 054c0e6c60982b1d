#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lfd {

/// One block of `key = value` lines. The unnamed leading block is the root;
/// every `[name]` header opens a new block (names may repeat, e.g. `[plane]`).
struct KvSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  std::optional<std::string> find(std::string_view key) const;
  std::string get_string(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key, double fallback) const;
  int get_int(std::string_view key, int fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
};

struct KvDocument {
  KvSection root;
  std::vector<KvSection> sections;
};

/// `#` starts a comment; blank lines are ignored. Malformed lines throw BadConfig.
KvDocument parse_kv(std::string_view text);
KvDocument load_kv(const std::filesystem::path& path);

} // namespace lfd
