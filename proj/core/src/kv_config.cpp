#include "lfd/kv_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "lfd/error.hpp"

namespace lfd {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

} // namespace

std::optional<std::string> KvSection::find(std::string_view key) const {
  // last assignment wins
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    if (it->first == key) return it->second;
  }
  return std::nullopt;
}

std::string KvSection::get_string(std::string_view key, std::string fallback) const {
  auto v = find(key);
  return v ? *v : std::move(fallback);
}

double KvSection::get_double(std::string_view key, double fallback) const {
  auto v = find(key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    const double d = std::stod(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    fail(Errc::BadConfig, "key '" + std::string(key) + "' expects a number, got '" + *v + "'");
  }
}

int KvSection::get_int(std::string_view key, int fallback) const {
  auto v = find(key);
  if (!v) return fallback;
  int out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size()) {
    fail(Errc::BadConfig, "key '" + std::string(key) + "' expects an integer, got '" + *v + "'");
  }
  return out;
}

bool KvSection::get_bool(std::string_view key, bool fallback) const {
  auto v = find(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  fail(Errc::BadConfig, "key '" + std::string(key) + "' expects a boolean, got '" + *v + "'");
}

KvDocument parse_kv(std::string_view text) {
  KvDocument doc;
  KvSection* current = &doc.root;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(Errc::BadConfig, "unterminated section header on line " + std::to_string(line_no));
      doc.sections.push_back(KvSection{std::string(trim(line.substr(1, line.size() - 2))), {}});
      current = &doc.sections.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(Errc::BadConfig, "expected 'key = value' on line " + std::to_string(line_no));
    }
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.empty()) fail(Errc::BadConfig, "empty key on line " + std::to_string(line_no));
    current->entries.emplace_back(std::string(key), std::string(value));
  }
  return doc;
}

KvDocument load_kv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Io, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_kv(ss.str());
}

} // namespace lfd
