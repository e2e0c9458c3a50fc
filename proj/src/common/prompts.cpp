#include "arena/common/prompts.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace arena::prompts {

namespace detail {
const std::map<std::string, std::string, std::less<>>& embedded();
}

namespace {
std::filesystem::path& override_dir() {
  static std::filesystem::path dir;
  return dir;
}
}  // namespace

void set_override_dir(std::filesystem::path dir) {
  override_dir() = std::move(dir);
}

std::string load(std::string_view name) {
  if (!override_dir().empty()) {
    const auto path = override_dir() / (std::string(name) + ".txt");
    if (std::ifstream in(path); in) {
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    }
  }
  const auto& table = detail::embedded();
  const auto it = table.find(name);
  if (it == table.end()) {
    throw std::out_of_range("unknown prompt asset: " + std::string(name));
  }
  return it->second;
}

std::string fill(std::string_view tmpl,
                 const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const auto close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        const auto key = tmpl.substr(i + 1, close - i - 1);
        if (const auto it = vars.find(std::string(key)); it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i]);
    ++i;
  }
  return out;
}

}  // namespace arena::prompts
