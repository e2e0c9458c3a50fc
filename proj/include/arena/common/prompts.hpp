#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace arena::prompts {

/// Prompt asset by name, e.g. "content_judge.v1". Assets are compiled in;
/// a file `<name>.txt` in the override directory takes precedence.
std::string load(std::string_view name);

/// Must be called before any concurrent use of load().
void set_override_dir(std::filesystem::path dir);

/// Replaces each `{key}` for keys present in `vars`; other braces are left
/// untouched (prompts contain literal JSON).
std::string fill(std::string_view tmpl,
                 const std::map<std::string, std::string>& vars);

}  // namespace arena::prompts
