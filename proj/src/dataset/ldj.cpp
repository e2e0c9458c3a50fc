#include "arena/dataset/ldj.hpp"

#include <sstream>

#include "arena/common/digest.hpp"
#include "arena/common/text.hpp"

namespace arena::dataset {

Json ldj_header(std::string_view kind, int version) {
  return Json{{"schema", "arena." + std::string(kind)}, {"version", version}};
}

std::string ldj_filename(std::string_view kind, int version) {
  return std::string(kind) + ".v" + std::to_string(version) + ".ldj";
}

std::string serialize_ldj(std::string_view kind, std::span<const Json> records) {
  std::string out = canonical_dump(ldj_header(kind)) + '\n';
  for (const auto& r : records) {
    out += canonical_dump(r);
    out += '\n';
  }
  return out;
}

std::vector<Json> parse_ldj(std::string_view content, std::string_view kind,
                            std::string_view source) {
  const std::string where(source);
  std::vector<Json> records;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    const auto line = text::trim(content.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw SchemaMismatch(where + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object()) {
      throw SchemaMismatch(where + ":" + std::to_string(line_no) + ": not an object");
    }
    if (!header_seen) {
      const auto expected = "arena." + std::string(kind);
      if (!j.contains("schema") || j["schema"] != expected) {
        throw SchemaMismatch(where + ": expected a " + expected + " header line");
      }
      if (!j.contains("version") || j["version"] != kSchemaVersion) {
        throw SchemaMismatch(where + ": unsupported schema version");
      }
      header_seen = true;
      continue;
    }
    records.push_back(std::move(j));
  }
  if (!header_seen) throw SchemaMismatch(where + ": empty file, no header line");
  return records;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string write_ldj(const std::filesystem::path& path, std::string_view kind,
                      std::span<const Json> records) {
  const std::string content = serialize_ldj(kind, records);
  write_file_atomic(path, content);
  return sha256_hex(content);
}

std::vector<Json> read_ldj(const std::filesystem::path& path, std::string_view kind) {
  return parse_ldj(read_file(path), kind, path.string());
}

LdjWriter::LdjWriter(const std::filesystem::path& path, std::string_view kind) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw std::runtime_error("cannot append to " + path.string());
  if (fresh) {
    out_ << canonical_dump(ldj_header(kind)) << '\n';
    out_.flush();
  }
}

void LdjWriter::append(const Json& record) {
  out_ << canonical_dump(record) << '\n';
  out_.flush();
}

}  // namespace arena::dataset
