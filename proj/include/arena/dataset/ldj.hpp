#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arena/common/json.hpp"

namespace arena::dataset {

inline constexpr int kSchemaVersion = 1;

/// Header line missing, of another kind, or of an unsupported version; also
/// raised for a body line that is not a JSON object.
class SchemaMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// First line of every file: {"schema":"arena.<kind>","version":1}.
Json ldj_header(std::string_view kind, int version = kSchemaVersion);

/// Header plus one canonical record per line, each terminated by '\n'.
std::string serialize_ldj(std::string_view kind, std::span<const Json> records);

/// Inverse of serialize_ldj. Blank lines are skipped. `source` names the
/// input in error messages.
std::vector<Json> parse_ldj(std::string_view content, std::string_view kind,
                            std::string_view source = "<memory>");

/// Writes through a temporary file and a rename. Returns the file's SHA-256.
std::string write_ldj(const std::filesystem::path& path, std::string_view kind,
                      std::span<const Json> records);
std::vector<Json> read_ldj(const std::filesystem::path& path, std::string_view kind);

/// Conventional file name, e.g. "episodes.v1.ldj".
std::string ldj_filename(std::string_view kind, int version = kSchemaVersion);

/// Incremental writer; the header goes out when the file is created or
/// empty, and every record is flushed as one complete line.
class LdjWriter {
 public:
  LdjWriter(const std::filesystem::path& path, std::string_view kind);
  void append(const Json& record);

 private:
  std::ofstream out_;
};

std::string read_file(const std::filesystem::path& path);
/// Temporary file plus rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace arena::dataset
