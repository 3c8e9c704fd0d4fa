#pragma once

// Flat key-value run configuration:
//
//   # comment
//   contract.strike = 100
//   run.space_steps = 250, 500, 1000
//   columns = deform, insert
//   insert.placement.mode = insert
//
// Keys prefixed by a column name override the shared value for that column.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stretchfd/harness.hpp"

namespace stretchfd {

class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in, const std::string& source = "<input>");
  static KeyValueConfig load(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

struct TableConfig {
  std::string title;
  std::vector<RunConfig> columns;
};

/// Settings for one column; `column` empty reads the shared keys only.
RunConfig run_config_from(const KeyValueConfig& kv, const std::string& column = "");

TableConfig table_config_from(const KeyValueConfig& kv);
TableConfig load_table_config(const std::filesystem::path& path);

}  // namespace stretchfd
