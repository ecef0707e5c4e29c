#pragma once
/*
 * Plain-text experiment configs: `key = value` entries with strings, numbers,
 * booleans, inline tables and (possibly multi-line) arrays, and # comments.
 *
 *   arms = [{kind = "pareto", alpha = 4.0, beta = 1.875}, ...]
 *   f = {kind = "power", p = 2.0}
 *   B = 9.0
 *
 * Parse failures throw errc::config_error with line/field diagnostics.
 */
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bai/common.hpp"

namespace bai {

class cfg_value {
 public:
  enum class kind { number, string, boolean, table, array };

  kind type = kind::number;
  double num = 0;
  std::string str;
  bool flag = false;
  std::vector<std::pair<std::string, cfg_value>> table;
  std::vector<cfg_value> array;
  int line = 0;

  const cfg_value* find(const std::string& key) const {
    for (const auto& [k, v] : table)
      if (k == key) return &v;
    return nullptr;
  }

  double as_number(const std::string& what) const;
  std::int64_t as_int(const std::string& what) const;
  const std::string& as_string(const std::string& what) const;
  bool as_bool(const std::string& what) const;
};

// Parses the whole document as a table of top-level keys.
cfg_value parse_config_text(const std::string& text);
cfg_value load_config_file(const std::string& path);

}  // namespace bai
