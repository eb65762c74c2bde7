#pragma once

// Keyset files for the code generator: TSV, CSV or JSON records of
// (key, value) text, typed by a declared or inferred value kind.
//
//   TSV   key<TAB>value per line; blank lines and lines starting with '#' skipped
//   CSV   key,value per line with RFC 4180 quoting; '#' comment lines skipped
//   JSON  either an object {"key": value, ...} (member order kept) or an array
//         of [key, value] pairs

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace static_maps {

enum class keyset_format { tsv, csv, json };
enum class value_kind : std::uint8_t { float64 = 0, int64 = 1, character = 2, text = 3 };

using keyset_value = std::variant<double, std::int64_t, char, std::string>;

inline std::string_view to_string(value_kind k) noexcept {
  switch (k) {
    case value_kind::float64: return "float64";
    case value_kind::int64: return "int64";
    case value_kind::character: return "char";
    case value_kind::text: return "text";
  }
  return "?";
}

inline std::optional<value_kind> value_kind_from_string(std::string_view s) {
  if (s == "float64") return value_kind::float64;
  if (s == "int64") return value_kind::int64;
  if (s == "char") return value_kind::character;
  if (s == "text") return value_kind::text;
  return std::nullopt;
}

inline std::optional<keyset_format> keyset_format_from_string(std::string_view s) {
  if (s == "tsv") return keyset_format::tsv;
  if (s == "csv") return keyset_format::csv;
  if (s == "json") return keyset_format::json;
  return std::nullopt;
}

class keyset_error : public std::runtime_error {
 public:
  enum class kind { io, parse, duplicate_key };

  keyset_error(kind k, const std::string& what, std::size_t line = 0)
      : std::runtime_error(what), kind_(k), line_(line) {}

  kind error_kind() const noexcept { return kind_; }
  /// 1-based line (or JSON entry) number; 0 when not tied to one.
  std::size_t line() const noexcept { return line_; }

 private:
  kind kind_;
  std::size_t line_;
};

struct keyset_record {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

namespace detail {

inline std::optional<std::int64_t> parse_int64(std::string_view s) {
  std::int64_t v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

inline std::optional<double> parse_float64(std::string_view s) {
  double v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses one value text as the given kind.
inline keyset_value parse_value(const std::string& text, value_kind kind, std::size_t line = 0) {
  switch (kind) {
    case value_kind::float64:
      if (auto v = detail::parse_float64(text)) return *v;
      break;
    case value_kind::int64:
      if (auto v = detail::parse_int64(text)) return *v;
      break;
    case value_kind::character:
      if (text.size() == 1) return text[0];
      break;
    case value_kind::text:
      return text;
  }
  throw keyset_error(keyset_error::kind::parse,
                     "line " + std::to_string(line) + ": value '" + text + "' is not " + std::string(to_string(kind)),
                     line);
}

/// Narrowest kind every value parses as: int64, float64, char, then text.
inline value_kind infer_value_kind(const std::vector<keyset_record>& records) {
  if (records.empty()) return value_kind::text;
  auto all = [&](auto pred) {
    for (const auto& r : records) {
      if (!pred(r.value)) return false;
    }
    return true;
  };
  if (all([](const std::string& v) { return detail::parse_int64(v).has_value(); })) return value_kind::int64;
  if (all([](const std::string& v) { return detail::parse_float64(v).has_value(); })) return value_kind::float64;
  if (all([](const std::string& v) { return v.size() == 1; })) return value_kind::character;
  return value_kind::text;
}

struct keyset_file {
  value_kind kind = value_kind::text;
  std::vector<keyset_record> records;

  std::vector<std::pair<std::string, keyset_value>> typed_pairs() const {
    std::vector<std::pair<std::string, keyset_value>> out;
    out.reserve(records.size());
    for (const auto& r : records) out.emplace_back(r.key, parse_value(r.value, kind, r.line));
    return out;
  }
};

namespace detail {

inline void check_duplicates(const std::vector<keyset_record>& records) {
  std::map<std::string_view, std::size_t> first_line;
  for (const auto& r : records) {
    auto [it, fresh] = first_line.emplace(r.key, r.line);
    if (!fresh) {
      throw keyset_error(keyset_error::kind::duplicate_key,
                         "duplicate key '" + r.key + "' on lines " + std::to_string(it->second) + " and " +
                             std::to_string(r.line),
                         r.line);
    }
  }
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

inline std::vector<keyset_record> parse_tsv(std::string_view text) {
  std::vector<keyset_record> out;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string_view line = strip_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
      throw keyset_error(keyset_error::kind::parse,
                         "line " + std::to_string(line_no) + ": expected exactly one tab separating key and value",
                         line_no);
    }
    out.push_back({std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)), line_no});
  }
  return out;
}

// Splits one CSV record. Quoted fields may contain commas and doubled quotes
// but not line breaks.
inline std::vector<std::string> split_csv(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false, was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"' && fields.back().empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
      was_quoted = false;
    } else if (was_quoted) {
      throw keyset_error(keyset_error::kind::parse, "line " + std::to_string(line_no) + ": text after closing quote",
                         line_no);
    } else {
      fields.back() += c;
    }
  }
  if (quoted) {
    throw keyset_error(keyset_error::kind::parse, "line " + std::to_string(line_no) + ": unterminated quote", line_no);
  }
  return fields;
}

inline std::vector<keyset_record> parse_csv(std::string_view text) {
  std::vector<keyset_record> out;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string_view line = strip_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_csv(line, line_no);
    if (fields.size() != 2) {
      throw keyset_error(keyset_error::kind::parse,
                         "line " + std::to_string(line_no) + ": expected 2 fields, found " +
                             std::to_string(fields.size()),
                         line_no);
    }
    out.push_back({std::move(fields[0]), std::move(fields[1]), line_no});
  }
  return out;
}

inline std::string json_scalar_text(const nlohmann::ordered_json& v, std::size_t entry) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned() || v.is_number_float()) return v.dump();
  throw keyset_error(keyset_error::kind::parse,
                     "entry " + std::to_string(entry) + ": value must be a string or number", entry);
}

inline std::vector<keyset_record> parse_json(std::string_view text) {
  // Object members are collapsed by the DOM, so repeated top-level keys are
  // caught while parsing.
  std::map<std::string, std::size_t> seen;
  std::size_t member = 0;
  auto on_event = [&](int depth, nlohmann::ordered_json::parse_event_t event, nlohmann::ordered_json& parsed) {
    if (depth == 1 && event == nlohmann::ordered_json::parse_event_t::key) {
      ++member;
      auto [it, fresh] = seen.emplace(parsed.get<std::string>(), member);
      if (!fresh) {
        throw keyset_error(keyset_error::kind::duplicate_key,
                           "duplicate key '" + it->first + "' in entries " + std::to_string(it->second) + " and " +
                               std::to_string(member),
                           member);
      }
    }
    return true;
  };
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text, on_event);
  } catch (const nlohmann::json::parse_error& e) {
    throw keyset_error(keyset_error::kind::parse, std::string("invalid JSON: ") + e.what());
  }
  std::vector<keyset_record> out;
  std::size_t entry = 0;
  if (doc.is_object()) {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      ++entry;
      out.push_back({it.key(), json_scalar_text(it.value(), entry), entry});
    }
  } else if (doc.is_array()) {
    for (const auto& item : doc) {
      ++entry;
      if (!item.is_array() || item.size() != 2 || !item[0].is_string()) {
        throw keyset_error(keyset_error::kind::parse,
                           "entry " + std::to_string(entry) + ": expected [key, value] with a string key", entry);
      }
      out.push_back({item[0].get<std::string>(), json_scalar_text(item[1], entry), entry});
    }
  } else {
    throw keyset_error(keyset_error::kind::parse, "JSON keyset must be an object or an array of pairs");
  }
  return out;
}

}  // namespace detail

/// Parses keyset text. Records keep file order; the value kind is inferred
/// unless declared.
inline keyset_file parse_keyset_text(std::string_view text, keyset_format format,
                                     std::optional<value_kind> kind = std::nullopt) {
  keyset_file kf;
  switch (format) {
    case keyset_format::tsv: kf.records = detail::parse_tsv(text); break;
    case keyset_format::csv: kf.records = detail::parse_csv(text); break;
    case keyset_format::json: kf.records = detail::parse_json(text); break;
  }
  detail::check_duplicates(kf.records);
  kf.kind = kind ? *kind : infer_value_kind(kf.records);
  for (const auto& r : kf.records) parse_value(r.value, kf.kind, r.line);
  return kf;
}

inline keyset_file parse_keyset(const std::string& path, keyset_format format,
                                std::optional<value_kind> kind = std::nullopt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw keyset_error(keyset_error::kind::io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw keyset_error(keyset_error::kind::io, "error reading " + path);
  return parse_keyset_text(buf.str(), format, kind);
}

}  // namespace static_maps
