#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgsl::testing {

/// Strict RFC 4180 reader: CRLF record separators, optional quoting with
/// doubled inner quotes, equal field counts per record. Throws on violations.
inline std::vector<std::vector<std::string>> read_strict_csv(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  std::size_t i = 0;
  const std::size_t size = text.size();
  if (size == 0) throw std::runtime_error("empty csv " + path);

  while (i < size) {
    if (text[i] == '"') {
      ++i;  // quoted field
      while (true) {
        if (i >= size) throw std::runtime_error("unterminated quote in " + path);
        if (text[i] == '"') {
          if (i + 1 < size && text[i + 1] == '"') {
            field += '"';
            i += 2;
          } else {
            ++i;
            break;
          }
        } else {
          field += text[i++];
        }
      }
      if (i < size && text[i] != ',' && text[i] != '\r')
        throw std::runtime_error("garbage after closing quote in " + path);
    } else {
      while (i < size && text[i] != ',' && text[i] != '\r') {
        if (text[i] == '\n' || text[i] == '"')
          throw std::runtime_error("bare newline or quote in field in " + path);
        field += text[i++];
      }
    }
    if (i < size && text[i] == ',') {
      record.push_back(field);
      field.clear();
      ++i;
      continue;
    }
    if (i < size && text[i] == '\r') {
      if (i + 1 >= size || text[i + 1] != '\n')
        throw std::runtime_error("CR without LF in " + path);
      record.push_back(field);
      field.clear();
      records.push_back(record);
      record.clear();
      i += 2;
      continue;
    }
    if (i >= size) throw std::runtime_error("missing final CRLF in " + path);
  }
  if (!record.empty() || !field.empty())
    throw std::runtime_error("trailing partial record in " + path);
  if (records.empty()) throw std::runtime_error("no records in " + path);
  for (const auto& r : records)
    if (r.size() != records.front().size())
      throw std::runtime_error("ragged record in " + path);
  return records;
}

}  // namespace rgsl::testing
