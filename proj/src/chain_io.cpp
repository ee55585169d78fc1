#include "ginv/chain_io.hpp"

#include <cctype>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ginv/errors.hpp"

namespace ginv {

namespace {

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ChainFileFormat sniff_format(const std::string& path,
                             const std::string& bytes) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "json") return ChainFileFormat::json;
  if (ext == "csv") return ChainFileFormat::csv;
  for (char c : bytes) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{' || c == '[') return ChainFileFormat::json;
    break;
  }
  return ChainFileFormat::plain;
}

double parse_number(const std::string& token, const std::string& path,
                    std::size_t line) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != token.size()) {
    throw ParseError(path + ":" + std::to_string(line) + ": '" + token +
                     "' is not a number");
  }
  return value;
}

std::vector<std::vector<double>> parse_rows(const std::string& bytes,
                                            const std::string& path,
                                            bool commas) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(bytes);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string cleaned = line;
    if (commas) {
      for (char& c : cleaned)
        if (c == ',') c = ' ';
    }
    std::istringstream fields(cleaned);
    std::vector<double> row;
    std::string token;
    while (fields >> token) {
      if (token[0] == '#') break;  // trailing comment
      row.push_back(parse_number(token, path, line_no));
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ParseError(path + ": no numeric rows found");
  }
  return rows;
}

Matrix rows_to_matrix(const std::vector<std::vector<double>>& rows,
                      const std::string& path) {
  const std::size_t m = rows.size();
  Matrix out(m, rows[0].size());
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != out.cols()) {
      throw ParseError(path + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(rows[i].size()) + " entries, expected " +
                       std::to_string(out.cols()));
    }
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = rows[i][j];
  }
  return out;
}

Matrix matrix_from_json(const nlohmann::json& rows, const std::string& path) {
  if (!rows.is_array() || rows.empty()) {
    throw ParseError(path + ": \"P\" must be a nonempty array of arrays");
  }
  std::vector<std::vector<double>> data;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (!row.is_array()) {
      throw ParseError(path + ": row " + std::to_string(i + 1) +
                       " is not an array");
    }
    std::vector<double> values;
    for (const auto& cell : row) {
      if (!cell.is_number()) {
        throw ParseError(path + ": row " + std::to_string(i + 1) +
                         " holds a non-numeric entry");
      }
      values.push_back(cell.get<double>());
    }
    data.push_back(std::move(values));
  }
  return rows_to_matrix(data, path);
}

Matrix parse_any_matrix(const std::string& path, const std::string& bytes,
                        ChainFileFormat format,
                        std::vector<std::string>* labels_out) {
  if (format == ChainFileFormat::json) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path + ": " + e.what());
    }
    const nlohmann::json* obj = &doc;
    if (obj->is_object() && !obj->contains("P") && obj->contains("input")) {
      obj = &(*obj)["input"];
    }
    if (!obj->is_object() || !obj->contains("P")) {
      throw ParseError(path + ": expected an object with a \"P\" key");
    }
    Matrix p = matrix_from_json((*obj)["P"], path);
    if (labels_out != nullptr && obj->contains("labels")) {
      const auto& labels = (*obj)["labels"];
      if (!labels.is_array() || labels.size() != p.rows()) {
        throw ParseError(path + ": \"labels\" must list one name per state");
      }
      labels_out->clear();
      for (const auto& label : labels)
        labels_out->push_back(label.get<std::string>());
    }
    return p;
  }
  return rows_to_matrix(
      parse_rows(bytes, path, format == ChainFileFormat::csv), path);
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

ChainFile load_chain_file(const std::string& path) {
  ChainFile file;
  file.path = path;
  const std::string bytes = read_all(path);
  file.digest = fnv1a64(bytes);
  file.format = sniff_format(path, bytes);
  file.matrix = parse_any_matrix(path, bytes, file.format, &file.labels);
  if (!file.matrix.square()) {
    throw ParseError(path + ": transition matrix must be square, got " +
                     std::to_string(file.matrix.rows()) + "x" +
                     std::to_string(file.matrix.cols()));
  }
  if (file.labels.empty()) {
    for (std::size_t i = 1; i <= file.matrix.rows(); ++i)
      file.labels.push_back(std::to_string(i));
  }
  return file;
}

Matrix load_matrix_file(const std::string& path) {
  const std::string bytes = read_all(path);
  Matrix m = parse_any_matrix(path, bytes, sniff_format(path, bytes), nullptr);
  if (!m.square()) {
    throw ParseError(path + ": matrix must be square");
  }
  return m;
}

Vector load_vector_file(const std::string& path) {
  const std::string bytes = read_all(path);
  const auto rows = parse_rows(bytes, path, true);
  std::vector<double> values;
  for (const auto& row : rows)
    values.insert(values.end(), row.begin(), row.end());
  return Vector(std::move(values));
}

}  // namespace ginv
