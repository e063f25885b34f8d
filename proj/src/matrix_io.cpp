#include "qent/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qent/error.hpp"

namespace qent {

namespace {

using nlohmann::json;

void read_part(const json& rows, const char* name, std::size_t n, CMatrix& out, bool imag) {
  if (!rows.is_array() || rows.size() != n) {
    throw Error(ErrorKind::ParseError,
                std::string("\"") + name + "\" must be an array of " + std::to_string(n) + " rows");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != n) {
      throw Error(ErrorKind::ParseError, std::string("\"") + name + "\" row " + std::to_string(i) +
                                             " must have " + std::to_string(n) + " entries");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!row[j].is_number()) {
        throw Error(ErrorKind::ParseError, std::string("\"") + name + "\" entry (" +
                                               std::to_string(i) + "," + std::to_string(j) +
                                               ") is not a number");
      }
      const double v = row[j].get<double>();
      auto& z = out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      z = imag ? Complex(z.real(), v) : Complex(v, z.imag());
    }
  }
}

}  // namespace

CMatrix parse_matrix_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("re") || !doc.contains("im")) {
    throw Error(ErrorKind::ParseError, "expected an object with keys dim, re, im");
  }
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1) {
    throw Error(ErrorKind::ParseError, "\"dim\" must be a positive integer");
  }
  const auto n = static_cast<std::size_t>(doc["dim"].get<long long>());
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  read_part(doc["re"], "re", n, m, false);
  read_part(doc["im"], "im", n, m, true);
  return m;
}

CMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_json(buf.str());
}

std::string format_matrix_json(const CMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    json c = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  json doc;
  doc["dim"] = m.rows();
  doc["re"] = std::move(re);
  doc["im"] = std::move(im);
  return doc.dump();
}

void write_matrix_file(const std::filesystem::path& path, const CMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << format_matrix_json(m) << '\n';
}

}  // namespace qent
