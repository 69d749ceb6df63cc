#include "lme/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace lme {
namespace {

std::string format_coord(Scalar v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string pointset_to_csv(const PointSet& p) {
  std::ostringstream out;
  out << "# d=" << p.dim() << "\n";
  for (Index a = 0; a < p.size(); ++a) {
    for (int j = 0; j < p.dim(); ++j) {
      if (j) out << ",";
      out << format_coord(p.point(a)[j]);
    }
    out << "\n";
  }
  return out.str();
}

PointSet pointset_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("point-set csv: empty file");
  int d = 0;
  if (std::sscanf(line.c_str(), "# d=%d", &d) != 1) {
    throw IoError("point-set csv: missing '# d=<dim>' header");
  }
  if (d < 1 || d > kMaxDim) throw IoError("point-set csv: unsupported dimension");

  std::vector<Vector> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Vector x(d);
    std::string cell;
    for (int j = 0; j < d; ++j) {
      if (!std::getline(ls, cell, ',')) {
        throw IoError("point-set csv: row with fewer than d values");
      }
      size_t pos = 0;
      try {
        x[j] = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw IoError("point-set csv: bad number '" + cell + "'");
      }
    }
    if (std::getline(ls, cell, ',')) {
      throw IoError("point-set csv: row with more than d values");
    }
    rows.push_back(x);
  }
  Matrix pts(d, static_cast<Index>(rows.size()));
  for (Index a = 0; a < pts.cols(); ++a) pts.col(a) = rows[static_cast<size_t>(a)];
  try {
    return PointSet(std::move(pts));
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("point-set csv: ") + e.what());
  }
}

nlohmann::json pointset_to_json(const PointSet& p) {
  nlohmann::json j;
  j["d"] = p.dim();
  auto& pts = j["points"] = nlohmann::json::array();
  for (Index a = 0; a < p.size(); ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < p.dim(); ++k) row.push_back(p.point(a)[k]);
    pts.push_back(std::move(row));
  }
  return j;
}

PointSet pointset_from_json(const nlohmann::json& j) {
  if (!j.contains("d") || !j.contains("points")) {
    throw IoError("point-set json: need keys 'd' and 'points'");
  }
  const int d = j.at("d").get<int>();
  if (d < 1 || d > kMaxDim) throw IoError("point-set json: unsupported dimension");
  const auto& rows = j.at("points");
  Matrix pts(d, static_cast<Index>(rows.size()));
  Index a = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != d) {
      throw IoError("point-set json: row length != d");
    }
    for (int k = 0; k < d; ++k) pts(k, a) = row.at(static_cast<size_t>(k)).get<Scalar>();
    ++a;
  }
  try {
    return PointSet(std::move(pts));
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("point-set json: ") + e.what());
  }
}

PointSet read_pointset(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  if (path.extension() == ".json") {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw IoError("point-set json: " + std::string(e.what()));
    }
    return pointset_from_json(j);
  }
  return pointset_from_csv(text);
}

void write_pointset(const PointSet& p, const std::filesystem::path& path) {
  if (path.extension() == ".json") {
    write_text_file(path, pointset_to_json(p).dump(2) + "\n");
  } else {
    write_text_file(path, pointset_to_csv(p));
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("short write to " + path.string());
}

}  // namespace lme
