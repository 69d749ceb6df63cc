#include "lme/config.hpp"

#include <sstream>

#include "lme/io.hpp"

namespace lme {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Scalar parse_scalar(const std::string& v) {
  size_t pos = 0;
  Scalar out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw IoError("config: bad number '" + v + "'");
  }
  if (trim(v.substr(pos)) != "") throw IoError("config: bad number '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw IoError("config: bad boolean '" + v + "'");
}

}  // namespace

std::vector<Scalar> parse_scalar_list(const std::string& text) {
  std::vector<Scalar> out;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    cell = trim(cell);
    if (!cell.empty()) out.push_back(parse_scalar(cell));
  }
  return out;
}

Domain RunConfig::domain() const {
  if (box_lo.empty() && box_hi.empty()) return Domain::unit_box(dim);
  if (static_cast<int>(box_lo.size()) != dim ||
      static_cast<int>(box_hi.size()) != dim) {
    throw IoError("config: domain lo/hi need one value per dimension");
  }
  Vector lo(dim), hi(dim);
  for (int j = 0; j < dim; ++j) {
    lo[j] = box_lo[static_cast<size_t>(j)];
    hi[j] = box_hi[static_cast<size_t>(j)];
  }
  return Domain::box(lo, hi);
}

LmeParams RunConfig::params_at(Scalar h) const {
  LmeParams p;
  p.gamma = gamma;
  p.h = h;
  return p;
}

nlohmann::json RunConfig::echo() const {
  nlohmann::json j;
  j["gamma"] = gamma;
  j["epsilon"] = epsilon;
  j["s"] = s;
  j["theta"] = theta;
  j["h_list"] = h_list;
  j["dim"] = dim;
  j["seed"] = seed;
  j["jitter"] = jitter;
  j["field"] = field;
  j["probes"] = probes;
  if (!box_lo.empty()) {
    j["box_lo"] = box_lo;
    j["box_hi"] = box_hi;
  } else {
    j["domain"] = "unit box";
  }
  return j;
}

void RunConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "gamma") gamma = parse_scalar(value);
  else if (key == "epsilon") epsilon = parse_scalar(value);
  else if (key == "s") s = parse_scalar(value);
  else if (key == "theta") theta = parse_scalar(value);
  else if (key == "h_list") h_list = parse_scalar_list(value);
  else if (key == "dim") dim = static_cast<int>(parse_scalar(value));
  else if (key == "box_lo") box_lo = parse_scalar_list(value);
  else if (key == "box_hi") box_hi = parse_scalar_list(value);
  else if (key == "seed") seed = static_cast<std::uint64_t>(parse_scalar(value));
  else if (key == "jitter") jitter = parse_scalar(value);
  else if (key == "out") out = value;
  else if (key == "quiet") quiet = parse_bool(value);
  else if (key == "field") field = value;
  else if (key == "probes") probes = static_cast<int>(parse_scalar(value));
  else if (key == "face") boundary_face = static_cast<int>(parse_scalar(value));
  else if (key == "rho_list") rho_list = parse_scalar_list(value);
  else if (key == "rate_value_min") rate_value_min = parse_scalar(value);
  else if (key == "rate_value_max") rate_value_max = parse_scalar(value);
  else if (key == "rate_grad_min") rate_grad_min = parse_scalar(value);
  else if (key == "rate_grad_max") rate_grad_max = parse_scalar(value);
  else if (key == "inject_fault") inject_fault = parse_bool(value);
  else throw IoError("config: unknown key '" + key + "'");
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  RunConfig cfg;
  std::istringstream in(read_text_file(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw IoError("config: line " + std::to_string(line_no) +
                    " is not 'key = value'");
    }
    cfg.set(t.substr(0, eq), t.substr(eq + 1));
  }
  return cfg;
}

}  // namespace lme
