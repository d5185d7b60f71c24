#include "hlr/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace hlr::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

const char* axis_name(int a) { return a == 0 ? "x" : (a == 1 ? "y" : "z"); }

int axis_from_name(const std::string& s) {
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  throw std::runtime_error("bad axis '" + s + "'");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return f;
}

}  // namespace

void write_node_csv(const std::string& path, const NodeField& f) {
  auto out = open_out(path);
  const GridSpec& g = f.spec;
  out << (g.dim == 2 ? "i,j,value\n" : "i,j,k,value\n");
  for (int k = 0; k < g.cells[2]; ++k)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int i = 0; i < g.cells[0]; ++i) {
        out << i << ',' << j;
        if (g.dim == 3) out << ',' << k;
        out << ',' << format_double(f.at(i, j, k)) << '\n';
      }
}

void write_staggered_csv(const std::string& path, const StaggeredField& E,
                         int axis) {
  auto out = open_out(path);
  const GridSpec& g = E.spec;
  out << (g.dim == 2 ? "axis,i,j,value\n" : "axis,i,j,k,value\n");
  for (int k = 0; k < g.cells[2]; ++k)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int i = 0; i < g.cells[0]; ++i) {
        out << axis_name(axis) << ',' << i << ',' << j;
        if (g.dim == 3) out << ',' << k;
        out << ',' << format_double(E.comp[axis][g.idx(i, j, k)]) << '\n';
      }
}

NodeField read_node_csv(const std::string& path, const GridSpec& spec) {
  auto in = open_in(path);
  NodeField f(spec);
  std::string line;
  std::getline(in, line);  // header
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    int idx[3] = {0, 0, 0};
    try {
      for (int a = 0; a < spec.dim; ++a) {
        std::getline(ss, tok, ',');
        idx[a] = std::stoi(tok);
      }
      std::getline(ss, tok, ',');
      f.at(spec.wrap(0, idx[0]), spec.wrap(1, idx[1]), spec.wrap(2, idx[2])) =
          std::stod(tok);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": malformed node CSV row");
    }
  }
  return f;
}

StaggeredField read_staggered_csv(const std::string& path,
                                  const GridSpec& spec,
                                  StaggeredField existing) {
  auto in = open_in(path);
  StaggeredField E =
      (existing.spec == spec) ? std::move(existing) : StaggeredField(spec);
  std::string line;
  std::getline(in, line);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    try {
      std::getline(ss, tok, ',');
      int axis = axis_from_name(tok);
      int idx[3] = {0, 0, 0};
      for (int a = 0; a < spec.dim; ++a) {
        std::getline(ss, tok, ',');
        idx[a] = std::stoi(tok);
      }
      std::getline(ss, tok, ',');
      E.comp[axis][spec.idx(spec.wrap(0, idx[0]), spec.wrap(1, idx[1]),
                            spec.wrap(2, idx[2]))] = std::stod(tok);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": malformed staggered CSV row");
    }
  }
  return E;
}

std::string report_to_json(const SolveReport& rep) {
  nlohmann::ordered_json j;
  j["passes"] = rep.passes;
  j["energy_history"] = rep.energy_history;
  j["gauss_residual"] = rep.gauss_residual;
  j["curl_residual"] = rep.curl_residual;
  j["avg_field"] = std::vector<double>(
      rep.avg_field.begin(),
      rep.avg_field.begin() + std::clamp(rep.dim, 1, 3));
  j["wall_time_ms"] = rep.wall_time_ms;
  if (rep.error_inf)
    j["error_inf"] = *rep.error_inf;
  else
    j["error_inf"] = nullptr;
  return j.dump(2) + "\n";
}

void write_report_json(const std::string& path, const SolveReport& rep) {
  auto out = open_out(path);
  out << report_to_json(rep);
}

std::map<std::string, std::string> parse_config_text(const std::string& text,
                                                     const std::string& origin) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": empty key");
    kv[key] = val;
  }
  return kv;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  auto in = open_in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace hlr::io
