#include "fid/dataio.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fid {
namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_finite(const std::string& tok, int line_no) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": not a number: '" + tok + "'");
  }
  if (pos != tok.size() || !std::isfinite(v))
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": value must be finite: '" + tok + "'");
  return v;
}

}  // namespace

std::vector<double> read_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> out;
  std::string line;
  int line_no = 0;
  bool header_checked = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = strip(line);
    if (t.empty() || t[0] == '#') continue;
    if (!header_checked) {
      header_checked = true;
      if (t == "value") continue;  // CSV header form
    }
    out.push_back(parse_finite(t, line_no));
  }
  if (out.empty()) throw std::runtime_error(path + ": no observations");
  return out;
}

std::pair<std::vector<double>, std::vector<double>> read_groups(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> g1, g2;
  std::string line;
  int line_no = 0;
  bool header_checked = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = strip(line);
    if (t.empty() || t[0] == '#') continue;
    if (!header_checked) {
      header_checked = true;
      if (t == "group,value") continue;
      throw std::runtime_error(path + ": expected header 'group,value'");
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected 'group,value'");
    const std::string g = strip(t.substr(0, comma));
    const double v = parse_finite(strip(t.substr(comma + 1)), line_no);
    if (g == "1")
      g1.push_back(v);
    else if (g == "2")
      g2.push_back(v);
    else
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": group must be 1 or 2");
  }
  if (g1.empty() || g2.empty())
    throw std::runtime_error(path + ": both groups need observations");
  return {g1, g2};
}

}  // namespace fid
