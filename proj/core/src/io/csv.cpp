#include "wavinv/io/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "wavinv/error.hpp"

namespace wavinv::io {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && *b == ' ') ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\r')) --e;
  const auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) throw IoError("cannot parse number '" + s + "' in " + what);
  return v;
}

using Header = std::map<std::string, std::string>;

Header read_header(std::istream& in, const std::string& kind) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty " + kind + " file");
  std::istringstream ls(line);
  std::string hash, tag;
  ls >> hash >> tag;
  if (hash != "#" || tag != kind) throw IoError("missing '# " + kind + "' header line");
  Header h;
  std::string tok;
  while (ls >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw IoError("bad header token '" + tok + "'");
    h[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return h;
}

const std::string& need(const Header& h, const std::string& key, const std::string& kind) {
  const auto it = h.find(key);
  if (it == h.end()) throw IoError(kind + " header lacks '" + key + "'");
  return it->second;
}

std::vector<std::vector<double>> read_rows(std::istream& in, const std::string& kind) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(parse_double(cell, kind));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_rows(std::ostream& out, const Array2D<double>& a) {
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (c) out << ',';
      out << format_double(a(r, c));
    }
    out << '\n';
  }
}

Array2D<double> to_array(const std::vector<std::vector<double>>& rows, std::size_t R, std::size_t C,
                         const std::string& kind) {
  if (rows.size() != R) throw IoError(kind + ": header says " + std::to_string(R) + " rows, found " +
                                      std::to_string(rows.size()));
  Array2D<double> a(R, C);
  for (std::size_t r = 0; r < R; ++r) {
    if (rows[r].size() != C)
      throw IoError(kind + ": row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                    " values, expected " + std::to_string(C));
    for (std::size_t c = 0; c < C; ++c) a(r, c) = rows[r][c];
  }
  return a;
}

std::size_t parse_count(const std::string& s, const std::string& what) {
  const double v = parse_double(s, what);
  if (v < 1 || v != double(std::size_t(v))) throw IoError("bad count '" + s + "' in " + what);
  return std::size_t(v);
}

template <typename F>
auto with_file_in(const std::string& path, F f) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return f(in);
}

template <typename F>
void with_file_out(const std::string& path, F f) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  f(out);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace

void write_field_csv(std::ostream& out, const GridField2D& f) {
  const auto& d = f.domain;
  out << "# field rows=" << f.rows() << " cols=" << f.cols()
      << " sampling=" << (f.sampling == Sampling::nodal ? "nodal" : "periodic") << " x0=" << format_double(d.x0)
      << " x1=" << format_double(d.x1) << " y0=" << format_double(d.y0) << " y1=" << format_double(d.y1) << '\n';
  write_rows(out, f.values);
}

GridField2D read_field_csv(std::istream& in) {
  const Header h = read_header(in, "field");
  GridField2D f;
  const std::size_t R = parse_count(need(h, "rows", "field"), "field header");
  const std::size_t C = parse_count(need(h, "cols", "field"), "field header");
  const auto& s = need(h, "sampling", "field");
  if (s == "nodal") f.sampling = Sampling::nodal;
  else if (s == "periodic") f.sampling = Sampling::periodic;
  else throw IoError("field sampling must be nodal or periodic, got '" + s + "'");
  f.domain = {parse_double(need(h, "x0", "field"), "field header"), parse_double(need(h, "x1", "field"), "field header"),
              parse_double(need(h, "y0", "field"), "field header"), parse_double(need(h, "y1", "field"), "field header")};
  f.values = to_array(read_rows(in, "field"), R, C, "field");
  return f;
}

void write_field_csv(const std::string& path, const GridField2D& f) {
  with_file_out(path, [&](std::ostream& o) { write_field_csv(o, f); });
}
GridField2D read_field_csv(const std::string& path) {
  return with_file_in(path, [](std::istream& i) { return read_field_csv(i); });
}

void write_observation_csv(std::ostream& out, const darcy::SensorObservation& obs) {
  obs.validate();
  out << "# observation grid=" << obs.grid_size << " noise_fraction=" << format_double(obs.noise_fraction)
      << " noise_sigma=" << format_double(obs.noise_sigma) << " seed=" << obs.seed << '\n';
  const auto n = std::size_t(obs.grid_size);
  Array2D<double> a(n, n);
  std::copy(obs.readings.begin(), obs.readings.end(), a.storage().begin());
  write_rows(out, a);
}

darcy::SensorObservation read_observation_csv(std::istream& in) {
  const Header h = read_header(in, "observation");
  darcy::SensorObservation obs;
  const std::size_t n = parse_count(need(h, "grid", "observation"), "observation header");
  obs.grid_size = int(n);
  if (h.count("noise_fraction")) obs.noise_fraction = parse_double(h.at("noise_fraction"), "observation header");
  if (h.count("noise_sigma")) obs.noise_sigma = parse_double(h.at("noise_sigma"), "observation header");
  if (h.count("seed")) {
    const auto& s = h.at("seed");
    const auto r = std::from_chars(s.data(), s.data() + s.size(), obs.seed);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw IoError("bad seed '" + s + "'");
  }
  obs.readings = to_array(read_rows(in, "observation"), n, n, "observation").storage();
  obs.validate();
  return obs;
}

void write_observation_csv(const std::string& path, const darcy::SensorObservation& obs) {
  with_file_out(path, [&](std::ostream& o) { write_observation_csv(o, obs); });
}
darcy::SensorObservation read_observation_csv(const std::string& path) {
  return with_file_in(path, [](std::istream& i) { return read_observation_csv(i); });
}

}  // namespace wavinv::io
