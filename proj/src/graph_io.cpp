#include "comconceal/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "comconceal/errors.hpp"

namespace comconceal {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& context, long line_no) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    fail(Errc::ParseError, context + " line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

namespace {

long parse_int(const std::string& s, const std::string& context, long line_no) {
  long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(Errc::ParseError, context + " line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Errc::IoError, "cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Errc::IoError, "cannot open for reading: " + path);
  return f;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

void save_edge_list(const Graph& g, const std::string& path) {
  auto f = open_out(path);
  f << "# n=" << g.num_nodes() << "\n";
  for (const auto& [u, v] : g.edges()) f << u << "\t" << v << "\n";
}

Graph load_edge_list(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  long line_no = 0;
  long n_header = -1;
  std::vector<Edge> edges;
  long max_id = -1;
  while (std::getline(f, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("n=");
      if (pos != std::string::npos) {
        std::string rest = line.substr(pos + 2);
        n_header = parse_int(rest, path, line_no);
      }
      continue;
    }
    auto parts = split(line, '\t');
    if (parts.size() != 2)
      fail(Errc::ParseError, path + " line " + std::to_string(line_no) + ": expected 'u<TAB>v'");
    long u = parse_int(parts[0], path, line_no);
    long v = parse_int(parts[1], path, line_no);
    max_id = std::max({max_id, u, v});
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  const long n = n_header >= 0 ? n_header : max_id + 1;
  return Graph::from_edges(static_cast<int>(n), std::move(edges));
}

void save_features(const NodeFeatures& x, const std::string& path) {
  auto f = open_out(path);
  for (int i = 0; i < x.rows(); ++i) {
    const double* row = x.row(i);
    for (int j = 0; j < x.dim(); ++j) {
      if (j) f << ",";
      f << format_double(row[j]);
    }
    f << "\n";
  }
}

NodeFeatures load_features(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  long line_no = 0;
  std::vector<std::vector<double>> rows;
  int dim = -1;
  while (std::getline(f, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto parts = split(line, ',');
    if (dim == -1) dim = static_cast<int>(parts.size());
    if (static_cast<int>(parts.size()) != dim)
      fail(Errc::DimensionMismatch,
           path + " line " + std::to_string(line_no) + ": expected " + std::to_string(dim) + " columns");
    std::vector<double> row;
    row.reserve(parts.size());
    for (const auto& p : parts) row.push_back(parse_double(p, path, line_no));
    rows.push_back(std::move(row));
  }
  NodeFeatures x(static_cast<int>(rows.size()), dim < 0 ? 0 : dim);
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.dim(); ++j) x.row(i)[j] = rows[i][j];
  }
  return x;
}

void save_partition(const Partition& p, const std::string& path) {
  auto f = open_out(path);
  for (int u = 0; u < p.size(); ++u) f << u << "\t" << p.labels[u] << "\n";
}

Partition load_partition(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  long line_no = 0;
  std::map<long, long> entries;
  while (std::getline(f, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    auto parts = split(line, '\t');
    if (parts.size() != 2)
      fail(Errc::ParseError, path + " line " + std::to_string(line_no) + ": expected '<node><TAB><label>'");
    long u = parse_int(parts[0], path, line_no);
    long c = parse_int(parts[1], path, line_no);
    if (entries.count(u))
      fail(Errc::ParseError, path + " line " + std::to_string(line_no) + ": repeated node " + std::to_string(u));
    entries[u] = c;
  }
  std::vector<int> raw(entries.size());
  long expect = 0;
  for (const auto& [u, c] : entries) {
    if (u != expect)
      fail(Errc::ParseError, path + ": missing node " + std::to_string(expect));
    raw[u] = static_cast<int>(c);
    ++expect;
  }
  return Partition::from_labels(raw);
}

FlexibleLoadResult load_edge_list_flexible(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  long line_no = 0;
  std::vector<std::pair<std::string, std::string>> raw_edges;
  std::set<std::string> ids;
  bool all_numeric = true;
  while (std::getline(f, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    // Accept tab, comma or space separated pairs.
    std::string norm = line;
    std::replace(norm.begin(), norm.end(), ',', ' ');
    std::replace(norm.begin(), norm.end(), '\t', ' ');
    std::istringstream ss(norm);
    std::string a, b, extra;
    if (!(ss >> a >> b))
      fail(Errc::ParseError, path + " line " + std::to_string(line_no) + ": expected two ids");
    ids.insert(a);
    ids.insert(b);
    for (const std::string& tok : {a, b}) {
      long tmp;
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), tmp);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) all_numeric = false;
    }
    raw_edges.emplace_back(std::move(a), std::move(b));
  }

  FlexibleLoadResult out;
  std::map<std::string, int> to_new;
  if (all_numeric) {
    // Keep numeric order rather than lexicographic ("10" < "9" otherwise).
    std::vector<long> nums;
    nums.reserve(ids.size());
    for (const auto& s : ids) {
      long v = 0;
      std::from_chars(s.data(), s.data() + s.size(), v);
      nums.push_back(v);
    }
    std::sort(nums.begin(), nums.end());
    for (long v : nums) {
      std::string s = std::to_string(v);
      to_new[s] = static_cast<int>(out.id_map.size());
      out.id_map.push_back(s);
    }
  } else {
    for (const auto& s : ids) {
      to_new[s] = static_cast<int>(out.id_map.size());
      out.id_map.push_back(s);
    }
  }

  std::set<Edge> unique_edges;
  for (const auto& [a, b] : raw_edges) {
    const int u = to_new[a];
    const int v = to_new[b];
    if (u == v) {
      ++out.self_loops_dropped;
      continue;
    }
    if (!unique_edges.insert(make_edge(u, v)).second) ++out.duplicates_collapsed;
  }
  out.graph = Graph::from_edges(static_cast<int>(out.id_map.size()),
                                std::vector<Edge>(unique_edges.begin(), unique_edges.end()));
  return out;
}

void save_id_map(const std::vector<std::string>& id_map, const std::string& path) {
  auto f = open_out(path);
  for (std::size_t i = 0; i < id_map.size(); ++i) f << i << "\t" << id_map[i] << "\n";
}

}  // namespace comconceal
