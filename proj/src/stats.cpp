#include "comconceal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "comconceal/errors.hpp"
#include "comconceal/graph_io.hpp"

namespace comconceal {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string records_csv_header() {
  return "mu,sigma_c,beta_b,p,method,realization,target,m1,m2,ecs,q_before,q_after,"
         "centroid_sq_dist,community_size,inter_intra_ratio,mean_degree,community_degree,"
         "mean_betweenness,community_betweenness,mean_closeness,community_closeness,"
         "exhausted_del,exhausted_add";
}

std::string record_to_csv(const ExperimentRecord& r) {
  std::ostringstream os;
  os << format_double(r.mu) << ',' << format_double(r.sigma_c) << ',' << format_double(r.beta_b)
     << ',' << format_double(r.p) << ',' << r.method << ',' << r.realization << ',' << r.target
     << ',' << format_double(r.m1) << ',' << format_double(r.m2) << ',' << format_double(r.ecs)
     << ',' << format_double(r.q_before) << ',' << format_double(r.q_after) << ','
     << format_double(r.desc.avg_centroid_sq_distance) << ',' << r.desc.community_size << ','
     << (r.desc.inter_intra_defined ? format_double(r.desc.inter_intra_ratio) : std::string())
     << ',' << format_double(r.desc.mean_degree) << ',' << format_double(r.desc.community_degree)
     << ',' << format_double(r.desc.mean_betweenness) << ','
     << format_double(r.desc.community_betweenness) << ',' << format_double(r.desc.mean_closeness)
     << ',' << format_double(r.desc.community_closeness) << ',' << (r.exhausted_del ? 1 : 0) << ','
     << (r.exhausted_add ? 1 : 0);
  return os.str();
}

ExperimentRecord record_from_csv(const std::string& line, long line_no) {
  const auto f = split_csv(line);
  if (f.size() != 23) fail(Errc::ParseError, "records line " + std::to_string(line_no) + ": expected 23 fields");
  ExperimentRecord r;
  auto num = [&](int i) { return parse_double(f[i], "records", line_no); };
  r.mu = num(0);
  r.sigma_c = num(1);
  r.beta_b = num(2);
  r.p = num(3);
  r.method = f[4];
  r.realization = static_cast<long>(num(5));
  r.target = static_cast<int>(num(6));
  r.m1 = num(7);
  r.m2 = num(8);
  r.ecs = num(9);
  r.q_before = num(10);
  r.q_after = num(11);
  r.desc.avg_centroid_sq_distance = num(12);
  r.desc.community_size = static_cast<long>(num(13));
  if (f[14].empty()) {
    r.desc.inter_intra_defined = false;
    r.desc.inter_intra_ratio = 0.0;
  } else {
    r.desc.inter_intra_defined = true;
    r.desc.inter_intra_ratio = num(14);
  }
  r.desc.mean_degree = num(15);
  r.desc.community_degree = num(16);
  r.desc.mean_betweenness = num(17);
  r.desc.community_betweenness = num(18);
  r.desc.mean_closeness = num(19);
  r.desc.community_closeness = num(20);
  r.exhausted_del = num(21) != 0.0;
  r.exhausted_add = num(22) != 0.0;
  return r;
}

std::vector<ExperimentRecord> load_records(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Errc::IoError, "cannot open " + path);
  std::string line;
  long line_no = 0;
  std::vector<ExperimentRecord> out;
  while (std::getline(f, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line == records_csv_header()) continue;
    out.push_back(record_from_csv(line, line_no));
  }
  return out;
}

void save_records(const std::vector<ExperimentRecord>& records, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Errc::IoError, "cannot open " + path);
  f << records_csv_header() << "\n";
  for (const auto& r : records) f << record_to_csv(r) << "\n";
}

double relative_improvement(double m_fcom, double m_dice) {
  if (m_dice == 0.0) fail(Errc::ZeroBaseline, "DICE baseline is zero");
  return (m_fcom - m_dice) / m_dice * 100.0;
}

std::vector<ImprovementCell> mean_relative_improvement(
    const std::vector<ExperimentRecord>& records) {
  // Pair key within a (mu, sigma_c) cell.
  struct PairVals {
    double dice_m1 = 0, dice_m2 = 0, fcom_m1 = 0, fcom_m2 = 0;
    bool has_dice = false, has_fcom = false;
  };
  using CellKey = std::pair<double, double>;
  using PairKey = std::tuple<double, double, long, int>;  // beta_b, p, realization, target
  std::map<CellKey, std::map<PairKey, PairVals>> cells;
  for (const auto& r : records) {
    auto& pv = cells[{r.mu, r.sigma_c}][{r.beta_b, r.p, r.realization, r.target}];
    if (r.method == "dice") {
      pv.dice_m1 = r.m1;
      pv.dice_m2 = r.m2;
      pv.has_dice = true;
    } else if (r.method == "fcom-dice") {
      pv.fcom_m1 = r.m1;
      pv.fcom_m2 = r.m2;
      pv.has_fcom = true;
    }
  }

  std::vector<ImprovementCell> out;
  for (const auto& [key, pairs] : cells) {
    ImprovementCell cell;
    cell.mu = key.first;
    cell.sigma_c = key.second;
    std::vector<double> dm1, dm2;
    for (const auto& [pk, pv] : pairs) {
      if (!pv.has_dice || !pv.has_fcom)
        fail(Errc::UnpairedRows, "missing dice/fcom-dice pair in cell");
      if (pv.dice_m1 == 0.0)
        ++cell.zero_baseline_m1;
      else
        dm1.push_back(relative_improvement(pv.fcom_m1, pv.dice_m1));
      if (pv.dice_m2 == 0.0)
        ++cell.zero_baseline_m2;
      else
        dm2.push_back(relative_improvement(pv.fcom_m2, pv.dice_m2));
    }
    cell.pairs_m1 = static_cast<long>(dm1.size());
    cell.pairs_m2 = static_cast<long>(dm2.size());
    if (!dm1.empty()) {
      cell.mean_dm1 = std::accumulate(dm1.begin(), dm1.end(), 0.0) / dm1.size();
      cell.median_dm1 = median_of(dm1);
    }
    if (!dm2.empty()) {
      cell.mean_dm2 = std::accumulate(dm2.begin(), dm2.end(), 0.0) / dm2.size();
      cell.median_dm2 = median_of(dm2);
    }
    out.push_back(cell);
  }
  return out;
}

double rate_of_change(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 2) fail(Errc::TooFewPoints, "rate_of_change needs >= 2 points");
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (!(series[i].first > series[i - 1].first))
      fail(Errc::TooFewPoints, "abscissa must be strictly increasing");
  }
  double sum = 0.0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    sum += (series[i].second - series[i - 1].second) / (series[i].first - series[i - 1].first);
  }
  return sum / static_cast<double>(series.size() - 1);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

JtResult jonckheere_terpstra(const std::vector<std::vector<double>>& groups, Trend direction) {
  if (groups.size() < 2) fail(Errc::DegenerateGroups, "need >= 2 groups");
  for (const auto& g : groups) {
    if (g.empty()) fail(Errc::DegenerateGroups, "empty group");
  }
  double jt = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      for (double x : groups[i]) {
        for (double y : groups[j]) {
          if (x < y)
            jt += 1.0;
          else if (x == y)
            jt += 0.5;
        }
      }
    }
  }
  double n_total = 0.0, sum_sq = 0.0, sum_cube_term = 0.0;
  for (const auto& g : groups) {
    const double ni = static_cast<double>(g.size());
    n_total += ni;
    sum_sq += ni * ni;
    sum_cube_term += ni * ni * (2.0 * ni + 3.0);
  }
  const double mean = (n_total * n_total - sum_sq) / 4.0;
  const double var = (n_total * n_total * (2.0 * n_total + 3.0) - sum_cube_term) / 72.0;
  if (var <= 0.0) fail(Errc::DegenerateGroups, "zero-variance configuration");
  double z = (jt - mean) / std::sqrt(var);
  if (direction == Trend::Decreasing) z = -z;
  JtResult out;
  out.statistic = jt;
  out.z = z;
  out.p_one_sided = normal_sf(z);
  return out;
}

double stouffer_combine(const std::vector<double>& z_values) {
  if (z_values.empty()) fail(Errc::EmptyInput, "stouffer of empty list");
  const double sum = std::accumulate(z_values.begin(), z_values.end(), 0.0);
  return sum / std::sqrt(static_cast<double>(z_values.size()));
}

double sign_test_p(long wins, long losses) {
  const long n = wins + losses;
  if (n == 0) return 1.0;
  // P(X >= wins) for X ~ Binomial(n, 1/2), summed in log space.
  double p = 0.0;
  for (long x = wins; x <= n; ++x) {
    const double log_term = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) -
                            std::lgamma(n - x + 1.0) - n * std::log(2.0);
    p += std::exp(log_term);
  }
  return std::min(p, 1.0);
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) fail(Errc::TooFewPoints, "spearman needs paired data");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cov += (rx[i] - mx) * (ry[i] - my);
    vx += (rx[i] - mx) * (rx[i] - mx);
    vy += (ry[i] - my) * (ry[i] - my);
  }
  if (vx == 0.0 || vy == 0.0) fail(Errc::DegenerateGroups, "constant ranks");
  return cov / std::sqrt(vx * vy);
}

void export_descriptors(const std::vector<ExperimentRecord>& records, const std::string& path) {
  if (records.empty()) fail(Errc::EmptyInput, "no records to export");
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Errc::IoError, "cannot open " + path);
  f << "mu,sigma_c,beta_b,p,method,realization,target,centroid_sq_dist,community_size,"
       "inter_intra_ratio,mean_degree,community_degree,mean_betweenness,community_betweenness,"
       "mean_closeness,community_closeness,m1,m2\n";
  for (const auto& r : records) {
    f << format_double(r.mu) << ',' << format_double(r.sigma_c) << ',' << format_double(r.beta_b)
      << ',' << format_double(r.p) << ',' << r.method << ',' << r.realization << ',' << r.target
      << ',' << format_double(r.desc.avg_centroid_sq_distance) << ',' << r.desc.community_size
      << ','
      << (r.desc.inter_intra_defined ? format_double(r.desc.inter_intra_ratio) : std::string())
      << ',' << format_double(r.desc.mean_degree) << ',' << format_double(r.desc.community_degree)
      << ',' << format_double(r.desc.mean_betweenness) << ','
      << format_double(r.desc.community_betweenness) << ','
      << format_double(r.desc.mean_closeness) << ',' << format_double(r.desc.community_closeness)
      << ',' << format_double(r.m1) << ',' << format_double(r.m2) << "\n";
  }
}

}  // namespace comconceal
