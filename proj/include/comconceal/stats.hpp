#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "comconceal/metrics.hpp"

namespace comconceal {

/// One evaluated sweep cell. The (mu, sigma_c, beta_b, p, method,
/// realization, target) tuple is the unique key.
struct ExperimentRecord {
  double mu = 0.0;
  double sigma_c = 0.0;
  double beta_b = 0.0;
  double p = 0.0;
  std::string method;  // "dice" | "fcom-dice"
  long realization = 0;
  int target = 0;
  double m1 = 0.0;
  double m2 = 0.0;
  double ecs = 0.0;
  double q_before = 0.0;
  double q_after = 0.0;
  DescriptorRecord desc;
  bool exhausted_del = false;
  bool exhausted_add = false;
};

std::string records_csv_header();
std::string record_to_csv(const ExperimentRecord& r);
ExperimentRecord record_from_csv(const std::string& line, long line_no);

std::vector<ExperimentRecord> load_records(const std::string& path);
void save_records(const std::vector<ExperimentRecord>& records, const std::string& path);

/// Percent relative difference ((m_fcom - m_dice) / m_dice) * 100. Throws
/// ZeroBaseline when the DICE value is 0.
double relative_improvement(double m_fcom, double m_dice);

struct ImprovementCell {
  double mu = 0.0;
  double sigma_c = 0.0;
  double mean_dm1 = 0.0, median_dm1 = 0.0;
  double mean_dm2 = 0.0, median_dm2 = 0.0;
  long pairs_m1 = 0, pairs_m2 = 0;
  long zero_baseline_m1 = 0, zero_baseline_m2 = 0;
};

/// Mean and median relative improvement of FCom-DICE over DICE per
/// (mu, sigma_c) cell, paired on (beta_b, p, realization, target). Rows with
/// a zero DICE baseline are excluded and counted separately.
std::vector<ImprovementCell> mean_relative_improvement(const std::vector<ExperimentRecord>& records);

/// Mean of successive finite differences over a series ordered by strictly
/// increasing abscissa.
double rate_of_change(const std::vector<std::pair<double, double>>& series);

enum class Trend { Increasing, Decreasing };

struct JtResult {
  double statistic = 0.0;
  double z = 0.0;
  double p_one_sided = 1.0;
};

/// One-sided Jonckheere-Terpstra trend test over ordered groups. Ties count
/// 1/2; z uses the tie-free normal approximation.
JtResult jonckheere_terpstra(const std::vector<std::vector<double>>& groups, Trend direction);

/// Stouffer combination sum(z) / sqrt(N).
double stouffer_combine(const std::vector<double>& z_values);

/// One-sided exact sign test: probability of >= `wins` successes out of
/// `wins + losses` fair coin flips (ties already removed by the caller).
double sign_test_p(long wins, long losses);

/// Spearman rank correlation with average ranks on ties.
double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys);

double normal_sf(double z);  // 1 - Phi(z)

/// One row per (target, configuration) with the structural descriptors and
/// the M1/M2 outcomes; undefined optional fields become empty cells.
void export_descriptors(const std::vector<ExperimentRecord>& records, const std::string& path);

}  // namespace comconceal
