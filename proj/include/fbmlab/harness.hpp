#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fbmlab/inference.hpp"
#include "fbmlab/market.hpp"
#include "fbmlab/pricing.hpp"
#include "fbmlab/stats.hpp"
#include "fbmlab/types.hpp"
#include "fbmlab/volatility.hpp"

namespace fbmlab {

// Reproduction harness: the constant-volatility estimator tables (1-3), the
// deterministic theta tables (4-5), and the CLT normality diagnostics.
//
// Determinism contract: a (config, seed) pair produces byte-identical output.
// Every replication derives its stream from (seed, cell, replication), so the
// result is independent of worker count and scheduling.

enum class TableKind { Table1, Table2, Table3, Table4, Table5, Custom };

enum class ReportFormat { Csv, Json };

struct ExperimentConfig {
  TableKind kind = TableKind::Custom;
  std::vector<double> hurst_list;
  std::vector<double> sigma2_list;          // constant-volatility cells
  std::optional<VolatilitySpec> vol;        // time-varying cells
  Index n = 1000;
  Index replications = 200;
  std::uint64_t seed = 1;
  std::string output;
  ReportFormat format = ReportFormat::Csv;
  int threads = 0;  // 0 = hardware concurrency
  bool sweep = false;  // tables 4/5: add rows for N in {250, 500, 1000, 2000, 4000}

  void validate() const;

  // fills table-specific defaults (hurst_list, sigma2_list / family)
  static ExperimentConfig for_table(TableKind kind);
};

struct CellSummary {
  std::string table;   // "1".."5" or "custom"
  double hurst = 0.0;
  std::string label;   // sigma^2 value or volatility family
  Index n = 0;
  Index replications = 0;
  double mean = 0.0;
  double var = 0.0;
  double mse = 0.0;
  double target = 0.0;
  double asyv = 0.0;
  std::optional<double> asyv_unhalved;  // the rejected lag-weight variant, JSON only
  std::optional<double> ks_stat;
  std::optional<double> ks_p;
  std::uint64_t seed = 0;
  std::string note;  // only serialized to JSON
};

struct SummaryReport {
  std::vector<CellSummary> rows;
  std::uint64_t seed = 0;
  Index n = 0;
  Index replications = 0;
  std::string build_id;
};

// Tables 1-3: r constant-volatility paths per (H, sigma^2) cell, estimator
// moments against the sigma^2 target.  Tables 4-5: deterministic tilde_theta
// and theta per (H, family) cell; seed and replications do not enter.
SummaryReport run_table(const ExperimentConfig& config);

// Normalized-statistic normality check per cell: one-sample KS against the
// standard normal over `replications` draws.  Cells with H >= 3/4 are outside
// the CLT regime: they are skipped and flagged in the notes.
SummaryReport run_clt_diagnostic(const ExperimentConfig& config);

void write_csv(const SummaryReport& report, std::ostream& out);
void write_json(const SummaryReport& report, std::ostream& out);
void write_report_file(const SummaryReport& report, const std::string& path,
                       ReportFormat format);

// path CSV: header "t,S", 17 significant digits so values round-trip exactly
void write_path_csv(const PricePath& path, std::ostream& out);
struct PathData {
  VectorXd times;
  VectorXd prices;
};
PathData read_path_csv(std::istream& in);

std::string to_json_string(const EstimateReport& report, const std::string& note = "");
std::string to_json_string(const ThetaReport& report);
std::string to_json_string(const OptionQuote& quote);

std::string build_id();

// Flat key = value configuration text ("#" comments allowed).  Keys mirror
// the ExperimentConfig fields: table, hurst_list, n, replications, seed,
// output, format, threads, sweep.  Command-line flags override file values.
std::map<std::string, std::string> read_flat_config(const std::string& path);

// deterministic worker pool: fn(rep) for rep in [0, count)
void for_each_replication(Index count, int threads, const std::function<void(Index)>& fn);

}  // namespace fbmlab
