#include "fbmlab/harness.hpp"

#include <algorithm>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "fbmlab/rng.hpp"

#ifndef FBMLAB_BUILD_ID
#define FBMLAB_BUILD_ID "unknown"
#endif

namespace fbmlab {

using json = nlohmann::ordered_json;

std::string build_id() { return FBMLAB_BUILD_ID; }

std::map<std::string, std::string> read_flat_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config: expected key = value, got '" + trim(line) + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("config: empty key in '" + line + "'");
    out[key] = value;
  }
  return out;
}

namespace {

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// RFC 4180 quoting for fields that may carry commas (volatility labels)
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string table_name(TableKind kind) {
  switch (kind) {
    case TableKind::Table1: return "1";
    case TableKind::Table2: return "2";
    case TableKind::Table3: return "3";
    case TableKind::Table4: return "4";
    case TableKind::Table5: return "5";
    case TableKind::Custom: return "custom";
  }
  return "custom";
}

constexpr double kTableHurst[] = {0.55, 0.65, 0.74};

}  // namespace

void ExperimentConfig::validate() const {
  if (replications < 1) throw config_error("config: replications must be >= 1");
  if (n < 2) throw config_error("config: n must be >= 2");
  if (hurst_list.empty()) throw config_error("config: hurst_list must not be empty");
  for (double h : hurst_list)
    if (!(h > 0.0 && h < 1.0))
      throw config_error("config: hurst_list entries must lie in (0, 1)");
  const bool needs_cells = kind == TableKind::Custom;
  if (needs_cells && sigma2_list.empty() && !vol)
    throw config_error("config: custom runs need sigma2_list or vol");
  for (double s2 : sigma2_list)
    if (!(s2 > 0.0)) throw config_error("config: sigma2_list entries must be > 0");
}

ExperimentConfig ExperimentConfig::for_table(TableKind kind) {
  ExperimentConfig config;
  config.kind = kind;
  config.hurst_list.assign(std::begin(kTableHurst), std::end(kTableHurst));
  switch (kind) {
    case TableKind::Table1: config.sigma2_list = {0.4}; break;
    case TableKind::Table2: config.sigma2_list = {1.6}; break;
    case TableKind::Table3: config.sigma2_list = {6.4}; break;
    case TableKind::Table4:
    case TableKind::Table5:
    case TableKind::Custom: break;
  }
  return config;
}

void for_each_replication(Index count, int threads, const std::function<void(Index)>& fn) {
  int workers = threads > 0 ? threads
                            : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, 16);
  if (workers == 1 || count < 2) {
    for (Index rep = 0; rep < count; ++rep) fn(rep);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (Index rep = w; rep < count; rep += workers) fn(rep);
    });
  }
  for (auto& t : pool) t.join();
}

namespace {

CellSummary const_sigma_cell(const ExperimentConfig& config, std::string table,
                             double hurst_value, double sigma2, Index cell_index,
                             bool with_ks) {
  const HurstParameter hurst(hurst_value);
  const UniformGrid grid(config.n);
  const FgnCirculantSampler sampler(grid, hurst);
  const double sigma = std::sqrt(sigma2);
  const Index r = config.replications;

  VectorXd estimates(r);
  for_each_replication(r, config.threads, [&](Index rep) {
    const std::uint64_t s = derive_stream(config.seed, cell_index, rep);
    const PricePath path = simulate_const(1.0, sigma, sampler, s);
    estimates[rep] = qv_estimate(path, hurst);
  });

  CellSummary cell;
  cell.table = std::move(table);
  cell.hurst = hurst_value;
  cell.label = fmt9(sigma2);
  cell.n = config.n;
  cell.replications = r;
  cell.mean = mean(estimates);
  cell.var = variance(estimates);
  cell.target = sigma2;
  cell.mse = mean_squared_error(estimates, cell.target);
  cell.asyv = asymptotic_variance_const(sigma2, hurst);
  cell.seed = config.seed;
  if (with_ks) {
    // both lag-weight normalizations are recorded so the replication variance
    // can arbitrate between them
    cell.asyv_unhalved = asymptotic_variance_const_unhalved(sigma2, hurst);
    VectorXd z(r);
    for (Index i = 0; i < r; ++i)
      z[i] = normalized_statistic(estimates[i], sigma2, cell.asyv, config.n);
    const KsResult ks = ks_test_standard_normal(z);
    cell.ks_stat = ks.statistic;
    cell.ks_p = ks.p_value;
  }
  return cell;
}

VolatilitySpec table_family(TableKind kind, double sigma) {
  return kind == TableKind::Table4 ? VolatilitySpec::power_law(sigma, 0.3)
                                   : VolatilitySpec::power_sum(sigma, 0.8, 2.0);
}

CellSummary theta_cell_summary(const std::string& table, double hurst_value,
                               const VolatilitySpec& vol, Index n) {
  const HurstParameter hurst(hurst_value);
  const UniformGrid grid(n);
  const ThetaReport report = theta_report(vol, grid, hurst);

  CellSummary cell;
  cell.table = table;
  cell.hurst = hurst_value;
  cell.label = vol.label();
  cell.n = n;
  cell.replications = 0;  // pure quadrature, no randomness
  cell.mean = report.tilde_theta;
  cell.var = 0.0;
  cell.mse = 0.0;
  cell.target = report.theta_total;
  if (hurst_value < 0.75) {
    cell.asyv = asymptotic_variance_tv(vol, grid, hurst);
  } else {
    cell.asyv = 0.0;
    cell.note = "outside CLT scope (H >= 3/4): asyv omitted";
  }
  cell.seed = 0;
  return cell;
}

}  // namespace

SummaryReport run_table(const ExperimentConfig& config) {
  config.validate();
  SummaryReport report;
  report.seed = config.seed;
  report.n = config.n;
  report.replications = config.replications;
  report.build_id = build_id();
  const std::string table = table_name(config.kind);

  if (config.kind == TableKind::Table4 || config.kind == TableKind::Table5) {
    std::vector<Index> sizes{config.n};
    if (config.sweep) sizes = {250, 500, 1000, 2000, 4000};
    for (double sigma : {0.4, 6.4})
      for (double h : config.hurst_list)
        for (Index n : sizes)
          report.rows.push_back(
              theta_cell_summary(table, h, table_family(config.kind, sigma), n));
    return report;
  }

  if (config.kind == TableKind::Custom && config.vol) {
    for (double h : config.hurst_list)
      report.rows.push_back(theta_cell_summary(table, h, *config.vol, config.n));
    return report;
  }

  Index cell_index = 0;
  for (double sigma2 : config.sigma2_list)
    for (double h : config.hurst_list)
      report.rows.push_back(
          const_sigma_cell(config, table, h, sigma2, cell_index++, false));
  return report;
}

SummaryReport run_clt_diagnostic(const ExperimentConfig& config) {
  config.validate();
  if (config.replications < 100)
    throw config_error(
        "config: CLT diagnostics need at least 100 replications for a usable KS test");
  SummaryReport report;
  report.seed = config.seed;
  report.n = config.n;
  report.replications = config.replications;
  report.build_id = build_id();

  Index cell_index = 0;
  auto flag_near_boundary = [](CellSummary& cell) {
    if (cell.hurst >= 0.70)
      cell.note = "near theorem boundary H=3/4, slow convergence expected";
  };

  if (config.vol) {
    // time-varying statistic X_N / sqrt(S_N) from exact eta draws
    for (double h : config.hurst_list) {
      CellSummary cell;
      cell.table = "clt-tv";
      cell.hurst = h;
      cell.label = config.vol->label();
      cell.n = config.n;
      cell.replications = config.replications;
      cell.seed = config.seed;
      if (h >= 0.75) {
        cell.note = "outside CLT scope (H >= 3/4), skipped";
        report.rows.push_back(cell);
        ++cell_index;
        continue;
      }
      const HurstParameter hurst(h);
      const UniformGrid grid(config.n);
      const EtaModel model = build_eta_model(*config.vol, grid, hurst);
      const double tilde = std::pow(grid.step(), 1.0 - hurst.two_h()) *
                           model.gram->diagonal().sum();
      const double s_n = asymptotic_variance_tv(*model.gram, grid, hurst);
      const double scale = std::pow(grid.step(), 1.0 - hurst.two_h());

      VectorXd estimates(config.replications);
      for_each_replication(config.replications, config.threads, [&](Index rep) {
        const EtaVector eta =
            sample_eta(model, derive_stream(config.seed, cell_index, rep));
        estimates[rep] = scale * eta.values.squaredNorm();
      });
      VectorXd z(config.replications);
      for (Index i = 0; i < config.replications; ++i)
        z[i] = normalized_statistic(estimates[i], tilde, s_n, config.n);
      const KsResult ks = ks_test_standard_normal(z);
      cell.mean = mean(estimates);
      cell.var = variance(estimates);
      cell.target = tilde;
      cell.mse = mean_squared_error(estimates, tilde);
      cell.asyv = s_n;
      cell.ks_stat = ks.statistic;
      cell.ks_p = ks.p_value;
      flag_near_boundary(cell);
      report.rows.push_back(cell);
      ++cell_index;
    }
    return report;
  }

  for (double sigma2 : config.sigma2_list) {
    for (double h : config.hurst_list) {
      if (h >= 0.75) {
        CellSummary cell;
        cell.table = "clt-const";
        cell.hurst = h;
        cell.label = fmt9(sigma2);
        cell.n = config.n;
        cell.replications = config.replications;
        cell.seed = config.seed;
        cell.note = "outside CLT scope (H >= 3/4), skipped";
        report.rows.push_back(cell);
        ++cell_index;
        continue;
      }
      CellSummary cell =
          const_sigma_cell(config, "clt-const", h, sigma2, cell_index++, true);
      flag_near_boundary(cell);
      report.rows.push_back(cell);
    }
  }
  return report;
}

void write_csv(const SummaryReport& report, std::ostream& out) {
  out << "table,H,sigma2_or_family,N,r,mean,var,mse,target,asyv,ks_stat,ks_p,seed\n";
  for (const auto& c : report.rows) {
    out << csv_field(c.table) << ',' << fmt9(c.hurst) << ',' << csv_field(c.label) << ','
        << c.n << ',' << c.replications << ',' << fmt9(c.mean) << ',' << fmt9(c.var)
        << ',' << fmt9(c.mse) << ',' << fmt9(c.target) << ',' << fmt9(c.asyv) << ','
        << (c.ks_stat ? fmt9(*c.ks_stat) : "") << ',' << (c.ks_p ? fmt9(*c.ks_p) : "")
        << ',' << c.seed << '\n';
  }
}

namespace {

json cell_to_json(const CellSummary& c) {
  json j;
  j["table"] = c.table;
  j["H"] = c.hurst;
  j["sigma2_or_family"] = c.label;
  j["N"] = c.n;
  j["r"] = c.replications;
  j["mean"] = c.mean;
  j["var"] = c.var;
  j["mse"] = c.mse;
  j["target"] = c.target;
  j["asyv"] = c.asyv;
  if (c.asyv_unhalved) j["asyv_unhalved"] = *c.asyv_unhalved;
  if (c.ks_stat) j["ks_stat"] = *c.ks_stat;
  if (c.ks_p) j["ks_p"] = *c.ks_p;
  j["seed"] = c.seed;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

}  // namespace

void write_json(const SummaryReport& report, std::ostream& out) {
  json j;
  j["metadata"] = {{"seed", report.seed},
                   {"n", report.n},
                   {"replications", report.replications},
                   {"build_id", report.build_id}};
  j["rows"] = json::array();
  for (const auto& c : report.rows) j["rows"].push_back(cell_to_json(c));
  out << j.dump(2) << '\n';
}

void write_report_file(const SummaryReport& report, const std::string& path,
                       ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw config_error("harness: cannot open output file '" + path + "'");
  if (format == ReportFormat::Csv)
    write_csv(report, out);
  else
    write_json(report, out);
}

void write_path_csv(const PricePath& path, std::ostream& out) {
  out << "t,S\n";
  for (Index k = 0; k < path.times.size(); ++k)
    out << fmt17(path.times[k]) << ',' << fmt17(path.prices[k]) << '\n';
}

PathData read_path_csv(std::istream& in) {
  std::vector<double> times, prices;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.find("t,") == 0 || line.find("t ,") == 0) continue;  // header
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw config_error("harness: malformed path CSV line '" + line + "'");
    try {
      times.push_back(std::stod(line.substr(0, comma)));
      prices.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw config_error("harness: malformed path CSV line '" + line + "'");
    }
  }
  if (times.size() < 2) throw config_error("harness: path CSV needs at least 2 rows");
  PathData data;
  data.times = Eigen::Map<VectorXd>(times.data(), static_cast<Index>(times.size()));
  data.prices = Eigen::Map<VectorXd>(prices.data(), static_cast<Index>(prices.size()));
  return data;
}

std::string to_json_string(const EstimateReport& report, const std::string& note) {
  json j;
  j["sigma2_hat"] = report.sigma2_hat;
  j["target"] = report.target;
  j["asymptotic_variance"] = report.asymptotic_variance;
  j["n"] = report.n;
  j["ci_low"] = report.ci_low;
  j["ci_high"] = report.ci_high;
  j["level"] = report.level;
  if (!note.empty()) j["note"] = note;
  return j.dump(2) + "\n";
}

std::string to_json_string(const ThetaReport& report) {
  json j;
  j["hurst"] = report.hurst;
  j["n"] = report.n;
  j["theta_total"] = report.theta_total;
  j["tilde_theta"] = report.tilde_theta;
  j["theta_cells"] = std::vector<double>(report.theta_cells.begin(),
                                         report.theta_cells.end());
  j["deltas"] = std::vector<double>(report.deltas.begin(), report.deltas.end());
  return j.dump(2) + "\n";
}

std::string to_json_string(const OptionQuote& quote) {
  json j;
  j["price"] = quote.price;
  j["d1"] = quote.d1;
  j["d2"] = quote.d2;
  j["spot"] = quote.spot;
  j["strike"] = quote.strike;
  j["rate_integral"] = quote.rate_integral;
  j["hurst"] = quote.hurst;
  j["t"] = quote.t;
  j["maturity"] = quote.maturity;
  j["total_variance"] = quote.total_variance;
  j["degenerate"] = quote.degenerate;
  return j.dump(2) + "\n";
}

}  // namespace fbmlab
