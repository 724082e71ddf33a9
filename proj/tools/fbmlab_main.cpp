#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fbmlab/fractional_calculus.hpp"
#include "fbmlab/harness.hpp"
#include "fbmlab/inference.hpp"
#include "fbmlab/market.hpp"
#include "fbmlab/pricing.hpp"
#include "fbmlab/volatility.hpp"

namespace {

constexpr const char* kVolHelp =
    "volatility spec: const:0.4 | pow:0.4,0.3 | powsum:0.4,0.8,2 | tab:<csv path>";

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw fbmlab::config_error("cli: cannot open output file '" + out_path + "'");
  out << text;
}

int run(int argc, char** argv) {
  using namespace fbmlab;

  CLI::App app{"fractional Brownian market simulation, volatility inference and "
               "option pricing"};
  app.require_subcommand(1);
  // the table flags use --h for the Hurst parameter, so help is --help only
  app.set_help_flag("--help", "print help and exit");
  auto add_subcommand = [&](const std::string& name, const std::string& desc) {
    auto* sub = app.add_subcommand(name, desc);
    sub->set_help_flag("--help", "print help and exit");
    return sub;
  };

  // --- simulate ---------------------------------------------------------
  auto* sim = add_subcommand("simulate", "simulate one price path to CSV (t,S)");
  double sim_h = 0.7, sim_mu = 0.0;
  Index sim_n = 1000;
  std::uint64_t sim_seed = 1;
  std::string sim_vol, sim_out;
  double sim_s0 = 1.0;
  sim->add_option("--h", sim_h, "Hurst parameter")->required();
  sim->add_option("--vol", sim_vol, kVolHelp)->required();
  sim->add_option("--n", sim_n, "grid steps")->default_val(1000);
  sim->add_option("--seed", sim_seed, "RNG seed")->required();
  sim->add_option("--mu", sim_mu, "constant drift (constant volatility only)");
  sim->add_option("--s0", sim_s0, "initial price")->default_val(1.0);
  sim->add_option("--out", sim_out, "output CSV path")->required();
  sim->callback([&] {
    const HurstParameter hurst(sim_h);
    const UniformGrid grid(sim_n);
    const VolatilitySpec vol = VolatilitySpec::parse(sim_vol);
    PricePath path = [&] {
      if (vol.kind() == VolatilitySpec::Kind::Constant)
        return simulate_const(sim_s0, vol.sigma(), hurst, grid, sim_seed, sim_mu);
      if (sim_mu != 0.0)
        throw config_error("cli: drift is only supported with constant volatility");
      return simulate_tv(sim_s0, vol, hurst, grid, sim_seed);
    }();
    std::ofstream out(sim_out);
    if (!out) throw config_error("cli: cannot open output file '" + sim_out + "'");
    write_path_csv(path, out);
  });

  // --- estimate ---------------------------------------------------------
  auto* est = add_subcommand("estimate", "quadratic-variation estimate from a path CSV");
  std::string est_input;
  double est_h = 0.7, est_level = 0.95;
  est->add_option("--input", est_input, "path CSV produced by simulate")->required();
  est->add_option("--h", est_h, "Hurst parameter")->required();
  est->add_option("--level", est_level, "confidence level")->default_val(0.95);
  est->callback([&] {
    const HurstParameter hurst(est_h);
    std::ifstream in(est_input);
    if (!in) throw config_error("cli: cannot open input file '" + est_input + "'");
    const PathData data = read_path_csv(in);
    if (hurst.value() >= 0.75) {
      // point estimate only; the CLT interval does not cover this regime
      const double est_value = qv_estimate(data.times, data.prices, hurst);
      std::ostringstream out;
      out << "{\n  \"sigma2_hat\": " << est_value << ",\n  \"n\": "
          << data.times.size() - 1
          << ",\n  \"note\": \"outside CLT scope (H >= 3/4): no interval\"\n}\n";
      emit(out.str(), "");
      return;
    }
    emit(to_json_string(estimate_sigma2(data.times, data.prices, hurst, est_level)), "");
  });

  // --- theta ------------------------------------------------------------
  auto* th = add_subcommand("theta", "theta functionals of a volatility spec");
  std::string th_vol;
  double th_h = 0.55;
  Index th_n = 1000;
  th->add_option("--vol", th_vol, kVolHelp)->required();
  th->add_option("--h", th_h, "Hurst parameter (must be > 1/2)")->required();
  th->add_option("--n", th_n, "grid cells")->default_val(1000);
  th->callback([&] {
    const VolatilitySpec vol = VolatilitySpec::parse(th_vol);
    emit(to_json_string(theta_report(vol, UniformGrid(th_n), HurstParameter(th_h))), "");
  });

  // --- price ------------------------------------------------------------
  auto* pr = add_subcommand("price", "European call quote");
  double pr_s = 0.0, pr_k = 0.0, pr_r = 0.0, pr_rtilde = 0.0, pr_sigma = 0.0;
  double pr_t = 0.0, pr_T = 1.0, pr_h = 0.7;
  std::string pr_vol;
  auto* opt_r = pr->add_option("--r", pr_r, "constant risk-free rate");
  auto* opt_rtilde =
      pr->add_option("--rtilde", pr_rtilde, "integrated rate difference r~(T) - r~(t)");
  auto* opt_sigma = pr->add_option("--sigma", pr_sigma, "constant volatility");
  auto* opt_vol = pr->add_option("--vol", pr_vol, kVolHelp);
  pr->add_option("--s", pr_s, "spot")->required();
  pr->add_option("--k", pr_k, "strike")->required();
  pr->add_option("--h", pr_h, "Hurst parameter")->required();
  pr->add_option("--t", pr_t, "valuation time")->default_val(0.0);
  pr->add_option("--bigt", pr_T, "maturity")->required();
  opt_r->excludes(opt_rtilde);
  opt_sigma->excludes(opt_vol);
  pr->callback([&] {
    const HurstParameter hurst(pr_h);
    if (!*opt_sigma && !*opt_vol)
      throw config_error("cli: price needs --sigma or --vol");
    const double rate_integral = *opt_rtilde ? pr_rtilde : pr_r * (pr_T - pr_t);
    OptionQuote quote;
    if (*opt_sigma) {
      if (!(pr_sigma > 0.0)) throw config_error("cli: sigma must be > 0");
      if (!(pr_t >= 0.0) || !(pr_T >= pr_t))
        throw config_error("cli: need 0 <= t <= maturity");
      const double two_h = hurst.two_h();
      const double v =
          pr_sigma * pr_sigma * (std::pow(pr_T, two_h) - std::pow(pr_t, two_h));
      quote = call_price_from_variance(pr_s, pr_k, rate_integral, v);
      quote.hurst = pr_h;
      quote.t = pr_t;
      quote.maturity = pr_T;
    } else {
      quote = call_price_tv(pr_s, pr_k, rate_integral, VolatilitySpec::parse(pr_vol),
                            hurst, pr_t, pr_T);
    }
    emit(to_json_string(quote), "");
  });

  // --- reproduce --------------------------------------------------------
  auto* rep = add_subcommand("reproduce", "rebuild a results table");
  int rep_table = 0;
  Index rep_n = 1000, rep_r = 200;
  std::uint64_t rep_seed = 1;
  std::string rep_out, rep_format = "csv", rep_config;
  std::vector<double> rep_h;
  int rep_threads = 0;
  bool rep_sweep = false;
  auto* rep_table_opt =
      rep->add_option("--table", rep_table, "table number 1..5")->check(CLI::Range(1, 5));
  auto* rep_n_opt = rep->add_option("--n", rep_n, "grid steps")->default_val(1000);
  auto* rep_r_opt = rep->add_option("--r", rep_r, "replications")->default_val(200);
  auto* rep_seed_opt = rep->add_option("--seed", rep_seed, "RNG seed")->default_val(1);
  auto* rep_h_opt = rep->add_option("--h", rep_h, "Hurst values (default 0.55 0.65 0.74)");
  auto* rep_out_opt = rep->add_option("--out", rep_out, "output path");
  auto* rep_format_opt = rep->add_option("--format", rep_format, "csv|json")
                             ->default_val("csv")
                             ->check(CLI::IsMember({"csv", "json"}));
  auto* rep_threads_opt =
      rep->add_option("--threads", rep_threads, "worker threads (0 = auto)");
  auto* rep_sweep_opt =
      rep->add_flag("--sweep", rep_sweep, "tables 4/5: sweep N in {250,500,1000,2000,4000}");
  rep->add_option("--config", rep_config,
                  "flat key=value config file; command-line flags override it");
  rep->callback([&] {
    if (!rep_config.empty()) {
      // file values fill in whatever the command line left unset
      const auto file = read_flat_config(rep_config);
      auto lookup = [&](std::initializer_list<const char*> keys) -> const std::string* {
        for (const char* key : keys) {
          const auto it = file.find(key);
          if (it != file.end()) return &it->second;
        }
        return nullptr;
      };
      auto merge = [&](CLI::Option* opt, std::initializer_list<const char*> keys,
                       auto& target) {
        const std::string* value = lookup(keys);
        if (opt->count() == 0 && value) {
          std::istringstream ss(*value);
          ss >> target;
          if (ss.fail())
            throw config_error("config: bad value '" + *value + "' for " +
                               opt->get_name());
        }
      };
      merge(rep_table_opt, {"table", "kind"}, rep_table);
      merge(rep_n_opt, {"n"}, rep_n);
      merge(rep_r_opt, {"replications", "r"}, rep_r);
      merge(rep_seed_opt, {"seed"}, rep_seed);
      merge(rep_out_opt, {"output", "out"}, rep_out);
      merge(rep_format_opt, {"format"}, rep_format);
      merge(rep_threads_opt, {"threads"}, rep_threads);
      merge(rep_sweep_opt, {"sweep"}, rep_sweep);
      if (const std::string* hs = lookup({"hurst_list", "h"});
          hs && rep_h_opt->count() == 0) {
        rep_h.clear();
        std::stringstream ss(*hs);
        std::string tok;
        while (std::getline(ss, tok, ','))
          if (!tok.empty()) rep_h.push_back(std::stod(tok));
      }
    }
    if (rep_table < 1 || rep_table > 5)
      throw config_error("config: table must be 1..5 (--table or table= in the file)");
    if (rep_out.empty())
      throw config_error("config: output path missing (--out or output= in the file)");
    if (rep_format != "csv" && rep_format != "json")
      throw config_error("config: format must be csv or json");
    ExperimentConfig config = ExperimentConfig::for_table(
        static_cast<TableKind>(static_cast<int>(TableKind::Table1) + rep_table - 1));
    config.n = rep_n;
    config.replications = rep_r;
    config.seed = rep_seed;
    config.threads = rep_threads;
    config.sweep = rep_sweep;
    config.output = rep_out;
    config.format = rep_format == "json" ? ReportFormat::Json : ReportFormat::Csv;
    if (!rep_h.empty()) config.hurst_list = rep_h;
    write_report_file(run_table(config), config.output, config.format);
  });

  // --- ks ---------------------------------------------------------------
  auto* ks = add_subcommand("ks", "CLT normality diagnostic (KS test)");
  double ks_h = 0.55, ks_sigma2 = 1.0;
  Index ks_n = 1000, ks_r = 5000;
  std::uint64_t ks_seed = 1;
  std::string ks_vol;
  int ks_threads = 0;
  ks->add_option("--h", ks_h, "Hurst parameter")->required();
  auto* ks_s2_opt = ks->add_option("--sigma2", ks_sigma2, "constant sigma^2 cell");
  auto* ks_vol_opt = ks->add_option("--vol", ks_vol, kVolHelp);
  ks->add_option("--n", ks_n, "grid steps")->default_val(1000);
  ks->add_option("--r", ks_r, "replications")->default_val(5000);
  ks->add_option("--seed", ks_seed, "RNG seed")->default_val(1);
  ks->add_option("--threads", ks_threads, "worker threads (0 = auto)");
  ks_s2_opt->excludes(ks_vol_opt);
  ks->callback([&] {
    ExperimentConfig config;
    config.kind = TableKind::Custom;
    config.hurst_list = {ks_h};
    config.n = ks_n;
    config.replications = ks_r;
    config.seed = ks_seed;
    config.threads = ks_threads;
    if (*ks_vol_opt)
      config.vol = VolatilitySpec::parse(ks_vol);
    else
      config.sigma2_list = {ks_sigma2};
    std::ostringstream out;
    write_json(run_clt_diagnostic(config), out);
    emit(out.str(), "");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError&) {
    return 2;
  } catch (const fbmlab::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const fbmlab::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
