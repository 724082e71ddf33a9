// Exercises the command-line surface end to end: exit codes, file outputs,
// determinism, and the config-file override rules.  Invoked by ctest with the
// binary path as argv[1].
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  std::cout << (ok ? "[ok] " : "[FAILED] ") << what << '\n';
  if (!ok) ++failures;
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return status < 0 ? status : WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_tests <path to fbmlab binary>\n";
    return 2;
  }
  const std::string bin = argv[1];
  const std::string dir = "/tmp/fbmlab_cli_test";
  if (run("rm -rf " + dir + " && mkdir -p " + dir) != 0) return 2;

  check(run(bin + " --help > /dev/null") == 0, "--help exits 0");
  check(run(bin + " > /dev/null 2>&1") == 2, "missing subcommand exits 2");

  // simulate -> estimate round trip
  const std::string path_csv = dir + "/path.csv";
  check(run(bin + " simulate --h 0.65 --vol const:0.8 --n 500 --seed 42 --out " +
            path_csv) == 0,
        "simulate exits 0");
  {
    std::ifstream in(path_csv);
    std::string header;
    std::getline(in, header);
    check(header == "t,S", "path csv header");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    check(rows == 501, "path csv has n+1 rows");
  }
  check(run(bin + " estimate --input " + path_csv + " --h 0.65 > " + dir +
            "/est.json") == 0,
        "estimate exits 0");
  check(slurp(dir + "/est.json").find("\"sigma2_hat\"") != std::string::npos,
        "estimate emits sigma2_hat");
  check(run(bin + " estimate --input " + path_csv + " --h 0.8 > " + dir +
            "/est_h08.json") == 0,
        "estimate outside the CLT regime still returns a point value");
  check(slurp(dir + "/est_h08.json").find("outside CLT scope") != std::string::npos,
        "estimate flags H >= 3/4");

  // time-varying simulate forbids drift
  check(run(bin + " simulate --h 0.65 --vol pow:0.4,0.3 --mu 0.1 --n 16 --seed 1 --out " +
            dir + "/x.csv 2> /dev/null") == 2,
        "drift with time-varying volatility is a config error");

  // theta
  check(run(bin + " theta --vol pow:0.4,0.3 --h 0.55 --n 64 > " + dir + "/theta.json") == 0,
        "theta exits 0");
  check(slurp(dir + "/theta.json").find("\"tilde_theta\"") != std::string::npos,
        "theta emits tilde_theta");
  check(run(bin + " theta --vol pow:0.4,0.3 --h 0.45 --n 64 2> /dev/null") == 2,
        "theta rejects H <= 1/2 with exit 2");

  // price
  check(run(bin + " price --s 100 --k 100 --r 0.02 --sigma 0.2 --h 0.65 --t 0 --bigt 1 > " +
            dir + "/quote.json") == 0,
        "price (constant sigma) exits 0");
  check(slurp(dir + "/quote.json").find("\"total_variance\"") != std::string::npos,
        "quote carries the total variance");
  check(run(bin + " price --s 1 --k 1 --rtilde 0 --vol pow:0.4,0.3 --h 0.55 --t 0 "
                  "--bigt 1 > " +
            dir + "/quote_tv.json") == 0,
        "price (time-varying) exits 0");
  check(run(bin + " price --s 1 --k 1 --h 0.6 --t 0 --bigt 1 2> /dev/null") == 2,
        "price without sigma or vol is a config error");

  // reproduce determinism
  const std::string t4a = dir + "/t4a.csv", t4b = dir + "/t4b.csv";
  check(run(bin + " reproduce --table 4 --out " + t4a) == 0, "reproduce table 4");
  check(run(bin + " reproduce --table 4 --out " + t4b) == 0, "reproduce table 4 again");
  check(slurp(t4a) == slurp(t4b) && !slurp(t4a).empty(), "table 4 is byte identical");

  const std::string t1a = dir + "/t1a.csv", t1b = dir + "/t1b.csv";
  check(run(bin + " reproduce --table 1 --n 128 --r 40 --seed 9 --threads 1 --out " + t1a) ==
            0,
        "reproduce table 1");
  check(run(bin + " reproduce --table 1 --n 128 --r 40 --seed 9 --threads 4 --out " + t1b) ==
            0,
        "reproduce table 1 with other worker count");
  check(slurp(t1a) == slurp(t1b), "table 1 independent of worker count");

  check(run(bin + " reproduce --table 9 --out " + dir + "/bad.csv 2> /dev/null") == 2,
        "table out of range exits 2");
  check(run(bin + " reproduce --table 1 --r 0 --out " + dir + "/bad.csv 2> /dev/null") == 2,
        "bad replication count exits 2");
  check(run(bin + " simulate --h 1.5 --vol const:1 --seed 1 --out " + dir +
            "/bad.csv 2> /dev/null") == 2,
        "H outside (0,1) exits 2");
  check(run(bin + " simulate --h 0.6 --vol pow:bad --seed 1 --out " + dir +
            "/bad.csv 2> /dev/null") == 2,
        "malformed volatility spec exits 2");

  // json format
  check(run(bin + " reproduce --table 5 --format json --out " + dir + "/t5.json") == 0,
        "reproduce table 5 json");
  check(slurp(dir + "/t5.json").find("\"rows\"") != std::string::npos,
        "json report has rows");

  // config file with flag override
  const std::string cfg = dir + "/run.cfg";
  {
    std::ofstream out(cfg);
    out << "# reproduction run\ntable = 1\nn = 128\nreplications = 30\nseed = 11\noutput = " << dir << "/cfg_run.csv\n";
  }
  check(run(bin + " reproduce --config " + cfg) == 0, "reproduce from config file");
  const std::string cfg_csv = slurp(dir + "/cfg_run.csv");
  check(cfg_csv.find(",128,30,") != std::string::npos, "config file values applied");
  check(run(bin + " reproduce --config " + cfg + " --r 35 --out " + dir +
            "/cfg_run2.csv") == 0,
        "reproduce with flag override");
  check(slurp(dir + "/cfg_run2.csv").find(",128,35,") != std::string::npos,
        "command-line flag overrides the config file");

  // tabulated volatility through the whole surface
  const std::string tab = dir + "/vol.csv";
  {
    std::ofstream out(tab);
    out << "0.2\n0.5\n0.3\n0.7\n";
  }
  check(run(bin + " simulate --h 0.62 --vol tab:" + tab + " --n 64 --seed 8 --out " +
            dir + "/tab_path.csv") == 0,
        "simulate with a tabulated volatility");
  check(run(bin + " theta --vol tab:" + tab + " --h 0.65 --n 16 > " + dir +
            "/tab_theta.json") == 0,
        "theta with a tabulated volatility");
  check(slurp(dir + "/tab_theta.json").find("\"theta_total\": 0.19946828") !=
            std::string::npos,
        "tabulated theta_total matches the closed form");

  // ks diagnostic
  check(run(bin + " ks --h 0.55 --sigma2 1 --n 64 --r 200 --seed 4 > " + dir +
            "/ks.json") == 0,
        "ks exits 0");
  check(slurp(dir + "/ks.json").find("\"ks_p\"") != std::string::npos, "ks emits p-value");
  check(run(bin + " ks --h 0.55 --sigma2 1 --n 64 --r 50 --seed 4 2> /dev/null") == 2,
        "ks refuses r < 100 with exit 2");

  std::cout << (failures == 0 ? "ALL CLI CHECKS PASSED\n"
                              : std::to_string(failures) + " CLI CHECKS FAILED\n");
  return failures == 0 ? 0 : 1;
}
