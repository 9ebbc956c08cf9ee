// Exit-code and output checks for the command line tool. The binary path
// comes from MPMV_CLI, as in the acceptance suite.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

fs::path g_dir;
int g_failures = 0;

int run_cli(const std::string& args) {
    const std::string cmd = std::string(std::getenv("MPMV_CLI")) + " " + args + " >" +
                            (g_dir / "out.txt").string() + " 2>" + (g_dir / "err.txt").string();
    const int status = std::system(cmd.c_str());
    if (status < 0) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string stderr_text() {
    std::ifstream in(g_dir / "err.txt");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void expect(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "ok" : "FAILED", what.c_str());
    if (!ok) ++g_failures;
}

}  // namespace

int main() {
    if (!std::getenv("MPMV_CLI")) {
        std::fprintf(stderr, "MPMV_CLI must point at the command line binary\n");
        return 2;
    }
    std::error_code ec;
    g_dir = fs::temp_directory_path() / ("mpmv_cli_checks_" + std::to_string(::getpid()));
    fs::create_directories(g_dir, ec);

    const fs::path market = g_dir / "market.json";
    {
        std::ofstream out(market);
        out << "{\"horizon_T\":10,\"n_assets\":1,\"d_noise\":1,"
               "\"r\":1.0002,\"b\":1.005,\"sigma\":[[0.02]]}";
    }
    const fs::path out_csv = g_dir / "out.csv";
    const std::string base = "frontier --market " + market.string() + " --out " + out_csv.string();

    expect(run_cli(base + " --tau 5 --mu 2.0") == 0, "frontier with mu succeeds");
    expect(run_cli(base + " --tau 5 --target 1.0") == 4,
           "target at the risk-free growth exits 4 (infeasible)");
    expect(stderr_text().find("risk-free terminal wealth") != std::string::npos,
           "infeasibility message names the feasibility bound");
    expect(run_cli(base + " --tau 5") == 2, "neither mu nor target exits 2");
    expect(run_cli(base + " --tau 5 --mu 1 --target 1.5") == 2, "both mu and target exits 2");
    expect(run_cli("frontier --market " + (g_dir / "absent.json").string() + " --tau 2 --mu 1" +
                   " --out " + out_csv.string()) == 3,
           "missing market file exits 3 (data)");
    expect(run_cli(base + " --tau 5 --mu -1") == 2, "negative mu exits 2");
    expect(run_cli("frontier") == 2, "missing required flags exits 2");
    expect(run_cli("--help") == 0, "--help exits 0");

    {
        std::ofstream out(market);
        out << "{\"horizon_T\":10,\"n_assets\":1,\"d_noise\":1,"
               "\"r\":1.0,\"b\":1.0,\"sigma\":[[0.02]]}";  // gamma = 0
    }
    expect(run_cli(base + " --tau 5 --mu 1") == 2, "market violating the assumptions exits 2");
    expect(stderr_text().find("gamma") != std::string::npos,
           "assumption failure names the violated check");

    // tau = 1 emits exactly two data rows (s = 0 and s = 1)
    {
        std::ofstream out(market);
        out << "{\"horizon_T\":10,\"n_assets\":1,\"d_noise\":1,"
               "\"r\":1.0002,\"b\":1.005,\"sigma\":[[0.02]]}";
    }
    expect(run_cli(base + " --tau 1 --mu 2.0") == 0, "single-period frontier succeeds");
    {
        std::ifstream in(out_csv);
        std::string line;
        int data_rows = 0;
        while (std::getline(in, line))
            if (!line.empty() && line[0] != '#' && line != "s,mean,variance") ++data_rows;
        expect(data_rows == 2, "single-period frontier has exactly two rows");
    }

    const fs::path prices = g_dir / "short.csv";
    {
        std::ofstream out(prices);
        out << "date,close\n2020-01-01,10\n2020-01-02,11\n";
    }
    expect(run_cli("backtest --prices-a " + prices.string() + " --prices-b " + prices.string() +
                   " --L 1 --m0 2 --K 5 --tau 2 --out " + out_csv.string()) == 3,
           "insufficient price data exits 3");
    expect(stderr_text().find("rows") != std::string::npos, "shortfall message counts rows");

    // config file merge: flags win over config entries
    const fs::path bt_cfg = g_dir / "bt.json";
    {
        std::ofstream out(bt_cfg);
        out << "{\"prices_a\":\"" << prices.string() << "\",\"prices_b\":\"" << prices.string()
            << "\",\"L\":1,\"m0\":2,\"K\":5,\"tau\":2,\"strategy\":\"III\"}";
    }
    expect(run_cli("backtest --config " + bt_cfg.string() + " --out " + out_csv.string()) == 3,
           "backtest driven purely by a config file reaches the data check");
    expect(run_cli("backtest --config " + bt_cfg.string() + " --L 0 --out " + out_csv.string()) ==
               2,
           "a flag overrides the config entry (invalid L from the flag wins)");

    fs::remove_all(g_dir, ec);
    if (g_failures) {
        std::printf("%d check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all command line checks passed\n");
    return 0;
}
