// End-to-end checks of the CLI surface: exit codes, output formats, and
// byte-identical determinism under a fixed seed.  argv[1] = CLI binary path.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    std::printf("%s %s\n", ok ? "ok  " : "FAIL", what.c_str());
    if (!ok) ++failures;
}

int run(const std::string& cmd) {
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_checks <cli-path>\n");
        return 2;
    }
    std::string cli = argv[1];
    std::string tmp = "/tmp/superspace_cli_check";
    (void)run("mkdir -p " + tmp);

    // exit codes
    expect(run(cli + " dims --m 3 --n 1 --kmax 3 --format csv --out " + tmp + "/dims.csv") == 0,
           "dims exits 0");
    expect(run(cli + " gram --m 2 --n 1 --jmax 1 --kmax 1 --out /dev/null 2>/dev/null") == 2,
           "gram with M <= 0 exits 2");
    expect(run(cli + " no-such-command >/dev/null 2>&1") == 2, "unknown subcommand exits 2");
    expect(run(cli + " spectrum --m 3 --n 1 --potential /nonexistent.json >/dev/null 2>&1") == 2,
           "bad potential path exits 2");

    // determinism: same seed twice, byte identical
    std::string base = cli + " heisenberg --m 3 --n 1 --seed 42 --count 10 --terms 5 --format csv --out ";
    expect(run(base + tmp + "/h1.csv") == 0, "heisenberg run 1");
    expect(run(base + tmp + "/h2.csv") == 0, "heisenberg run 2");
    expect(slurp(tmp + "/h1.csv") == slurp(tmp + "/h2.csv") && !slurp(tmp + "/h1.csv").empty(),
           "seeded output byte-identical");

    // spectrum CSV format: header and E column close to 2j+k+1/2
    expect(run(cli + " spectrum --m 3 --n 1 --potential oscillator --kmax 2 --count 3 --grid 800 "
                     "--format csv --out " + tmp + "/spec.csv") == 0,
           "spectrum exits 0");
    {
        std::ifstream f(tmp + "/spec.csv");
        std::string header;
        std::getline(f, header);
        expect(header == "k,j,E,multiplicity,residual", "spectrum CSV header");
        std::string line;
        bool all_close = true;
        int rows = 0;
        while (std::getline(f, line)) {
            int k, j;
            double E, resid;
            long mult;
            if (std::sscanf(line.c_str(), "%d,%d,%lf,%ld,%lf", &k, &j, &E, &mult, &resid) == 5) {
                ++rows;
                if (std::fabs(E - (2.0 * j + k + 0.5)) > 1e-4) all_close = false;
            }
        }
        expect(rows == 9 && all_close, "spectrum rows match E = 2j+k+1/2");
    }

    // verify JSON: schema key and pass flag
    expect(run(cli + " verify --suite sl2 --m 3 --n 1 --seed 7 --out " + tmp + "/v.json") == 0,
           "verify --suite sl2 exits 0");
    {
        nlohmann::json j;
        std::ifstream f(tmp + "/v.json");
        f >> j;
        expect(j.at("schema") == "superspace/1", "verify JSON carries schema superspace/1");
        expect(j.at("pass").get<bool>(), "verify JSON pass flag");
        expect(!j.at("suites").empty(), "verify JSON lists checked identities");
    }

    // a poly_in_u potential file describing the oscillator reproduces the
    // builtin byte-for-byte
    {
        std::ofstream pf(tmp + "/osc.json");
        pf << "{\"kind\":\"poly_in_u\",\"coeffs\":[0.0,0.5]}";
        pf.close();
        std::string common = " --m 3 --n 1 --kmax 1 --count 2 --grid 600 --format csv --out ";
        expect(run(cli + " spectrum --potential oscillator" + common + tmp + "/s1.csv") == 0,
               "spectrum with builtin potential");
        expect(run(cli + " spectrum --potential " + tmp + "/osc.json" + common + tmp + "/s2.csv") == 0,
               "spectrum with potential file");
        expect(slurp(tmp + "/s1.csv") == slurp(tmp + "/s2.csv"), "file potential matches builtin");
    }

    // explicit coefficients through --coeffs: the Gaussian saturates
    {
        std::string coeffs = "{\"m\":3,\"n\":1,\"coeffs\":[{\"j\":0,\"k\":0,\"l\":1,\"re\":1.0,\"im\":0.0}]}";
        expect(run(cli + " heisenberg --m 3 --n 1 --coeffs '" + coeffs + "' --format csv --out " +
                   tmp + "/hg.csv") == 0,
               "heisenberg with --coeffs exits 0");
        std::ifstream f(tmp + "/hg.csv");
        std::string header, line;
        std::getline(f, header);
        std::getline(f, line);
        expect(line.size() > 2 && line.substr(line.size() - 2) == ",1",
               "gaussian reported as saturated");
        expect(run(cli + " fourier --m 3 --n 1 --coeffs '" + coeffs + "' --out /dev/null") == 0,
               "fourier with --coeffs exits 0");
    }

    // alpha-table CSV with the oracle column
    expect(run(cli + " alpha-table --m 3 --n 1 --jmax 6 --pmax 3 --format csv --out " +
               tmp + "/alpha.csv") == 0,
           "alpha-table exits 0");
    {
        std::ifstream f(tmp + "/alpha.csv");
        std::string header;
        std::getline(f, header);
        expect(header == "j,k,p,q,s,alpha,provenance,oracle,delta", "alpha-table CSV header");
        std::string line;
        double worst = 0.0;
        while (std::getline(f, line)) {
            auto pos = line.rfind(',');
            worst = std::max(worst, std::fabs(std::atof(line.substr(pos + 1).c_str())));
        }
        expect(worst < 1e-9, "alpha-table oracle deviation < 1e-9");
    }

    if (failures) {
        std::printf("%d CLI check(s) failed\n", failures);
        return 1;
    }
    std::printf("all CLI checks passed\n");
    return 0;
}
