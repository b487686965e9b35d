#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "horolab/config.hpp"
#include "horolab/errors.hpp"
#include "horolab/runner.hpp"
#include "horolab/series_io.hpp"

using namespace horolab;
namespace fs = std::filesystem;

namespace {
// Fresh directory under the system temp dir, removed on scope exit.
struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("horolab_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& f) const { return (path / f).string(); }
};

int run_args(const std::vector<std::string>& args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}
}  // namespace

TEST_CASE("parse_config") {
    ExperimentConfig d;
    ExperimentConfig c = parse_config("");
    CHECK(c.seed == d.seed);
    CHECK(c.n == d.n);
    CHECK(c.out == d.out);

    c = parse_config("seed = 7\n");
    CHECK(c.seed == 7);
    CHECK(c.n_b == d.n_b);
    c = parse_config("# comment\n  n = 1000   # trailing\nt_max=4\nforce = true\n");
    CHECK(c.n == 1000);
    CHECK(c.t_max == 4.0);
    CHECK(c.force);
    CHECK(c.times().size() == 9);

    try {
        parse_config("sed = 7\n");
        FAIL("expected rejection");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("sed") != std::string::npos);
    }
    try {
        parse_config("n = many\nbogus = 1\nno equals sign\nn_b = 64\n");
        FAIL("expected rejection");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("line 1") != std::string::npos);
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("line 4") == std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("seed = -1"), ConfigError);
    CHECK_THROWS_AS(parse_config("force = maybe"), ConfigError);
}

TEST_CASE("defaults and validation") {
    CHECK(subcommand_names().size() == 6);
    CHECK(defaults_for("trace-decay").n == 100000);
    CHECK(defaults_for("trace-decay").t_max == 6.0);
    CHECK(defaults_for("quantize-check").n_b == 256);
    CHECK(defaults_for("mixing").n == 1000000);
    ExperimentConfig c;
    CHECK_NOTHROW(validate_config(c));
    c.n_b = 48;
    c.fit_t1 = c.fit_t0;
    try {
        validate_config(c);
        FAIL("expected rejection");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("n_b") != std::string::npos);
        CHECK(msg.find("fit window") != std::string::npos);
    }
}

TEST_CASE("write_series") {
    TempDir dir("series");
    SUBCASE("empty series is header only") {
        write_series(dir / "c.csv", CorrelationSeries{});
        CHECK(read_text_file(dir / "c.csv") == std::string(kCorrelationHeader) + "\n");
        write_series(dir / "t.csv", TraceSeries{});
        CHECK(read_text_file(dir / "t.csv") == std::string(kTraceHeader) + "\n");
    }
    SUBCASE("bit-exact round trip") {
        CorrelationSeries s;
        s.N = 12345;
        s.seed = 99;
        for (int k = 0; k < 17; ++k) {
            s.times.push_back(0.5 * k);
            s.values.emplace_back(std::exp(-0.37 * k) / 3.0, std::sin(1.0 + k) * 1e-7);
            s.stderr_values.push_back(1.0 / (7.0 + k));
        }
        write_series(dir / "c.csv", s);
        CorrelationSeries r = parse_correlation_csv(read_text_file(dir / "c.csv"));
        CHECK(r.times == s.times);
        CHECK(r.values == s.values);
        CHECK(r.stderr_values == s.stderr_values);
        CHECK(r.N == s.N);
        CHECK(r.seed == s.seed);

        TraceSeries t;
        t.J = 8;
        t.times = {0.0, 0.5, 1.0};
        t.values = {cplx(0.1 / 3, -2.0 / 7), cplx(1e-300, 0.0), cplx(-5.5e-5, 1.0 / 9)};
        t.stderr_total = {1.0 / 3, 2.0 / 3, 0.0};
        write_series(dir / "t.csv", t);
        TraceSeries u = parse_trace_csv(read_text_file(dir / "t.csv"));
        CHECK(u.times == t.times);
        CHECK(u.values == t.values);
        CHECK(u.stderr_total == t.stderr_total);
        CHECK(u.J == 8);
    }
    SUBCASE("no overwrite without force") {
        write_series(dir / "c.csv", CorrelationSeries{});
        CHECK_THROWS_AS(write_series(dir / "c.csv", CorrelationSeries{}), IoError);
        CHECK_NOTHROW(write_series(dir / "c.csv", CorrelationSeries{}, true));
    }
    CHECK_THROWS_AS(read_text_file(dir / "missing.csv"), IoError);
}

TEST_CASE("run") {
    TempDir dir("run");
    std::string out, err;
    SUBCASE("unknown subcommand") {
        CHECK(run_args({"bogus"}, &out, &err) == 2);
        CHECK(err.find("unknown subcommand 'bogus'") != std::string::npos);
        CHECK(err.find("verify-core") != std::string::npos);
        CHECK(run_args({}, &out, &err) == 2);
    }
    SUBCASE("summability") {
        CHECK(run_args({"summability", "--out", dir / "s"}, &out, &err) == 0);
        CHECK(out.find("PASS summability/order_minus_4") != std::string::npos);
        CHECK(fs::exists(dir / "s/summability.json"));
        // Second run refuses to overwrite, --force allows it.
        CHECK(run_args({"summability", "--out", dir / "s"}, &out, &err) == 2);
        CHECK(err.find("overwrite") != std::string::npos);
        CHECK(run_args({"summability", "--out", dir / "s", "--force"}, &out, &err) == 0);
    }
    SUBCASE("configuration errors exit 2") {
        CHECK(run_args({"mixing", "--set", "sed=7", "--out", dir / "m"}, &out, &err) == 2);
        CHECK(err.find("sed") != std::string::npos);
        CHECK(run_args({"mixing", "--config", dir / "absent.cfg"}, &out, &err) == 2);
        CHECK_FALSE(fs::exists(dir / "m"));
    }
    SUBCASE("flags win over config and --set") {
        std::ofstream(dir / "m.cfg") << "seed = 3\nn = 500\nt_max = 1\n";
        int code = run_args({"mixing", "--config", dir / "m.cfg", "--set", "seed=4", "--seed", "5", "--n", "800", "--out",
                             dir / "m"},
                            &out, &err);
        CHECK(code != 2);
        CorrelationSeries s = parse_correlation_csv(read_text_file(dir / "m/mixing.csv"));
        CHECK(s.seed == 5);
        CHECK(s.N == 800);
        CHECK(s.times.size() == 3);
        CHECK(read_text_file(dir / "m/mixing.csv").rfind(kCorrelationHeader, 0) == 0);
        CHECK(fs::exists(dir / "m/mixing_fit.json"));

        // Same configuration and seed: byte-identical output.
        run_args({"mixing", "--config", dir / "m.cfg", "--set", "seed=4", "--seed", "5", "--n", "800", "--out", dir / "m2"});
        CHECK(read_text_file(dir / "m/mixing.csv") == read_text_file(dir / "m2/mixing.csv"));
    }
}
