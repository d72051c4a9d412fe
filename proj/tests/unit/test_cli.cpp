#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "shf/extraction.hpp"
#include "shf/touchstone.hpp"
#include "shf/trace_io.hpp"
#include "shfkit/cli.hpp"

using namespace shf;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Result r;
    r.code = cli::run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("shfkit_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

// Reference device, S11 referenced to 50 ohm.
void write_device_s1p(const std::string& path) {
    const MbvdParams p = from_targets({5.31e9, 0.239, 101.0, 1250e-15, 7.7, 1.5});
    const auto t = synthesize_trace(p, linear_grid(4e9, 7e9, 1501));
    std::vector<std::vector<cplx>> s11;
    for (cplx y : t.values) s11.push_back({admittance_to_s11(y, 50.0)});
    io::write_file(path, io::write_touchstone(io::make_touchstone(t.freqs, s11, 1, io::DataFormat::ma,
                                                                  io::FreqUnit::ghz)));
}

double value_after(const std::string& text, const std::string& key) {
    const auto p = text.find(key);
    if (p == std::string::npos) return std::nan("");
    return std::stod(text.substr(p + key.size()));
}

}  // namespace

TEST_F(CliTest, FitReportsDeviceCoupling) {
    write_device_s1p(path("dev.s1p"));
    const Result r = run({"fit", "--input", path("dev.s1p"), "--out", path("fit.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(value_after(r.out, "kt2 = "), 23.9, 0.1) << r.out;
    const std::string csv = io::read_file(path("fit.csv"));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "parameter,value,unit");
}

TEST_F(CliTest, FilterSummary) {
    const Result r = run({"filter", "--order", "5", "--r", "3", "--kt2", "0.239", "--qm", "101", "--fres", "5.31e9",
                       "--z0", "50", "--out", path("f.csv"), "--s2p", path("f.s2p")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(value_after(r.out, "IL = "), 2.5, 0.5);
    EXPECT_NEAR(value_after(r.out, "BW = "), 11.0, 1.5);
    EXPECT_GT(value_after(r.out, "rejection = "), 30.0);
    const auto rec = io::parse_touchstone(io::read_file(path("f.s2p")));
    EXPECT_EQ(rec.ports, 2);
    EXPECT_EQ(rec.rows.size(), 4001u);
}

TEST_F(CliTest, UniformCellHasNoStopBands) {
    const Result r = run({"stopbands", "--config", SHF_UNIFORM_CONFIG, "--f-lo", "1e9", "--f-hi", "8e9", "--out",
                       path("b.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("0 band(s)"), std::string::npos);
    EXPECT_EQ(io::read_file(path("b.csv")), "band,f_lo_hz,f_hi_hz,center_hz,width_frac\n");
}

TEST_F(CliTest, ReferenceConfigCommands) {
    const std::string cfg = SHF_EXAMPLE_CONFIG;
    EXPECT_EQ(run({"te-res", "--config", cfg}).code, 0);
    EXPECT_EQ(run({"metrics", "--config", cfg, "--out", path("m.csv")}).code, 0);
    const Result sb = run({"stopbands", "--config", cfg, "--calibrate-to", "5.2419e9", "--out", path("s.csv")});
    EXPECT_EQ(sb.code, 0) << sb.err;
    EXPECT_EQ(run({"filter", "--config", cfg}).code, 0);
    const Result tr = run({"transmission", "--config", cfg, "--f-lo", "5e9", "--f-hi", "5.5e9", "--points", "51"});
    EXPECT_EQ(tr.code, 0) << tr.err;
}

TEST_F(CliTest, SynthThenFitRoundTrip) {
    const Result s = run({"synth", "--fres", "2e9", "--kt2", "0.1", "--qm", "500", "--c0", "2e-12", "--out",
                       path("y.csv"), "--s1p", path("y.s1p")});
    ASSERT_EQ(s.code, 0) << s.err;
    for (const char* in : {"y.csv", "y.s1p"}) {
        const Result f = run({"fit", "--input", path(in)});
        ASSERT_EQ(f.code, 0) << f.err;
        EXPECT_NEAR(value_after(f.out, "kt2 = "), 10.0, 0.01) << in;
    }
}

TEST_F(CliTest, OutputsAreByteIdentical) {
    for (int i = 0; i < 2; ++i) {
        ASSERT_EQ(run({"sweep-kt2", "--kt2-lo", "0.05", "--kt2-hi", "0.35", "--steps", "7", "--out",
                       path("sw" + std::to_string(i) + ".csv")})
                      .code,
                  0);
        ASSERT_EQ(run({"filter", "--out", path("f" + std::to_string(i) + ".csv")}).code, 0);
    }
    EXPECT_EQ(io::read_file(path("sw0.csv")), io::read_file(path("sw1.csv")));
    EXPECT_EQ(io::read_file(path("f0.csv")), io::read_file(path("f1.csv")));
}

TEST_F(CliTest, OutputDirectoryOverride) {
    ::setenv("SHFKIT_OUT_DIR", dir_.c_str(), 1);
    const Result r = run({"te-res", "--out", "te.csv"});
    ::unsetenv("SHFKIT_OUT_DIR");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir_ / "te.csv"));
}

TEST_F(CliTest, ExitCodes) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"filter", "--order", "x"}).code, 2);
    const Result o = run({"filter", "--order", "1"});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("--order"), std::string::npos);
    const Result m = run({"metrics", "--fres", "5e9"});
    EXPECT_EQ(m.code, 2);
    EXPECT_NE(m.err.find("--kt2"), std::string::npos);

    io::write_file(path("bad.s1p"), "# GHz S MA R 50\n1 0.5 0\n0.5 0.5 0\n");
    const Result p = run({"fit", "--input", path("bad.s1p")});
    EXPECT_EQ(p.code, 2);
    EXPECT_NE(p.err.find("line 3"), std::string::npos) << p.err;

    io::write_file(path("bad.cfg"), "[ladder]\norder = five\n");
    const Result c = run({"filter", "--config", path("bad.cfg")});
    EXPECT_EQ(c.code, 2);
    EXPECT_NE(c.err.find("line 2"), std::string::npos) << c.err;

    // A pure capacitor has no resonance to fit.
    AdmittanceTrace cap = synthesize_trace({1e-12, 0, 0, 0, 0, 0}, linear_grid(1e9, 2e9, 50));
    std::ostringstream os;
    io::write_admittance_csv(os, cap);
    io::write_file(path("cap.csv"), os.str());
    EXPECT_EQ(run({"fit", "--input", path("cap.csv")}).code, 3);

    EXPECT_EQ(run({"filter", "--kt2", "0.001", "--f-lo", "5.2e9", "--f-hi", "5.4e9"}).code, 3);
    EXPECT_EQ(run({"--help"}).code, 0);
}
