#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qspline_cli.hpp"
#include "test_support.hpp"

using namespace qspline;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text, std::string* header = nullptr) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream fields(line);
        std::string f;
        while (std::getline(fields, f, ',')) row.push_back(std::strtod(f.c_str(), nullptr));
        rows.push_back(row);
    }
    return rows;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qspline_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }

    std::string fit_to_file(double q, double left, double right, const std::string& name = "model.json") const {
        const auto r = run({"fit", "--input", sample("x4.csv"), "--q", std::to_string(q),
                            "--dq-left=" + io::format_number(left), "--dq-right=" + io::format_number(right),
                            "--output", path(name)});
        EXPECT_EQ(r.code, 0) << r.err;
        return path(name);
    }

    static std::string sample(const std::string& name) { return qspline::testing::kSamplesDir + "/" + name; }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, FitClassical) {
    const auto r = run({"fit", "--input", sample("x4.csv"), "--q", "1", "--dq-left", "-4", "--dq-right", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = io::json::parse(r.out);
    const auto p0 = j.at("pieces")[0].at("coeffs").get<std::vector<double>>();
    const auto p1 = j.at("pieces")[1].at("coeffs").get<std::vector<double>>();
    const std::vector<double> e0{0, 0, -1, -2}, e1{0, 0, -1, 2};
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(p0[k], e0[k], 1e-12);
        EXPECT_NEAR(p1[k], e1[k], 1e-12);
    }
}

TEST_F(CliTest, FitQ2) {
    const auto r = run({"fit", "-i", sample("x4.csv"), "-q", "2", "--dq-left=-15", "--dq-right=15"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = io::json::parse(r.out);
    const auto mu = j.at("moments").get<std::vector<double>>();
    ASSERT_EQ(mu.size(), 3u);
    EXPECT_NEAR(mu[0], 57.0, 1e-10);
    EXPECT_NEAR(mu[1], -6.0, 1e-10);
    EXPECT_NEAR(mu[2], 57.0, 1e-10);
    const auto p0 = j.at("pieces")[0].at("coeffs").get<std::vector<double>>();
    const auto p1 = j.at("pieces")[1].at("coeffs").get<std::vector<double>>();
    const std::vector<double> e0{0, 0, -2, -3}, e1{0, 0, -2, 3};
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(p0[k], e0[k], 1e-12);
        EXPECT_NEAR(p1[k], e1[k], 1e-12);
    }
}

TEST_F(CliTest, FitJsonDatasetMatchesCsv) {
    const auto a = run({"fit", "-i", sample("x4.csv"), "-q", "2", "--dq-left=-15", "--dq-right=15"});
    const auto b = run({"fit", "-i", sample("x4_q2.json"), "-q", "2"});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, FitIsDeterministic) {
    const auto a = run({"fit", "-i", sample("x4.csv"), "-q", "0.7", "--dq-left=-3", "--dq-right=3"});
    const auto b = run({"fit", "-i", sample("x4.csv"), "-q", "0.7", "--dq-left=-3", "--dq-right=3"});
    EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, FitMalformedInputs) {
    const auto unsorted = write("bad.csv", "x,f\n0,0\n-1,1\n1,1\n");
    EXPECT_EQ(run({"fit", "-i", unsorted, "-q", "2", "--dq-left=0", "--dq-right=0"}).code, 2);

    const auto dup = write("dup.csv", "x,f\n0,0\n0,1\n");
    const auto r = run({"fit", "-i", dup, "-q", "2", "--dq-left=0", "--dq-right=0"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;

    EXPECT_EQ(run({"fit", "-i", sample("x4.csv"), "-q", "2"}).code, 2);
    EXPECT_EQ(run({"fit", "-i", sample("x4.csv"), "-q", "-2", "--dq-left=0", "--dq-right=0"}).code, 2);
    EXPECT_EQ(run({"fit", "-i", sample("x4.csv"), "-q", "abc", "--dq-left=0", "--dq-right=0"}).code, 2);
    EXPECT_EQ(run({"fit", "-i", path("missing.csv"), "-q", "2", "--dq-left=0", "--dq-right=0"}).code, 2);
    EXPECT_EQ(run({"fit"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
}

TEST_F(CliTest, FitSingularNamesQ) {
    const auto r = run({"fit", "-i", sample("singular.csv"), "-q", "0.5", "--dq-left=0", "--dq-right=0"});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("q = 0.5"), std::string::npos) << r.err;
    EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST_F(CliTest, EvalGrid) {
    const auto model = fit_to_file(1.0, -4.0, 4.0);
    const auto r = run({"eval", "--model", model, "--grid", "-1,1,5"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::string header;
    const auto rows = csv_rows(r.out, &header);
    EXPECT_EQ(header, "x,s");
    ASSERT_EQ(rows.size(), 5u);
    const double xs[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    const double ss[] = {1.0, 0.0, 0.0, 0.0, 1.0};
    for (std::size_t k = 0; k < 5; ++k) {
        EXPECT_DOUBLE_EQ(rows[k][0], xs[k]);
        EXPECT_NEAR(rows[k][1], ss[k], 1e-12);
    }
}

TEST_F(CliTest, EvalSinglePointAndExtrapolation) {
    const auto model = fit_to_file(1.0, -4.0, 4.0);
    const auto one = csv_rows(run({"eval", "-m", model, "-g", "0.5,0.5,1"}).out);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_NEAR(one[0][1], 0.0, 1e-12);

    const auto out = run({"eval", "-m", model, "-g", "-2,2,5"});
    EXPECT_EQ(out.code, 4);
    EXPECT_TRUE(out.out.empty());

    const auto ext = run({"eval", "-m", model, "-g", "-2,2,5", "--extrapolate"});
    ASSERT_EQ(ext.code, 0);
    const auto rows = csv_rows(ext.out);
    EXPECT_NEAR(rows[0][1], 12.0, 1e-12);  // -2x^3 - x^2 at x = -2
}

TEST_F(CliTest, EvalMalformed) {
    const auto model = fit_to_file(1.0, -4.0, 4.0);
    EXPECT_EQ(run({"eval", "-m", model, "-g", "-1,1"}).code, 2);
    EXPECT_EQ(run({"eval", "-m", model, "-g", "-1,1,0"}).code, 2);
    EXPECT_EQ(run({"eval", "-m", model, "-g", "-1,1,2.5"}).code, 2);
    EXPECT_EQ(run({"eval", "-m", model, "-g", "1,-1,3"}).code, 2);
    EXPECT_EQ(run({"eval", "-m", write("junk.json", "{not json"), "-g", "-1,1,3"}).code, 2);
}

TEST_F(CliTest, SweepX4) {
    const auto r = run({"sweep", "--poly", "0,0,0,0,1", "--knots=-1,0,1", "--q", "0.5,1,1.5", "--grid", "2001"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::string header;
    const auto rows = csv_rows(r.out, &header);
    EXPECT_EQ(header, "q,sup_error,l2_error,status");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_NEAR(rows[0][1], 0.0384, 1e-3);
    EXPECT_NEAR(rows[1][1], 0.0625, 1e-6);
    EXPECT_NEAR(rows[2][1], 0.1296, 1e-3);
    EXPECT_NE(r.out.find(",fitted"), std::string::npos);
}

TEST_F(CliTest, SweepKeepsInputOrderAndReportsSingular) {
    const auto a = run({"sweep", "-p", "0,1,0,1", "-k", "1,2", "-q", "2,0.5,1"});
    ASSERT_EQ(a.code, 0) << a.err;
    std::istringstream in(a.out);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_EQ(lines[1].rfind("2,", 0), 0u);
    EXPECT_EQ(lines[2], "0.5,nan,nan,singular");
    EXPECT_EQ(lines[3].rfind("1,", 0), 0u);
}

TEST_F(CliTest, SweepMalformed) {
    EXPECT_EQ(run({"sweep", "-p", "0,1", "-k", "1,0", "-q", "1"}).code, 2);
    EXPECT_EQ(run({"sweep", "-p", "0,1", "-k", "0,1", "-q", "0"}).code, 2);
    EXPECT_EQ(run({"sweep", "-p", "x", "-k", "0,1", "-q", "1"}).code, 2);
    EXPECT_EQ(run({"sweep", "-p", "0,1", "-k", "0,1", "-q", "1", "-g", "1"}).code, 2);
}

TEST_F(CliTest, VerifyDatasetPasses) {
    const auto r = run({"verify", "-i", sample("x4.csv"), "-q", "2", "--dq-left=-15", "--dq-right=15"});
    ASSERT_EQ(r.code, 0) << r.out << r.err;
    const auto j = io::json::parse(r.out);
    EXPECT_TRUE(j.at("pass").get<bool>());
    for (const auto& c : j.at("conditions")) EXPECT_LT(c.at("residual").get<double>(), 1e-8);
}

TEST_F(CliTest, VerifyCorruptedModelFails) {
    const auto model = fit_to_file(2.0, -15.0, 15.0);
    auto j = io::json::parse(std::ifstream(model));
    j["pieces"][1]["coeffs"][2] = -1.9;
    const auto bad = write("bad.json", j.dump());
    const auto r = run({"verify", "--model", bad});
    EXPECT_EQ(r.code, 5);
    const auto rep = io::json::parse(r.out);
    EXPECT_FALSE(rep.at("pass").get<bool>());
    EXPECT_TRUE(rep.contains("first_failure"));
    EXPECT_EQ(rep.at("first_failure").at("kind"), "interpolation");
    EXPECT_EQ(rep.at("first_failure").at("knot"), 2);
}

TEST_F(CliTest, VerifySingularAndMalformed) {
    EXPECT_EQ(run({"verify", "-i", sample("singular.csv"), "-q", "0.5", "--dq-left=0", "--dq-right=0"}).code, 3);
    EXPECT_EQ(run({"verify", "-i", sample("x4.csv")}).code, 2);
    EXPECT_EQ(run({"verify"}).code, 2);
}

TEST_F(CliTest, FitThenVerifyPipeline) {
    for (double q : {0.3, 0.5, 0.9, 1.0, 1.1, 1.7, 2.0, 3.0}) {
        const double b4 = q_bracket(4, QParam(q));
        const auto model = fit_to_file(q, -b4, b4);
        const auto r = run({"verify", "-m", model});
        EXPECT_EQ(r.code, 0) << "q=" << q << "\n" << r.out;
    }
}

TEST_F(CliTest, ModelFileRoundTrip) {
    const auto model = fit_to_file(1.3, -2.5, 0.75);
    std::ifstream in(model);
    const auto m = io::parse_model(in);
    EXPECT_EQ(io::serialize_model(m), [&] {
        std::ifstream again(model);
        std::stringstream s;
        s << again.rdbuf();
        return s.str();
    }());
}
