#include "ncstokes/analysis.hpp"
#include "ncstokes/cli.hpp"

#include "gauss.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace ncstokes;

namespace {

const std::filesystem::path kData = NCSTOKES_TEST_DATA_DIR;

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "ncstokes");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> result;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        result.push_back(line);
    }
    return result;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        cells.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (comma == std::string::npos) {
            return cells;
        }
        pos = comma + 1;
    }
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class TempDir {
public:
    TempDir() {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        path_ = std::filesystem::temp_directory_path() /
                (std::string("ncstokes_cli_") + info->test_suite_name() + "_" + info->name());
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

constexpr std::string_view kHeader = "n,h,rel_l2_u,rel_h1_u,rel_l2_p,rate_l2,rate_h1,rate_p";

} // namespace

TEST(CliExitCodes, ConfigurationErrors) {
    EXPECT_EQ(run({}).code, kExitConfig);
    EXPECT_EQ(run({"bogus"}).code, kExitConfig);
    EXPECT_EQ(run({"convergence", "--pair", "taylor-hood", "--levels", "4"}).code, kExitConfig);
    EXPECT_EQ(run({"convergence", "--levels", ""}).code, kExitConfig);
    EXPECT_EQ(run({"convergence"}).code, kExitConfig);
    EXPECT_EQ(run({"convergence", "--levels", "8,4"}).code, kExitConfig);
    EXPECT_EQ(run({"convergence", "--levels", "4,x"}).code, kExitConfig);
    EXPECT_EQ(run({"convergence", "--levels", "0"}).code, kExitConfig);
    EXPECT_EQ(run({"convergence", "--levels", "4", "--problem", "cavity"}).code, kExitConfig);
    EXPECT_EQ(run({"convergence", "--levels", "4", "--problem", "nope"}).code, kExitConfig);
    EXPECT_EQ(run({"convergence", "--levels", "4", "--mesh", "x.mesh"}).code, kExitConfig);
    EXPECT_EQ(run({"convergence", "--levels", "4", "--solver", "gmres"}).code, kExitConfig);
    EXPECT_EQ(run({"convergence", "--levels", "4", "--pattern", "crisscross"}).code, kExitConfig);
    EXPECT_EQ(run({"convergence", "--levels", "4", "--nu", "-1"}).code, kExitConfig);
    EXPECT_EQ(run({"convergence", "--levels", "4", "--jobs", "0"}).code, kExitConfig);
    EXPECT_EQ(run({"solve", "--levels", "4"}).code, kExitConfig);
    EXPECT_EQ(run({"solve", "--levels", "4,8", "--out", "x.vtk"}).code, kExitConfig);
    EXPECT_EQ(run({"infsup", "--levels", ""}).code, kExitConfig);
    EXPECT_EQ(run({"infsup", "--pair", "p1-p1-stab", "--levels", "4"}).code, kExitConfig);
}

TEST(CliExitCodes, UnstableCombinationsRejected) {
    EXPECT_EQ(run({"convergence", "--pair", "p1-p1-stab", "--stab", "off", "--levels", "4"}).code, kExitConfig);
    EXPECT_EQ(run({"convergence", "--pair", "ncp1-p0", "--stab", "on", "--levels", "4"}).code, kExitConfig);
    EXPECT_EQ(run({"convergence", "--stab", "maybe", "--levels", "4"}).code, kExitConfig);
}

TEST(CliExitCodes, HelpIsSuccess) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("convergence"), std::string::npos);
}

TEST(CliExitCodes, IoErrors) {
    EXPECT_EQ(run({"convergence", "--levels", "4", "--out", "/nonexistent/dir/t.csv"}).code, kExitIo);
    EXPECT_EQ(run({"solve", "--levels", "4", "--out", "/nonexistent/dir/c.vtk"}).code, kExitIo);
    EXPECT_EQ(run({"solve", "--mesh", "/nonexistent/m.mesh", "--out", "c.vtk"}).code, kExitIo);
}

TEST(CliConvergence, SingleLevelHasEmptyRates) {
    const auto r = run({"convergence", "--pair", "ncp1-p1", "--problem", "mms1", "--levels", "10"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], kHeader);
    const auto cells = split(rows[1]);
    ASSERT_EQ(cells.size(), 8u);
    EXPECT_EQ(cells[0], "10");
    EXPECT_EQ(cells[5], "");
    EXPECT_EQ(cells[6], "");
    EXPECT_EQ(cells[7], "");
    EXPECT_NEAR(std::stod(cells[2]), 0.152528, 0.25 * 0.152528);
}

TEST(CliConvergence, RatesFormattedAndDeterministic) {
    TempDir dir;
    const auto a = dir / "a.csv";
    const auto b = dir / "b.csv";
    ASSERT_EQ(run({"convergence", "--levels", "4,8,12", "--out", a.string()}).code, kExitOk);
    ASSERT_EQ(run({"convergence", "--levels", "4,8,12", "--out", b.string(), "--jobs", "3", "--threads", "2"}).code,
              kExitOk);
    const auto text = slurp(a);
    EXPECT_EQ(text, slurp(b));
    const auto rows = lines(text);
    ASSERT_EQ(rows.size(), 4u);
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const auto cells = split(rows[i]);
        for (std::size_t c = 5; c < 8; ++c) {
            const auto dot = cells[c].find('.');
            ASSERT_NE(dot, std::string::npos);
            EXPECT_EQ(cells[c].size() - dot - 1, 4u) << cells[c];
        }
    }
}

TEST(CliConvergence, UzawaAndPatternOptions) {
    const auto direct = run({"convergence", "--levels", "6", "--pattern", "skew3"});
    const auto uzawa = run({"convergence", "--levels", "6", "--pattern", "skew3", "--solver", "uzawa"});
    ASSERT_EQ(direct.code, kExitOk);
    ASSERT_EQ(uzawa.code, kExitOk);
    EXPECT_EQ(direct.out, uzawa.out);
    EXPECT_TRUE(direct.err.empty());
    const auto diag = run({"convergence", "--levels", "6"});
    EXPECT_NE(diag.err.find("spurious"), std::string::npos);
}

TEST(CliSolve, CavityVtkStructure) {
    TempDir dir;
    const auto path = dir / "cavity.vtk";
    const auto r = run({"solve", "--problem", "cavity", "--levels", "16", "--out", path.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = lines(slurp(path));
    ASSERT_GT(rows.size(), 5u);
    EXPECT_EQ(rows[0], "# vtk DataFile Version 3.0");
    EXPECT_EQ(rows[2], "ASCII");
    EXPECT_EQ(rows[3], "DATASET UNSTRUCTURED_GRID");
    auto find = [&](const std::string& prefix) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].rfind(prefix, 0) == 0) {
                return static_cast<int>(i);
            }
        }
        return -1;
    };
    EXPECT_GE(find("POINTS 289 "), 0);
    EXPECT_GE(find("CELLS 512 2048"), 0);
    EXPECT_GE(find("CELL_TYPES 512"), 0);
    EXPECT_GE(find("CELL_DATA 512"), 0);
    EXPECT_GE(find("VECTORS velocity"), 0);
    EXPECT_GE(find("POINT_DATA 289"), 0);
    EXPECT_GE(find("SCALARS pressure"), 0);
    const int types = find("CELL_TYPES");
    for (int i = types + 1; i <= types + 512; ++i) {
        EXPECT_EQ(rows[static_cast<std::size_t>(i)], "5");
    }
}

// Jensen on each cell: |K| |avg_K e|^2 <= ||e||^2_K, so the area-weighted
// norm of the cell-average errors cannot exceed the L2 error.
TEST(CliSolve, ManufacturedCellAveragesWithinErrorBound) {
    TempDir dir;
    const auto path = dir / "mms.vtk";
    ASSERT_EQ(run({"solve", "--problem", "mms1", "--levels", "8", "--out", path.string()}).code, kExitOk);
    const auto rows = lines(slurp(path));
    std::size_t at = 0;
    while (at < rows.size() && rows[at].rfind("VECTORS velocity", 0) != 0) {
        ++at;
    }
    ASSERT_LT(at, rows.size());
    const auto mesh = build_structured_mesh(8);
    const auto problem = mms_problem();
    const auto d = solve_problem(mesh, scheme(PairId::Ncp1P1), problem);
    const double bound = error_norms(mesh, d.velocity, d.pressure, d.solution, *problem.exact).l2_u;
    double weighted = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        std::istringstream in(rows[at + 1 + static_cast<std::size_t>(t)]);
        double ux = 0.0, uy = 0.0, uz = 0.0;
        in >> ux >> uy >> uz;
        const auto c = mesh.corners(t);
        const double area = mesh.signed_area(t);
        Vec2 u{};
        for (std::size_t k = 0; k < 2; ++k) {
            u[k] = oracle::triangle_integral([&](double x, double y) { return problem.exact->u({x, y})[k]; }, c[0],
                                             c[1], c[2], 10) /
                   area;
        }
        weighted += area * ((ux - u[0]) * (ux - u[0]) + (uy - u[1]) * (uy - u[1]));
        EXPECT_EQ(uz, 0.0);
    }
    EXPECT_GT(weighted, 0.0);
    EXPECT_LE(std::sqrt(weighted), bound);
}

TEST(CliSolve, ImportedMeshAndPressureOnCells) {
    TempDir dir;
    const auto path = dir / "two.vtk";
    const auto r = run({"solve", "--pair", "ncp1-p0", "--mesh", (kData / "two_triangles.mesh").string(), "--out",
                        path.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto text = slurp(path);
    EXPECT_NE(text.find("CELLS 2 8"), std::string::npos);
    EXPECT_NE(text.find("SCALARS pressure"), std::string::npos);
    EXPECT_EQ(text.find("POINT_DATA"), std::string::npos);
    EXPECT_EQ(run({"solve", "--mesh", (kData / "two_triangles.mesh").string(), "--levels", "4", "--out",
                   path.string()})
                  .code,
              kExitConfig);
}

TEST(CliInfSup, RowsAndSpuriousModeReport) {
    const auto skew = run({"infsup", "--pair", "ncp1-p1", "--levels", "4,8,16", "--pattern", "skew3"});
    ASSERT_EQ(skew.code, kExitOk) << skew.err;
    auto rows = lines(skew.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "n,h,beta_h");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_GT(std::stod(split(rows[i])[2]), 0.0);
    }

    const auto diag = run({"infsup", "--pair", "ncp1-p1", "--levels", "4,8"});
    ASSERT_EQ(diag.code, kExitOk);
    rows = lines(diag.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(std::stod(split(rows[1])[2]), 0.0);
    EXPECT_NE(diag.err.find("2 spurious pressure modes"), std::string::npos);

    const auto p0 = run({"infsup", "--pair", "ncp1-p0", "--levels", "4,8", "--nu", "0.01"});
    ASSERT_EQ(p0.code, kExitOk);
    rows = lines(p0.out);
    ASSERT_EQ(rows.size(), 3u);
    const double b4 = std::stod(split(rows[1])[2]);
    const double b8 = std::stod(split(rows[2])[2]);
    EXPECT_GT(b4, 0.0);
    EXPECT_GT(b8, 0.0);
    EXPECT_NEAR(b4, estimate_infsup(4, MeshPattern::Diagonal, scheme(PairId::Ncp1P0)).beta_h, 1e-9);
}
