#include "mbrx/io.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mbrx/errors.hpp"
#include "mbrx/quantum.hpp"

using namespace mbrx;

namespace {

std::string scratch(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<double> split_doubles(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("format_double round-trips exactly") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 1e300, 700.0, 0.0,
                     0.6234994049, -0.146700}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
        // Shortest form: plain integers do not drag trailing zeros around.
        CHECK(format_double(700.0) == "700");
    }
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("trajectory csv with and without clamp counts") {
    Trajectory traj;
    traj.t = {0.0, 1.0};
    traj.position = {{0.1, 0.2}, {0.3, 0.4}};
    traj.momentum = {{-4.0, 4.0}, {-3.5, 3.5}};
    traj.energy = {-0.1, -0.1};

    const std::string path = scratch("mbrx_traj.csv");
    write_trajectory_csv(path, traj);
    auto lines = read_lines(path);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "t,x,y,px,py,E");
    const auto row = split_doubles(lines[2]);
    REQUIRE(row.size() == 6);
    CHECK(row[1] == 0.3);
    CHECK(row[4] == 3.5);

    traj.node_clamps = {0, 2};
    write_trajectory_csv(path, traj);
    lines = read_lines(path);
    CHECK(lines[0] == "t,x,y,px,py,E,node_clamps");
    CHECK(lines[2].substr(lines[2].size() - 2) == ",2");
}

TEST_CASE("series csv pads missing columns with nan") {
    ProbabilitySeries s;
    s.t = {0.0, 1.0};
    s.W = {0.0, 0.25};
    s.Wbar = {0.0, 0.5};

    const std::string path = scratch("mbrx_series.csv");
    write_series_csv(path, s);
    const auto lines = read_lines(path);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "t,P,W,Wbar");
    CHECK(lines[1] == "0,nan,0,0");
    CHECK(lines[2] == "1,nan,0.25,0.5");
}

TEST_CASE("reaction path and stationary point csv") {
    ReactionPath rp;
    rp.points = {{0.0, {0.0, 0.0}, -0.1}, {1.5, {1.0, 1.0}, -0.05}};
    const std::string rp_path = scratch("mbrx_rp.csv");
    write_path_csv(rp_path, rp);
    auto lines = read_lines(rp_path);
    CHECK(lines[0] == "s,x,y,V");
    CHECK(lines[2] == "1.5,1,1,-0.05");

    StationaryPoint p;
    p.position = {0.5, -0.25};
    p.energy = -0.08;
    p.eigenvalues = {100.0, 200.0};
    p.kind = StationaryKind::saddle;
    const std::string st_path = scratch("mbrx_stationary.csv");
    write_stationary_csv(st_path, {p});
    lines = read_lines(st_path);
    CHECK(lines[0] == "kind,x,y,V,eig1,eig2");
    CHECK(lines[1] == "saddle,0.5,-0.25,-0.08,100,200");
}

TEST_CASE("sweep and energy diagram csv") {
    const std::string sw_path = scratch("mbrx_sweep.csv");
    write_sweep_csv(sw_path, {{4.0, 0.5, 0.25, 0.375}});
    auto lines = read_lines(sw_path);
    CHECK(lines[0] == "p0,Wbar_bohm,Wbar_cl_rho0,Wbar_cl_wigner");
    CHECK(lines[1] == "4,0.5,0.25,0.375");

    EnergyDiagram d;
    d.rows = {{4.0, -0.08, -0.09, -0.0995}};
    const std::string ed_path = scratch("mbrx_ediag.csv");
    write_energy_diagram_csv(ed_path, d);
    lines = read_lines(ed_path);
    CHECK(lines[0] == "p0,E_mean,E_mean_minus_delta,E_point");
    CHECK(lines[1] == "4,-0.08,-0.09,-0.0995");
}

TEST_CASE("field dump preserves amplitudes bit for bit") {
    GridSpec grid;
    grid.nx = 64;
    grid.ny = 64;
    grid.extent = {-1.0, 1.0, -1.0, 1.0};
    WaveField field = initial_packet(grid, {0.0, 0.0}, 0.0125, {-4.0, 4.0});
    field.t = 3.25;

    const std::string base = scratch("mbrx_field");
    write_field(base, field, 1.0);

    const std::string raw = read_all(base + ".bin");
    REQUIRE(raw.size() == field.amp.size() * sizeof(std::complex<double>));
    const auto* vals = reinterpret_cast<const double*>(raw.data());
    for (std::size_t k = 0; k < field.amp.size(); ++k) {
        CHECK(vals[2 * k] == field.amp[k].real());
        CHECK(vals[2 * k + 1] == field.amp[k].imag());
    }

    const std::string sidecar = read_all(base + ".json");
    CHECK(sidecar.find("\"nx\": 64") != std::string::npos);
    CHECK(sidecar.find("\"t\": 3.25") != std::string::npos);
}

TEST_CASE("closeness dump matches the matrix") {
    ClosenessMatrix m;
    m.n_time = 2;
    m.n_arc = 3;
    m.c = {0.0, 1.0, 4.0, 1.0, 0.0, 1.0};
    m.t = {0.0, 10.0};
    m.s = {0.0, 0.5, 1.0};

    const std::string base = scratch("mbrx_cara");
    write_closeness(base, m);
    const std::string raw = read_all(base + ".bin");
    REQUIRE(raw.size() == 6 * sizeof(double));
    const auto* vals = reinterpret_cast<const double*>(raw.data());
    CHECK(vals[2] == 4.0);
    CHECK(vals[5] == 1.0);
    const std::string sidecar = read_all(base + ".json");
    CHECK(sidecar.find("\"n_arc\": 3") != std::string::npos);
}

TEST_CASE("manifest is independent of workers and output directory") {
    RunConfig a;
    a.seed = 7;
    a.workers = 1;
    a.out_dir = "out_a";
    RunConfig b = a;
    b.workers = 4;
    b.out_dir = "out_b";

    const std::string pa = scratch("mbrx_manifest_a.json");
    const std::string pb = scratch("mbrx_manifest_b.json");
    write_manifest(pa, a);
    write_manifest(pb, b);
    CHECK(read_all(pa) == read_all(pb));

    const std::string text = read_all(pa);
    CHECK(text.find("\"version\"") != std::string::npos);
    CHECK(text.find("\"config_hash\"") != std::string::npos);
    CHECK(text.find("\"seed\": 7") != std::string::npos);
    CHECK(text.find("workers") == std::string::npos);
    CHECK(text.find("timestamp") == std::string::npos);
}

TEST_CASE("unwritable destinations raise config errors") {
    Trajectory traj;
    traj.t = {0.0};
    traj.position = {{0.0, 0.0}};
    traj.momentum = {{0.0, 0.0}};
    traj.energy = {0.0};
    CHECK_THROWS_AS(write_trajectory_csv("/nonexistent/dir/x.csv", traj),
                    ConfigError);
}

}  // TEST_SUITE
