#include "mbrx/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "mbrx/errors.hpp"
#include "mbrx/version.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary outputs assume a little-endian host");

namespace mbrx {

using nlohmann::json;

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_text(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    return out;
}

std::ofstream open_binary(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    return out;
}

const char* kind_name(StationaryKind kind) {
    switch (kind) {
        case StationaryKind::minimum: return "minimum";
        case StationaryKind::saddle: return "saddle";
        case StationaryKind::maximum: return "maximum";
    }
    return "unknown";
}

json grid_json(const GridSpec& g) {
    return json{
        {"nx", g.nx},
        {"ny", g.ny},
        {"extent", {g.extent.x_min, g.extent.x_max, g.extent.y_min, g.extent.y_max}},
        {"dt", g.dt},
        {"mass", g.mass},
        {"hbar", g.hbar},
    };
}

}  // namespace

void write_trajectory_csv(const std::string& path,
                          const Trajectory& trajectory) {
    auto out = open_text(path);
    const bool clamps = !trajectory.node_clamps.empty();
    out << "t,x,y,px,py,E" << (clamps ? ",node_clamps" : "") << '\n';
    for (std::size_t k = 0; k < trajectory.t.size(); ++k) {
        out << format_double(trajectory.t[k]) << ','
            << format_double(trajectory.position[k].x) << ','
            << format_double(trajectory.position[k].y) << ','
            << format_double(trajectory.momentum[k].x) << ','
            << format_double(trajectory.momentum[k].y) << ','
            << format_double(trajectory.energy[k]);
        if (clamps) out << ',' << trajectory.node_clamps[k];
        out << '\n';
    }
}

void write_path_csv(const std::string& path,
                    const ReactionPath& reaction_path) {
    auto out = open_text(path);
    out << "s,x,y,V\n";
    for (const PathPoint& p : reaction_path.points)
        out << format_double(p.s) << ',' << format_double(p.position.x) << ','
            << format_double(p.position.y) << ',' << format_double(p.energy)
            << '\n';
}

void write_series_csv(const std::string& path,
                      const ProbabilitySeries& series) {
    auto out = open_text(path);
    out << "t,P,W,Wbar\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < series.t.size(); ++k) {
        const double P = k < series.P.size() ? series.P[k] : nan;
        const double W = k < series.W.size() ? series.W[k] : nan;
        const double Wbar = k < series.Wbar.size() ? series.Wbar[k] : nan;
        out << format_double(series.t[k]) << ',' << format_double(P) << ','
            << format_double(W) << ',' << format_double(Wbar) << '\n';
    }
}

void write_stationary_csv(const std::string& path,
                          const std::vector<StationaryPoint>& points) {
    auto out = open_text(path);
    out << "kind,x,y,V,eig1,eig2\n";
    for (const StationaryPoint& p : points)
        out << kind_name(p.kind) << ',' << format_double(p.position.x) << ','
            << format_double(p.position.y) << ',' << format_double(p.energy)
            << ',' << format_double(p.eigenvalues[0]) << ','
            << format_double(p.eigenvalues[1]) << '\n';
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows) {
    auto out = open_text(path);
    out << "p0,Wbar_bohm,Wbar_cl_rho0,Wbar_cl_wigner\n";
    for (const SweepRow& r : rows)
        out << format_double(r.p0) << ',' << format_double(r.Wbar_bohm) << ','
            << format_double(r.Wbar_cl_rho0) << ','
            << format_double(r.Wbar_cl_wigner) << '\n';
}

void write_energy_diagram_csv(const std::string& path,
                              const EnergyDiagram& diagram) {
    auto out = open_text(path);
    out << "p0,E_mean,E_mean_minus_delta,E_point\n";
    for (const EnergyDiagramRow& r : diagram.rows)
        out << format_double(r.p0) << ',' << format_double(r.E_mean) << ','
            << format_double(r.E_mean_minus_delta) << ','
            << format_double(r.E_point) << '\n';
}

void write_field(const std::string& base, const WaveField& field,
                 double norm) {
    {
        auto out = open_binary(base + ".bin");
        // std::complex<double> is layout-compatible with double[2].
        out.write(reinterpret_cast<const char*>(field.amp.data()),
                  static_cast<std::streamsize>(field.amp.size() *
                                               sizeof(std::complex<double>)));
    }
    const json sidecar{
        {"layout", "row-major x-fastest interleaved re,im float64 little-endian"},
        {"grid", grid_json(field.grid)},
        {"t", field.t},
        {"norm", norm},
    };
    open_text(base + ".json") << sidecar.dump(2) << '\n';
}

void write_closeness(const std::string& base, const ClosenessMatrix& matrix) {
    {
        auto out = open_binary(base + ".bin");
        out.write(reinterpret_cast<const char*>(matrix.c.data()),
                  static_cast<std::streamsize>(matrix.c.size() * sizeof(double)));
    }
    const json sidecar{
        {"layout", "row-major arc-fastest float64 little-endian"},
        {"n_time", matrix.n_time},
        {"n_arc", matrix.n_arc},
        {"t", {matrix.t.front(), matrix.t.back()}},
        {"s", {matrix.s.front(), matrix.s.back()}},
    };
    open_text(base + ".json") << sidecar.dump(2) << '\n';
}

void write_manifest(const std::string& path, const RunConfig& config) {
    json cfg = json::parse(config_json(config));
    cfg.erase("workers");
    cfg.erase("out_dir");
    const json manifest{
        {"version", kVersion},
        {"seed", config.seed},
        {"config_hash", config_hash(config)},
        {"config", cfg},
    };
    open_text(path) << manifest.dump(2) << '\n';
}

}  // namespace mbrx
