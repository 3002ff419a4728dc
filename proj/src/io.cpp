#include "pdecrl/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace pdecrl {

const char* library_version() { return "pdecrl 1.0.0"; }

void write_field_snapshot(std::ostream& os, const Field& field, double t) {
    os << std::setprecision(17);
    os << "t " << t << "\n";
    os << "dim " << field.grid.dim << " nx " << field.grid.nx << " ny " << field.grid.ny
       << " lx " << field.grid.lx << " ly " << field.grid.ly << " periodic "
       << (field.grid.periodic ? 1 : 0) << " components " << field.components << "\n";
    for (std::size_t i = 0; i < field.data.size(); ++i)
        os << field.data[i] << ((i + 1) % field.grid.ny == 0 ? '\n' : ' ');
    if (field.data.size() % field.grid.ny != 0) os << '\n';
}

Field read_field_snapshot(std::istream& is, double* t_out) {
    std::string tag;
    double t = 0.0;
    if (!(is >> tag >> t) || tag != "t")
        throw std::runtime_error("snapshot: missing time header");
    if (t_out) *t_out = t;

    Grid g;
    int periodic = 1, components = 1;
    auto expect = [&](const char* want, auto& out) {
        if (!(is >> tag >> out) || tag != want)
            throw std::runtime_error(std::string("snapshot: expected '") + want + "' field");
    };
    expect("dim", g.dim);
    expect("nx", g.nx);
    expect("ny", g.ny);
    expect("lx", g.lx);
    expect("ly", g.ly);
    expect("periodic", periodic);
    expect("components", components);
    g.periodic = periodic != 0;

    Field f(g, components);
    for (double& v : f.data)
        if (!(is >> v)) throw std::runtime_error("snapshot: truncated value block");
    return f;
}

void write_field_snapshot_file(const std::string& path, const Field& field, double t) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write snapshot: " + path);
    write_field_snapshot(os, field, t);
}

void write_manifest(const std::string& path, const ExperimentConfig& cfg, const std::string& job,
                    const std::string& extra) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write manifest: " + path);
    os << "# run manifest\n";
    os << "job = " << job << "\n";
    os << "version = " << library_version() << "\n";
    os << "seed = " << cfg.seed << "\n";
    if (!extra.empty()) os << extra;
    os << "\n" << cfg.echo();
}

} // namespace pdecrl
