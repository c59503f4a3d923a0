#include "esq/io.hpp"
#include "esq/util.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace esq {
namespace io {

namespace {

constexpr char kTableHeader[] = "# esq-table v1";
constexpr char kFieldMagic[8] = {'E', 'S', 'Q', 'F', 'L', 'D', '0', '1'};

std::string g17(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path, std::ios::openmode extra = {})
{
    std::ofstream out(path, std::ios::trunc | extra);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

} // namespace

void write_table(const std::string& path, const Table& table)
{
    if (!table.provenance.empty() && table.provenance.size() != table.columns.size())
        throw std::invalid_argument("write_table: provenance/column count mismatch");
    auto out = open_out(path);
    out << kTableHeader << '\n';
    for (const auto& c : table.comments) out << "# " << c << '\n';
    out << "# columns:";
    for (const auto& c : table.columns) out << ' ' << c;
    out << '\n';
    if (!table.provenance.empty()) {
        out << "# provenance:";
        for (const auto& p : table.provenance) out << ' ' << p;
        out << '\n';
    }
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("write_table: ragged row");
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? " " : "") << g17(row[i]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_curve(const std::string& path, const ScanCurve& curve)
{
    Table t;
    t.comments = {"measure " + curve.measure + " vs " + curve.parameter};
    t.columns = {curve.parameter, curve.measure};
    t.provenance = {"computed", "computed"};
    for (std::size_t i = 0; i < curve.params.size(); ++i)
        t.rows.push_back({curve.params[i], curve.values[i]});
    write_table(path, t);
}

void write_marginal(const std::string& path, const MarginalDistribution& marginal)
{
    Table t;
    t.comments = {std::string("marginal along ") + marginal.axis +
                  ", norm residual " + g17(marginal.norm_residual)};
    t.columns = {std::string(1, marginal.axis), "gl_weight", "value"};
    t.provenance = {"computed", "computed", "computed"};
    for (std::size_t i = 0; i < marginal.nodes.size(); ++i)
        t.rows.push_back({marginal.nodes[i], marginal.gl_weights[i], marginal.values[i]});
    write_table(path, t);
}

void write_dos(const std::string& path, const SpectrumHistogram& hist,
               const std::vector<double>* derivative)
{
    Table t;
    t.comments = {"levels " + std::to_string(hist.level_count) +
                  ", smoothing width " + g17(hist.smoothing_width)};
    t.columns = {"energy", "density"};
    t.provenance = {"computed", "computed"};
    if (derivative) {
        t.columns.push_back("d_density");
        t.provenance.push_back("computed");
    }
    for (std::size_t i = 0; i < hist.bin_centers.size(); ++i) {
        std::vector<double> row{hist.bin_centers[i], hist.density[i]};
        if (derivative) row.push_back((*derivative)[i]);
        t.rows.push_back(std::move(row));
    }
    write_table(path, t);
}

void write_levels(const std::string& path, const std::vector<double>& levels)
{
    Table t;
    t.columns = {"index", "energy"};
    t.provenance = {"computed", "computed"};
    for (std::size_t i = 0; i < levels.size(); ++i)
        t.rows.push_back({static_cast<double>(i), levels[i]});
    write_table(path, t);
}

std::uint64_t write_field(const std::string& path, const HusimiField& field)
{
    const PhaseSpaceGrid& g = *field.grid;
    std::string buf;
    auto put = [&buf](const void* data, std::size_t len) {
        buf.append(static_cast<const char*>(data), len);
    };
    put(kFieldMagic, sizeof(kFieldMagic));
    const std::uint8_t scheme = g.scheme == GridScheme::polar_gauss ? 0 : 1;
    const std::int64_t nr = g.n_radial, na = g.n_angular;
    const std::uint64_t npts = g.size();
    put(&scheme, 1);
    put(&nr, 8);
    put(&na, 8);
    put(&field.j, 8);
    put(&npts, 8);
    put(g.p.data(), 8 * npts);
    put(g.q.data(), 8 * npts);
    put(g.w.data(), 8 * npts);
    put(field.values.data(), 8 * npts);
    std::uint64_t sum = fnv1a64(buf.data(), buf.size());
    put(&sum, 8);

    auto out = open_out(path, std::ios::binary);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
    return sum;
}

FieldData read_field(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (buf.size() < sizeof(kFieldMagic) + 33 + 8 ||
        std::memcmp(buf.data(), kFieldMagic, sizeof(kFieldMagic)) != 0)
        throw std::runtime_error("not a field file: " + path);
    std::uint64_t stored;
    std::memcpy(&stored, buf.data() + buf.size() - 8, 8);
    if (fnv1a64(buf.data(), buf.size() - 8) != stored)
        throw std::runtime_error("field file checksum mismatch: " + path);

    FieldData fd;
    std::size_t off = sizeof(kFieldMagic);
    std::uint8_t scheme = static_cast<std::uint8_t>(buf[off]); off += 1;
    fd.scheme = scheme == 0 ? GridScheme::polar_gauss : GridScheme::cartesian_masked;
    std::int64_t nr, na;
    std::uint64_t npts;
    std::memcpy(&nr, buf.data() + off, 8); off += 8;
    std::memcpy(&na, buf.data() + off, 8); off += 8;
    std::memcpy(&fd.j, buf.data() + off, 8); off += 8;
    std::memcpy(&npts, buf.data() + off, 8); off += 8;
    fd.n_radial = static_cast<int>(nr);
    fd.n_angular = static_cast<int>(na);
    if (off + 4 * 8 * npts + 8 != buf.size())
        throw std::runtime_error("field file size mismatch: " + path);
    auto take = [&](std::vector<double>& v) {
        v.resize(npts);
        std::memcpy(v.data(), buf.data() + off, 8 * npts);
        off += 8 * npts;
    };
    take(fd.p);
    take(fd.q);
    take(fd.w);
    take(fd.values);
    return fd;
}

} // namespace io
} // namespace esq
