#pragma once

#include "esq/crit.hpp"
#include "esq/husimi.hpp"
#include "esq/models.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace esq {
namespace io {

// Plain-text table: '#'-prefixed header, whitespace-separated columns.
// Every data column carries a provenance tag (computed | analytic-formula |
// fit) emitted in the header.
struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::string> provenance;  // one tag per column
    std::vector<std::vector<double>> rows;
};

void write_table(const std::string& path, const Table& table);

void write_curve(const std::string& path, const ScanCurve& curve);
void write_marginal(const std::string& path, const MarginalDistribution& marginal);
void write_dos(const std::string& path, const SpectrumHistogram& hist,
               const std::vector<double>* derivative = nullptr);
void write_levels(const std::string& path, const std::vector<double>& levels);

// Binary Husimi field container (magic "ESQFLD01", trailing checksum).
std::uint64_t write_field(const std::string& path, const HusimiField& field);

struct FieldData {
    GridScheme scheme = GridScheme::polar_gauss;
    int n_radial = 0, n_angular = 0;
    double j = 0.0;
    std::vector<double> p, q, w, values;
};

// Verifies magic and checksum; throws std::runtime_error on corruption.
FieldData read_field(const std::string& path);

} // namespace io
} // namespace esq
