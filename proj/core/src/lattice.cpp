// lattice.cpp: lattice geometries

#include <algorithm>
#include <set>

#include "lgap/errors.hpp"
#include "lgap/liouville.hpp"

namespace lgap {

std::string_view to_string(Geometry g)
{
    switch (g) {
    case Geometry::chain: return "chain";
    case Geometry::cubic: return "cubic";
    case Geometry::star: return "star";
    case Geometry::custom: return "custom";
    }
    return "?";
}

std::string_view to_string(Boundary b)
{
    return b == Boundary::open ? "open" : "periodic";
}

namespace {

std::vector<std::pair<int, int>> normalize_bonds(int n, const std::vector<std::pair<int, int>>& raw)
{
    std::set<std::pair<int, int>> unique;
    for (auto [i, j] : raw) {
        if (i < 0 || j < 0 || i >= n || j >= n) {
            throw DimensionError("bond (" + std::to_string(i) + "," + std::to_string(j) + ") references a missing site");
        }
        if (i == j) throw InvalidModel("self bond on site " + std::to_string(i));
        unique.emplace(std::min(i, j), std::max(i, j));
    }
    return {unique.begin(), unique.end()};
}

} // namespace

Lattice Lattice::chain(int n, Boundary boundary)
{
    if (n < 1) throw DimensionError("chain needs at least one site");
    Lattice lat;
    lat.sites = n;
    lat.geometry = Geometry::chain;
    lat.boundary = boundary;
    lat.dimension = 1;
    lat.extent = {n};
    std::vector<std::pair<int, int>> raw;
    for (int i = 0; i + 1 < n; ++i) raw.emplace_back(i, i + 1);
    if (boundary == Boundary::periodic && n > 2) raw.emplace_back(n - 1, 0);
    lat.bonds = normalize_bonds(n, raw);
    return lat;
}

Lattice Lattice::cubic(int extent, int dimension, Boundary boundary)
{
    if (extent < 1 || dimension < 1) throw DimensionError("cubic lattice needs positive extent and dimension");
    Lattice lat;
    lat.geometry = Geometry::cubic;
    lat.boundary = boundary;
    lat.dimension = dimension;
    lat.extent.assign(static_cast<std::size_t>(dimension), extent);
    lat.sites = 1;
    for (int a = 0; a < dimension; ++a) lat.sites *= extent;

    std::vector<std::pair<int, int>> raw;
    for (int s = 0; s < lat.sites; ++s) {
        int stride = 1;
        for (int a = 0; a < dimension; ++a) {
            const int coord = (s / stride) % extent;
            if (coord + 1 < extent) {
                raw.emplace_back(s, s + stride);
            } else if (boundary == Boundary::periodic && extent > 2) {
                raw.emplace_back(s, s - coord * stride);
            }
            stride *= extent;
        }
    }
    lat.bonds = normalize_bonds(lat.sites, raw);
    return lat;
}

Lattice Lattice::star(int leaves)
{
    if (leaves < 1) throw DimensionError("star needs at least one leaf");
    Lattice lat;
    lat.geometry = Geometry::star;
    lat.sites = leaves + 1;
    std::vector<std::pair<int, int>> raw;
    for (int k = 1; k <= leaves; ++k) raw.emplace_back(0, k);
    lat.bonds = normalize_bonds(lat.sites, raw);
    return lat;
}

Lattice Lattice::custom(int n, std::vector<std::pair<int, int>> bonds)
{
    if (n < 1) throw DimensionError("lattice needs at least one site");
    Lattice lat;
    lat.geometry = Geometry::custom;
    lat.sites = n;
    lat.bonds = normalize_bonds(n, bonds);
    return lat;
}

int Lattice::coordination(int site) const
{
    return static_cast<int>(std::count_if(bonds.begin(), bonds.end(), [site](const auto& b) {
        return b.first == site || b.second == site;
    }));
}

int Lattice::max_coordination() const
{
    int z = 0;
    for (int s = 0; s < sites; ++s) z = std::max(z, coordination(s));
    return z;
}

std::vector<int> Lattice::coordinates(int site) const
{
    if (extent.empty()) throw DimensionError("lattice has no coordinate embedding");
    if (site < 0 || site >= sites) throw DimensionError("site out of range");
    std::vector<int> r;
    for (int e : extent) {
        r.push_back(site % e);
        site /= e;
    }
    return r;
}

} // namespace lgap
