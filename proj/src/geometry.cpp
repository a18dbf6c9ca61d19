#include "doa/geometry.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace doa {

namespace {

std::string unsupported(GeometryKind kind, int n) {
    std::ostringstream os;
    os << "unsupported geometry: " << to_string(kind) << " with N = " << n;
    return os.str();
}

// Published minimum-redundancy layouts (restricted MRAs): the largest
// hole-free aperture achievable with N sensors. Tests re-validate the
// hole-free span and, for N <= 5, minimality by exhaustive search.
const std::map<int, std::vector<int>>& mra_table() {
    static const std::map<int, std::vector<int>> table = {
        {3, {0, 1, 3}},
        {4, {0, 1, 4, 6}},
        {5, {0, 1, 4, 7, 9}},
        {6, {0, 1, 6, 9, 11, 13}},
        {7, {0, 1, 8, 11, 13, 15, 17}},
        {8, {0, 1, 2, 11, 15, 18, 21, 23}},
        {9, {0, 1, 2, 14, 18, 21, 24, 27, 29}},
        {10, {0, 1, 3, 6, 13, 20, 27, 31, 35, 36}},
    };
    return table;
}

// Minimum-hole layouts (optimal Golomb rulers): every pairwise
// difference distinct. Tests re-validate the zero-redundancy property.
const std::map<int, std::vector<int>>& mha_table() {
    static const std::map<int, std::vector<int>> table = {
        {3, {0, 1, 3}},
        {4, {0, 1, 4, 6}},
        {5, {0, 1, 4, 9, 11}},
        {6, {0, 1, 4, 10, 12, 17}},
        {7, {0, 1, 4, 10, 18, 23, 25}},
        {8, {0, 1, 4, 9, 15, 22, 32, 34}},
        {9, {0, 1, 5, 12, 25, 27, 35, 41, 44}},
        {10, {0, 1, 6, 10, 23, 26, 34, 41, 53, 55}},
    };
    return table;
}

// Second-order super-nested rearrangements of the parent nested array:
// same sensor count, aperture, and difference coarray, with the
// unit-spacing weight reduced from N1 to 1. Derived by exhaustive
// search over same-coarray layouts, minimizing the coupling weights
// (w1, w2, w3, w4) and breaking ties lexicographically; tests check the
// coarray identity against the parent by brute force.
const std::map<int, std::vector<int>>& snaq2_table() {
    static const std::map<int, std::vector<int>> table = {
        {7, {1, 2, 5, 8, 10, 13, 15}},
        {8, {1, 2, 5, 9, 13, 15, 18, 20}},
        {9, {1, 2, 5, 9, 13, 17, 19, 22, 24}},
        {10, {1, 2, 7, 10, 15, 18, 23, 26, 28, 30}},
    };
    return table;
}

std::vector<int> nested_positions(int n_sensors) {
    const int n1 = (n_sensors + 1) / 2;
    const int n2 = n_sensors / 2;
    std::vector<int> pos;
    pos.reserve(n_sensors);
    for (int i = 1; i <= n1; ++i) pos.push_back(i);
    for (int m = 1; m <= n2; ++m) pos.push_back(m * (n1 + 1));
    std::sort(pos.begin(), pos.end());
    return pos;
}

}  // namespace

GeometryKind parse_geometry_kind(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "ula") return GeometryKind::Ula;
    if (lower == "naq2" || lower == "nested") return GeometryKind::Naq2;
    if (lower == "snaq2" || lower == "supernested") return GeometryKind::Snaq2;
    if (lower == "mra") return GeometryKind::Mra;
    if (lower == "mha") return GeometryKind::Mha;
    if (lower == "custom") return GeometryKind::Custom;
    throw std::invalid_argument("unknown geometry kind: " + std::string(name));
}

std::string to_string(GeometryKind kind) {
    switch (kind) {
        case GeometryKind::Ula: return "ULA";
        case GeometryKind::Naq2: return "NAQ2";
        case GeometryKind::Snaq2: return "SNAQ2";
        case GeometryKind::Mra: return "MRA";
        case GeometryKind::Mha: return "MHA";
        case GeometryKind::Custom: return "Custom";
    }
    return "?";
}

ArrayGeometry build_geometry(GeometryKind kind, int n_sensors) {
    if (n_sensors < 2) throw std::invalid_argument(unsupported(kind, n_sensors));
    ArrayGeometry geom;
    geom.kind = kind;
    switch (kind) {
        case GeometryKind::Ula:
            geom.positions.resize(n_sensors);
            std::iota(geom.positions.begin(), geom.positions.end(), 0);
            return geom;
        case GeometryKind::Naq2:
            geom.positions = nested_positions(n_sensors);
            return geom;
        case GeometryKind::Snaq2: {
            auto it = snaq2_table().find(n_sensors);
            if (it == snaq2_table().end())
                throw std::invalid_argument(unsupported(kind, n_sensors));
            geom.positions = it->second;
            return geom;
        }
        case GeometryKind::Mra: {
            auto it = mra_table().find(n_sensors);
            if (it == mra_table().end())
                throw std::invalid_argument(unsupported(kind, n_sensors));
            geom.positions = it->second;
            return geom;
        }
        case GeometryKind::Mha: {
            auto it = mha_table().find(n_sensors);
            if (it == mha_table().end())
                throw std::invalid_argument(unsupported(kind, n_sensors));
            geom.positions = it->second;
            return geom;
        }
        case GeometryKind::Custom:
            throw std::invalid_argument("custom geometries take explicit positions");
    }
    throw std::invalid_argument(unsupported(kind, n_sensors));
}

ArrayGeometry custom_geometry(std::vector<int> positions) {
    if (positions.size() < 2)
        throw std::invalid_argument("geometry needs at least 2 sensors");
    for (std::size_t i = 1; i < positions.size(); ++i)
        if (positions[i] <= positions[i - 1])
            throw std::invalid_argument("positions must be strictly increasing");
    if (positions.front() < 0)
        throw std::invalid_argument("positions must be non-negative");
    ArrayGeometry geom;
    geom.positions = std::move(positions);
    geom.kind = GeometryKind::Custom;
    return geom;
}

ArrayGeometry load_geometry_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open geometry file: " + path);
    std::vector<int> positions;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        positions.push_back(std::stoi(line));
    }
    return custom_geometry(std::move(positions));
}

CoarrayIndex coarray_index(const ArrayGeometry& geom) {
    const int n = geom.size();
    CoarrayIndex index;
    index.diff_vector.resize(static_cast<std::size_t>(n) * n);
    // c = a kron 1_N - 1_N kron a: c[i*N + k] = n_i - n_k
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            index.diff_vector[static_cast<std::size_t>(i) * n + k] =
                geom.positions[i] - geom.positions[k];

    // first occurrence of each distinct lag, then ascending lag order
    std::map<int, int> first_occurrence;
    for (int m = 0; m < n * n; ++m)
        first_occurrence.try_emplace(index.diff_vector[m], m);
    index.lags.reserve(first_occurrence.size());
    index.selection.reserve(first_occurrence.size());
    for (const auto& [lag, where] : first_occurrence) {
        index.lags.push_back(lag);
        index.selection.push_back(where);
    }
    index.dof = static_cast<int>(index.lags.size());
    return index;
}

CVec coarray_select(const CVec& full_vector, const CoarrayIndex& index) {
    const auto n2 = static_cast<Eigen::Index>(index.diff_vector.size());
    if (full_vector.size() != n2) {
        std::ostringstream os;
        os << "coarray_select: expected length " << n2 << ", got " << full_vector.size();
        throw std::invalid_argument(os.str());
    }
    CVec out(index.dof);
    for (int k = 0; k < index.dof; ++k) out(k) = full_vector(index.selection[k]);
    return out;
}

}  // namespace doa
