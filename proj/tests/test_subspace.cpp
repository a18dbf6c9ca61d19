#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "doa/subspace.hpp"

using namespace doa;

namespace {

CoarrayVector exact_vector(const ArrayGeometry& geom, const CoarrayIndex& index,
                           const RVec& doas, double noise_power) {
    SourceScene scene;
    scene.doas = doas;
    scene.powers = RVec::Ones(doas.size());
    scene.noise_power = noise_power;
    return dctm(analytic_covariance(geom, scene), index);
}

}  // namespace

TEST_CASE("contiguous segment sizes") {
    CHECK(contiguous_segment(coarray_index(build_geometry(GeometryKind::Ula, 4))) == 3);
    CHECK(contiguous_segment(coarray_index(build_geometry(GeometryKind::Naq2, 8))) == 19);
    // holes at +-2: positions {0,1,4} give lags {0,+-1,+-3,+-4}
    CHECK(contiguous_segment(coarray_index(custom_geometry({0, 1, 4}))) == 1);
}

TEST_CASE("ss_music recovers a single off-center source exactly on grid") {
    const auto geom = build_geometry(GeometryKind::Naq2, 8);
    const auto index = coarray_index(geom);
    const auto grid = build_grid(1024);

    // asymmetric source: catches any sign-convention flip end to end
    const int bin = 880;  // positive sine region
    RVec doas(1);
    doas(0) = grid.angles(bin);
    const auto result = ss_music(exact_vector(geom, index, doas, 0.0), index, grid, 1);
    CHECK(result.doas.size() == 1);
    CHECK(result.doas(0) == grid.angles(bin));
    CHECK(result.spectrum.peak_to_median() > 1e3);
}

TEST_CASE("ss_music resolves two exact sources, also under a noise floor") {
    const auto geom = build_geometry(GeometryKind::Snaq2, 8);
    const auto index = coarray_index(geom);
    const auto grid = build_grid(1024);
    RVec doas(2);
    doas(0) = grid.angles(300);
    doas(1) = grid.angles(700);

    for (double noise : {0.0, 0.5}) {
        const auto result = ss_music(exact_vector(geom, index, doas, noise), index, grid, 2);
        REQUIRE(result.doas.size() == 2);
        CHECK(result.doas(0) == grid.angles(300));
        CHECK(result.doas(1) == grid.angles(700));
    }
}

TEST_CASE("ss_music smoothed matrix is PSD and peaks behave") {
    const auto geom = build_geometry(GeometryKind::Naq2, 6);
    const auto index = coarray_index(geom);
    const auto grid = build_grid(256);

    // white-only input: spectrum has no dominant peak
    CoarrayVector white;
    white.values = CVec::Zero(index.dof);
    white.values(index.zero_lag_row()) = 1.0;
    const auto flat = ss_music(white, index, grid, 2);
    CHECK(flat.spectrum.peak_to_median() < 10.0);
    CHECK(flat.doas.size() <= 2);

    // reported peaks are strict local maxima
    RVec doas(2);
    doas(0) = grid.angles(60);
    doas(1) = grid.angles(200);
    const auto result = ss_music(exact_vector(geom, index, doas, 0.1), index, grid, 2);
    for (Eigen::Index i = 0; i < result.doas.size(); ++i) {
        int bin = -1;
        for (int p = 0; p < grid.size(); ++p)
            if (grid.angles(p) == result.doas(i)) bin = p;
        REQUIRE(bin > 0);
        REQUIRE(bin < grid.size() - 1);
        CHECK(result.spectrum.values(bin) >= result.spectrum.values(bin - 1));
        CHECK(result.spectrum.values(bin) >= result.spectrum.values(bin + 1));
    }
}

TEST_CASE("ss_music validates the aperture precondition") {
    const auto geom = custom_geometry({0, 1, 4});  // M = 1
    const auto index = coarray_index(geom);
    const auto grid = build_grid(64);
    CoarrayVector vec;
    vec.values = CVec::Ones(index.dof);
    CHECK_THROWS_AS(ss_music(vec, index, grid, 2), std::invalid_argument);
    CHECK_THROWS_AS(ss_music(vec, index, grid, 0), std::invalid_argument);
    CHECK_NOTHROW(ss_music(vec, index, grid, 1));
}

TEST_CASE("spectrum csv export") {
    const auto geom = build_geometry(GeometryKind::Ula, 4);
    const auto index = coarray_index(geom);
    const auto grid = build_grid(32);
    RVec doas(1);
    doas(0) = grid.angles(20);
    const auto result = ss_music(exact_vector(geom, index, doas, 0.0), index, grid, 1);

    const auto path = std::filesystem::temp_directory_path() / "doa_spectrum_test.csv";
    write_spectrum_csv(result.spectrum, path.string());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "sine,value");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 32);
    std::filesystem::remove(path);
}
