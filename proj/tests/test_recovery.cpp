#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "doa/coarray.hpp"
#include "doa/recovery.hpp"
#include "doa/rng.hpp"
#include "doa/signal_model.hpp"

using namespace doa;

namespace {

struct Fixture {
    ArrayGeometry geom = build_geometry(GeometryKind::Snaq2, 8);
    CoarrayIndex index = coarray_index(geom);
    AngularGrid grid = build_grid(1024);
    Dictionary dict = build_dictionary(geom, index, grid);
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

bool contains(const std::vector<int>& support, int idx) {
    return std::find(support.begin(), support.end(), idx) != support.end();
}

CVec exact_coarray(const Fixture& f, const std::vector<int>& bins, double noise_power) {
    SourceScene scene;
    scene.doas.resize(static_cast<Eigen::Index>(bins.size()));
    for (std::size_t i = 0; i < bins.size(); ++i) scene.doas(static_cast<Eigen::Index>(i)) = f.grid.angles(bins[i]);
    scene.powers = RVec::Ones(scene.doas.size());
    scene.noise_power = noise_power;
    return dctm(analytic_covariance(f.geom, scene), f.index).values;
}

}  // namespace

TEST_CASE("extract_doas drops the noise atom and sorts") {
    const auto& f = fixture();
    const int g = f.grid.size();
    const RVec one = extract_doas({g, 5}, f.grid);
    CHECK(one.size() == 1);
    CHECK(one(0) == f.grid.angles(5));

    const RVec three = extract_doas({900, 5, 300}, f.grid);
    CHECK(three.size() == 3);
    CHECK(three(0) == f.grid.angles(5));
    CHECK(three(1) == f.grid.angles(300));
    CHECK(three(2) == f.grid.angles(900));

    CHECK(extract_doas({}, f.grid).size() == 0);
}

TEST_CASE("omp picks an exact atom") {
    const auto& f = fixture();
    const CVec y = f.dict.atoms.col(17);
    const auto result = omp(f.dict, y, 2);
    CHECK(result.support.size() == 2);
    CHECK(result.support[0] == f.dict.noise_atom());
    CHECK(contains(result.support, 17));
    CHECK(result.doa_estimates.size() == 1);
    CHECK(result.doa_estimates(0) == f.grid.angles(17));
}

TEST_CASE("omp separates two well-separated weighted atoms") {
    const auto& f = fixture();
    // bins 0.98 apart in sine, many coarray beamwidths
    const CVec y = 3.0 * f.dict.atoms.col(100) + 2.0 * f.dict.atoms.col(600);

    // brute-force correlation oracle: the strongest single atom is 100
    int best = -1;
    double best_mag = -1.0;
    for (int d = 0; d < f.grid.size(); ++d) {
        const double mag = std::abs(f.dict.atoms.col(d).dot(y));
        if (mag > best_mag) {
            best_mag = mag;
            best = d;
        }
    }
    CHECK(best == 100);

    const auto result = omp(f.dict.atoms, y, 3, f.grid);
    CHECK(contains(result.support, 100));
    CHECK(contains(result.support, 600));
    CHECK(std::abs(result.coefficients(100) - Complex(3.0)) < 1e-8);
    CHECK(std::abs(result.coefficients(600) - Complex(2.0)) < 1e-8);
}

TEST_CASE("omp recovers a noiseless on-grid pair end to end") {
    const auto& f = fixture();
    const std::vector<int> bins = {256, 768};
    const CVec y = exact_coarray(f, bins, 0.0);
    const auto result = omp(f.dict, y, 3);
    CHECK(result.doa_estimates.size() == 2);
    CHECK(result.doa_estimates(0) == f.grid.angles(256));
    CHECK(result.doa_estimates(1) == f.grid.angles(768));
}

TEST_CASE("omp on noiseless on-grid pairs stays within a bin of the truth") {
    // mutual Dirichlet sidelobes between two coherent atoms can shift a
    // corr-max pick by one bin even without noise; the greedy picks stay
    // near the truth but exact-bin hits are not structural
    const auto& f = fixture();
    Rng rng(1);
    int within_one = 0, total = 0;
    for (int round = 0; round < 200; ++round) {
        const int a = 30 + static_cast<int>(rng.uniform() * 960);
        const int b = 30 + static_cast<int>(rng.uniform() * 960);
        if (std::abs(a - b) < 60) continue;
        ++total;
        const CVec y = exact_coarray(f, {std::min(a, b), std::max(a, b)}, 0.0);
        const auto result = omp(f.dict, y, 3);
        int worst = 0;
        for (int bin : {std::min(a, b), std::max(a, b)}) {
            int closest = 1 << 20;
            for (int s : result.support)
                if (s != f.dict.noise_atom()) closest = std::min(closest, std::abs(s - bin));
            worst = std::max(worst, closest);
        }
        CHECK(worst <= 3);
        if (worst <= 1) ++within_one;
    }
    CHECK(total > 150);
    CHECK(within_one >= total * 9 / 10);
}

TEST_CASE("omp never selects an atom twice") {
    const auto& f = fixture();
    Rng rng(31);
    CVec y(f.index.dof);
    for (int i = 0; i < f.index.dof; ++i) y(i) = rng.complex_normal();
    const auto result = omp(f.dict, y, 7);
    std::set<int> unique(result.support.begin(), result.support.end());
    CHECK(unique.size() == result.support.size());
    CHECK(result.support.size() == 7);
}

TEST_CASE("lbml_omp with one candidate reproduces omp exactly") {
    const auto& f = fixture();
    for (int round = 0; round < 20; ++round) {
        SourceScene scene;
        Rng rng(seed_for(100, round, 0));
        const int d = 2 + static_cast<int>(rng.uniform() * 3);
        scene.doas.resize(d);
        for (int i = 0; i < d; ++i) scene.doas(i) = std::asin(-0.9 + 1.8 * rng.uniform());
        std::sort(scene.doas.data(), scene.doas.data() + d);
        scene.powers = RVec::Ones(d);
        scene.noise_power = noise_power_for_snr_db(round % 2 == 0 ? -5.0 : 5.0);

        const auto draw = simulate_snapshots(f.geom, scene, {}, 50, seed_for(101, round, 0));
        const CVec y = dctm(draw.sample_covariance, f.index).values;

        const auto plain = omp(f.dict, y, d + 1);
        const auto listed =
            lbml_omp(f.dict, y, d + 1, draw.sample_covariance, f.geom.size(), 1);
        CHECK(plain.support == listed.support);
        CHECK((plain.coefficients - listed.coefficients).norm() == 0.0);
        CHECK((plain.doa_estimates - listed.doa_estimates).norm() == 0.0);
    }
}

TEST_CASE("lbml_omp finds the exact source with an exact covariance") {
    const auto& f = fixture();
    const int bin = 700;
    SourceScene scene;
    scene.doas = RVec(1);
    scene.doas(0) = f.grid.angles(bin);
    scene.powers = RVec::Ones(1);
    scene.noise_power = 0.1;
    const CMat cov = analytic_covariance(f.geom, scene);
    const CVec y = dctm(cov, f.index).values;

    const auto result = lbml_omp(f.dict, y, 2, cov, f.geom.size(), 11);
    CHECK(result.doa_estimates.size() == 1);
    CHECK(result.doa_estimates(0) == f.grid.angles(bin));
    CHECK(result.trace.size() == 1);
    CHECK(result.trace[0].candidates.size() == 11);
    CHECK(result.trace[0].chosen == bin);
    CHECK_FALSE(result.trace[0].fallback);
}

TEST_CASE("lbml_omp candidate window stays inside J and the ML window bound holds") {
    const auto& f = fixture();
    const int n = f.geom.size();
    const int d = 10;  // more sources than sensors
    std::vector<int> bins;
    for (int i = 0; i < d; ++i) bins.push_back(f.grid.nearest_bin(-0.9 + 0.2 * i));

    const CVec y = exact_coarray(f, bins, 0.0);
    SourceScene scene;
    scene.doas.resize(d);
    for (int i = 0; i < d; ++i) scene.doas(i) = f.grid.angles(bins[i]);
    scene.powers = RVec::Ones(d);
    scene.noise_power = 0.0;
    const CMat cov = analytic_covariance(f.geom, scene);

    const auto result = lbml_omp(f.dict, y, d + 1, cov, n, 11);
    CHECK(result.trace.size() == d);
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        // |Y_q| = min(i, N-2) + 1 <= N-1, so the ML denominator N - |Y_q|
        // stays >= 1 even past the window cap
        const int window = std::min(static_cast<int>(i), n - 2) + 1;
        CHECK(window <= n - 1);
        CHECK(result.trace[i].candidates.size() == 11);
    }

    // noiseless on-grid overload: every source is localized within two
    // grid bins. Exact-bin recovery is not structural here: with D
    // larger than N-1 the ML window can only hold part of the support,
    // so neighbouring bins of coherent atoms can win a selection.
    for (int bin : bins) {
        int closest = f.grid.size();
        for (int s : result.support)
            if (s != f.dict.noise_atom()) closest = std::min(closest, std::abs(s - bin));
        CHECK(closest <= 2);
    }
}

TEST_CASE("lbml_omp falls back to corr-max when every candidate is degenerate") {
    // a manifold whose columns are all identical makes every 2-column
    // projector rank deficient at the second iteration
    const auto& f = fixture();
    AngularGrid grid = build_grid(16);
    const auto index = coarray_index(build_geometry(GeometryKind::Ula, 4));
    const auto dict = build_dictionary(build_geometry(GeometryKind::Ula, 4), index, grid);

    CMat degenerate_manifold = CMat::Ones(4, grid.size());
    const CVec y = dict.atoms.col(3) + dict.atoms.col(9);
    const CMat cov = CMat::Identity(4, 4);
    const auto result =
        lbml_omp(dict.atoms, y, 3, degenerate_manifold, cov, 4, 5, grid);
    CHECK(result.support.size() == 3);
    CHECK(result.trace.size() == 2);
    // first iteration: single-column projectors are fine; second: every
    // candidate pairs two identical columns and must fall back
    CHECK_FALSE(result.trace[0].fallback);
    CHECK(result.trace[1].fallback);
}

TEST_CASE("lbml_omp input validation") {
    const auto& f = fixture();
    const CVec y = CVec::Ones(f.index.dof);
    const CMat cov = CMat::Identity(8, 8);
    CHECK_THROWS_AS(lbml_omp(f.dict, y, 2, cov, 8, 4), std::invalid_argument);   // even Q
    CHECK_THROWS_AS(lbml_omp(f.dict, y, 0, cov, 8, 11), std::invalid_argument);  // K < 1
    CHECK_THROWS_AS(lbml_omp(f.dict, y, 2, CMat::Identity(7, 7), 8, 11),
                    std::invalid_argument);
}

TEST_CASE("romp handles easy and degenerate inputs") {
    const auto& f = fixture();
    const CVec single = f.dict.atoms.col(5);
    const auto one = romp(f.dict.atoms, single, 1, f.grid);
    CHECK(contains(one.support, 5));

    // adjacent coherent atoms stay in the immediate neighbourhood
    const CVec pair = f.dict.atoms.col(5) + f.dict.atoms.col(6);
    const auto near = romp(f.dict.atoms, pair, 2, f.grid);
    CHECK(!near.support.empty());
    for (int idx : near.support) {
        CHECK(idx >= 4);
        CHECK(idx <= 7);
    }

    const auto empty = romp(f.dict.atoms, pair, 0, f.grid);
    CHECK(empty.support.empty());
    CHECK(empty.coefficients.norm() == 0.0);
    CHECK(romp(f.dict.atoms, CVec::Zero(f.index.dof), 2, f.grid).support.empty());
}

TEST_CASE("iht fixed points and step safety") {
    const auto& f = fixture();
    const CVec single = f.dict.atoms.col(5);
    const auto one = iht(f.dict.atoms, single, 1, f.grid);
    CHECK(one.support == std::vector<int>{5});
    CHECK(std::abs(one.coefficients(5) - Complex(1.0)) < 1e-8);

    const auto zero = iht(f.dict.atoms, CVec::Zero(f.index.dof), 3, f.grid);
    CHECK(zero.support.empty());

    // power-iteration estimate: step * ||B||_2^2 <= 1 within tolerance,
    // checked against the exact largest singular value
    Eigen::JacobiSVD<CMat> svd(f.dict.atoms);
    const double spectral_sq = svd.singularValues()(0) * svd.singularValues()(0);
    // reproduce the internal estimate by running one recovery and
    // verifying the gradient step is non-expansive on the dictionary
    CHECK(spectral_sq > 0.0);
    // direct check of the documented bound
    CVec v = CVec::Ones(f.dict.atoms.cols()) / std::sqrt(double(f.dict.atoms.cols()));
    double estimate = 1.0;
    for (int it = 0; it < 50; ++it) {
        CVec w = f.dict.atoms.adjoint() * (f.dict.atoms * v);
        estimate = w.norm();
        v = w / estimate;
    }
    CHECK((1.0 / estimate) * spectral_sq <= 1.0 + 1e-6);
}

TEST_CASE("cosamp single atom and zero input on the coarray dictionary") {
    const auto& f = fixture();
    const CVec single = f.dict.atoms.col(5);
    const auto one = cosamp(f.dict.atoms, single, 1, f.grid);
    CHECK(one.support == std::vector<int>{5});
    CHECK(cosamp(f.dict.atoms, CVec::Zero(f.index.dof), 2, f.grid).support.empty());
}

TEST_CASE("cosamp exact recovery in the incoherent regime") {
    // random Gaussian dictionary: the setting the recovery guarantee
    // actually covers; the coarray grid is far too coherent for it
    Rng rng(77);
    const int rows = 40, cols = 120;
    CMat dict(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) dict(i, j) = rng.complex_normal();
        dict.col(j).normalize();
    }
    const AngularGrid grid = build_grid(cols - 1);

    const CVec y = 2.0 * dict.col(10) + dict.col(75);
    const auto result = cosamp(dict, y, 2, grid);
    CHECK(contains(result.support, 10));
    CHECK(contains(result.support, 75));
    CHECK((y - dict * result.coefficients).norm() < 1e-8);

    const auto three = romp(dict, dict.col(3) + 0.8 * dict.col(50) + 0.6 * dict.col(99), 3, grid);
    CHECK(contains(three.support, 3));
    CHECK(contains(three.support, 50));
    CHECK(contains(three.support, 99));
}
