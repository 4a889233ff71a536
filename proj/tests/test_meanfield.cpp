#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "triwell/fock.hpp"
#include "triwell/meanfield.hpp"

using namespace triwell;

TEST_CASE("number-state initial conditions carry the half-quantum offset") {
	CVec const y = ic_from_number_state(2, 5, 23);
	CHECK(y[0] == doctest::Approx(std::sqrt(2.5)).epsilon(1e-15));
	CHECK(y[1] == doctest::Approx(std::sqrt(5.5)).epsilon(1e-15));
	CHECK(y[2] == doctest::Approx(std::sqrt(23.5)).epsilon(1e-15));
	CHECK(y[3] == 0.0);
	CHECK(y[4] == 0.0);
	CHECK(y[5] == 0.0);

	// vacuum still has the zero-point norm
	CVec const v = ic_from_number_state(0, 0, 0);
	double norm2 = 0.0;
	for(double c : v) norm2 += c * c;
	CHECK(norm2 == doctest::Approx(1.5).epsilon(1e-14));

	CHECK_THROWS_AS(ic_from_number_state(-1, 0, 0), std::invalid_argument);
}

TEST_CASE("initial phases rotate the amplitudes clockwise") {
	// c_k = sqrt(I_k) exp(-i phi_k)
	CVec const y = ic_from_number_state(4, 0, 0, {0.7, 0.0, 0.0});
	CHECK(y[0] == doctest::Approx(std::sqrt(4.5) * std::cos(0.7)).epsilon(1e-14));
	CHECK(y[3] == doctest::Approx(-std::sqrt(4.5) * std::sin(0.7)).epsilon(1e-14));
}

TEST_CASE("eigenstate initial conditions live on the mean-field sphere") {
	ModelParams p;
	p.n_particles = 4;
	FockBasis const basis = enumerate_basis(4);
	EigenSystem const sys = diagonalize(build_hamiltonian(p, basis));
	for(int label : {1, 4, 8, basis.size()}) {
		CVec const y = ic_from_eigenstate(sys.vector(label), basis);
		double norm2 = 0.0;
		for(double c : y) norm2 += c * c;
		CHECK(norm2 == doctest::Approx(p.K()).epsilon(1e-12));
	}
	// a pure basis vector reduces to its own occupations plus the offsets
	Eigen::VectorXd pure = Eigen::VectorXd::Zero(basis.size());
	int const idx = basis.index_of(1, 2);
	pure(idx) = 1.0;
	CVec const y = ic_from_eigenstate(pure, basis);
	CHECK(y[0] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
	CHECK(y[1] == doctest::Approx(std::sqrt(2.5)).epsilon(1e-14));
	CHECK(y[2] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));

	Eigen::VectorXd bad = Eigen::VectorXd::Zero(basis.size() + 1);
	CHECK_THROWS_AS(ic_from_eigenstate(bad, basis), std::invalid_argument);
}

TEST_CASE("the flow conserves the norm pointwise") {
	ModelParams p;
	std::mt19937 rng(11);
	std::uniform_real_distribution<double> u(-2.0, 2.0);
	for(int rep = 0; rep < 100; ++rep) {
		CVec y;
		for(auto& c : y) c = u(rng);
		CVec dy;
		eom_amplitudes(y, dy, p);
		double dot = 0.0;
		for(int i = 0; i < 6; ++i) dot += 2 * y[i] * dy[i];
		CHECK(std::abs(dot) < 1e-14);
	}
}

TEST_CASE("locking diagnosis is invariant under a global phase") {
	ModelParams p;
	auto traj = integrate(ic_from_number_state(2, 5, 23), p, 400.0, {1e-10, 1e-10, 0.5});
	auto const base = detect_locking(traj);
	double const alpha = 0.7;
	std::complex<double> const rot = std::exp(std::complex<double>(0, alpha));
	Trajectory rotated = traj;
	for(auto& y : rotated.y)
		for(int k = 0; k < 3; ++k) {
			std::complex<double> const c = std::complex<double>(y[k], y[k + 3]) * rot;
			y[k] = c.real();
			y[k + 3] = c.imag();
		}
	auto const shifted = detect_locking(rotated);
	CHECK(shifted.type == base.type);
	CHECK(shifted.window_patterns == base.window_patterns);
}

TEST_CASE("decoupled wells never lock") {
	ModelParams p;
	p.k12 = p.k23 = 0.0;
	auto report = classify_trajectory(ic_from_number_state(3, 9, 17), p, 400.0);
	CHECK(report.type == Center::A);
	CHECK_FALSE(report.locked12);
	CHECK_FALSE(report.locked23);
	CHECK_FALSE(report.locked13);
	CHECK_FALSE(report.intermittent);
	for(int pat : report.window_patterns) CHECK(pat == 0);
}

TEST_CASE("short trajectories are rejected") {
	ModelParams p;
	CHECK_THROWS_AS(classify_trajectory(ic_from_number_state(2, 5, 23), p, 100.0), TooShort);
	Trajectory tiny;
	tiny.t = {0.0};
	tiny.y = {ic_from_number_state(1, 1, 1)};
	CHECK_THROWS_AS(detect_locking(tiny), TooShort);
}

TEST_CASE("self-trapped well 3 leaves wells 1 and 2 mutually locked") {
	ModelParams p;
	auto report = classify_trajectory(ic_from_number_state(2, 5, 23), p);
	CHECK(report.type == Center::C);
	CHECK(report.locked12);
	CHECK_FALSE(report.locked23);
	CHECK_FALSE(report.intermittent);
	CHECK(report.window_patterns.size() == 20);  // 1000 time units / window 50
	for(int pat : report.window_patterns) CHECK(pat == 1);
}

TEST_CASE("a chaotic-band trajectory shows intermittent locking") {
	ModelParams p;
	auto report = classify_trajectory(ic_from_number_state(23, 7, 0), p);
	CHECK(report.type == Center::E2);
	CHECK(report.intermittent);
}

TEST_CASE("basis grid covers every occupation cell once") {
	ModelParams p;
	p.n_particles = 2;
	auto grid = classify_basis_grid(p, 400.0);
	REQUIRE(grid.size() == 6);
	int seen = 0;
	for(auto const& cell : grid) {
		CHECK(cell.n1 >= 0);
		CHECK(cell.n3 >= 0);
		CHECK(cell.n1 + cell.n3 <= 2);
		CHECK(cell.quantum_type == Center::UNASSIGNED);  // classifier side not filled here
		seen += 1;
	}
	CHECK(seen == 6);
}
