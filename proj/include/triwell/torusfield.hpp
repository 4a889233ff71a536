#pragma once

// Semiclassical wave functions on the reduced (psi1, psi2) torus.
//
// An eigenvector c_{n1,n2,n3} becomes the trigonometric polynomial
//     Phi(psi1, psi2) = sum_{n1+n3<=N} c_{n1,N-n1-n3,n3} e^{i(n1 psi1 + n3 psi2)}
// (the cyclic global phase is dropped).  Since only integer modes 0..N enter,
// any grid with m >= N+1 points per axis represents Phi exactly.

#include <complex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fock.hpp"

namespace triwell {

struct TorusGrid {
	int m1 = 128;
	int m2 = 128;
	// half-open axis ranges [lo, lo + 2*pi); the default window keeps both
	// torus fixed points psi=0 and psi=pi away from the plot edges
	double lo1 = -PI / 2;
	double lo2 = -PI / 2;

	double psi1(int a) const { return lo1 + TWO_PI * a / m1; }
	double psi2(int b) const { return lo2 + TWO_PI * b / m2; }
};

struct TorusField {
	TorusGrid grid;
	Eigen::MatrixXcd values;  // values(a, b) = Phi(psi1_a, psi2_b)
};

// Arrange an eigenvector as the (N+1)x(N+1) coefficient matrix C(n1, n3);
// entries with n1 + n3 > N stay zero.
inline Eigen::MatrixXcd coefficient_matrix(Eigen::VectorXd const& eigvec, FockBasis const& basis) {
	if(eigvec.size() != basis.size())
		throw std::invalid_argument("coefficient_matrix: dimension mismatch");
	Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(basis.N + 1, basis.N + 1);
	for(int idx = 0; idx < basis.size(); ++idx) {
		auto const& s = basis.states[idx];
		c(s[0], s[2]) = eigvec(idx);
	}
	return c;
}

inline TorusField synthesize(Eigen::VectorXd const& eigvec, FockBasis const& basis,
                             TorusGrid const& grid = {}) {
	using namespace std::complex_literals;
	Eigen::MatrixXcd const c = coefficient_matrix(eigvec, basis);
	Eigen::MatrixXcd e1(grid.m1, basis.N + 1), e2(basis.N + 1, grid.m2);
	for(int a = 0; a < grid.m1; ++a)
		for(int n = 0; n <= basis.N; ++n) e1(a, n) = std::exp(1i * (n * grid.psi1(a)));
	for(int n = 0; n <= basis.N; ++n)
		for(int b = 0; b < grid.m2; ++b) e2(n, b) = std::exp(1i * (n * grid.psi2(b)));
	return TorusField{grid, e1 * c * e2};
}

inline Eigen::MatrixXd density(TorusField const& field) { return field.values.cwiseAbs2(); }

inline Eigen::MatrixXd phase(TorusField const& field) {
	Eigen::MatrixXd p(field.values.rows(), field.values.cols());
	for(int a = 0; a < p.rows(); ++a)
		for(int b = 0; b < p.cols(); ++b) {
			double ph = std::arg(field.values(a, b));
			p(a, b) = ph < 0 ? ph + TWO_PI : ph;
		}
	return p;
}

// ---------------------------------------------------------------------------
// winding numbers along closed grid paths

using GridPath = std::vector<std::pair<int, int>>;  // (a, b) indices, closed on the torus

inline GridPath column_loop(TorusGrid const& grid, int b) {
	GridPath p;
	p.reserve(grid.m1);
	for(int a = 0; a < grid.m1; ++a) p.emplace_back(a, b);
	return p;
}

inline GridPath row_loop(TorusGrid const& grid, int a) {
	GridPath p;
	p.reserve(grid.m2);
	for(int b = 0; b < grid.m2; ++b) p.emplace_back(a, b);
	return p;
}

struct WindingResult {
	int winding = 0;
	double residual = 0.0;     // |total advance - 2*pi*winding|
	bool ok = false;
	std::string error;         // "LoopThroughNode" / "UnresolvedJump" when !ok
};

struct WindingOptions {
	double floor_fraction = 1e-3;  // relative to the global density maximum
	bool reject_jumps = true;      // flag steps with |dphase| > 0.9*pi
};

// Accumulate nearest-branch phase differences around the loop.  The phase is
// undefined below the density floor, and a near-pi step at healthy density
// means the grid did not resolve the variation, so both cases are refused
// rather than silently unwrapped.
inline WindingResult winding_number(TorusField const& field, GridPath const& path,
                                    WindingOptions const& opt = {}) {
	WindingResult res;
	if(path.size() < 2) {
		res.error = "EmptyLoop";
		return res;
	}
	double const floor = opt.floor_fraction * field.values.cwiseAbs2().maxCoeff();
	double advance = 0.0;
	for(std::size_t i = 0; i < path.size(); ++i) {
		auto const [a0, b0] = path[i];
		auto const [a1, b1] = path[(i + 1) % path.size()];
		std::complex<double> const z0 = field.values(a0, b0);
		std::complex<double> const z1 = field.values(a1, b1);
		if(std::norm(z0) < floor || std::norm(z1) < floor) {
			res.error = "LoopThroughNode";
			return res;
		}
		double const d = std::arg(z1 * std::conj(z0));
		if(opt.reject_jumps && std::abs(d) > 0.9 * PI) {
			res.error = "UnresolvedJump";
			return res;
		}
		advance += d;
	}
	res.winding = static_cast<int>(std::lround(advance / TWO_PI));
	res.residual = std::abs(advance - TWO_PI * res.winding);
	res.ok = true;
	return res;
}

// ---------------------------------------------------------------------------
// crest tracing

enum class CrestDirection { psi1_const, psi2_const, diagonal, antidiagonal };

struct Crest {
	GridPath path;
	std::optional<int> winding;  // empty if the ridge dips below the floor
};

namespace detail {

// Follow the ridge from column to column, allowing the row index to drift by
// at most `window` per step so neighbouring crests are not mixed up.
inline GridPath ridge_path(Eigen::MatrixXd const& dens, int a0, int window = 3) {
	int const m1 = static_cast<int>(dens.rows());
	int const m2 = static_cast<int>(dens.cols());
	GridPath path;
	path.reserve(m2);
	int a = a0;
	for(int b = 0; b < m2; ++b) {
		int best = a;
		for(int d = -window; d <= window; ++d) {
			int const cand = ((a + d) % m1 + m1) % m1;
			if(dens(cand, b) > dens(best, b)) best = cand;
		}
		a = best;
		path.emplace_back(a, b);
	}
	return path;
}

}  // namespace detail

// Ridge paths of locally maximal density, one per crest, each a closed loop
// homotopic to the requested direction.  A transversally excited state has
// mu_t + 1 crests.
inline std::vector<Crest> crest_trace(TorusField const& field, CrestDirection dir) {
	Eigen::MatrixXd dens = density(field);
	TorusField work = field;
	bool transposed = false;
	if(dir == CrestDirection::psi2_const) {
		// same algorithm with the axes swapped
		work.values = field.values.transpose().eval();
		dens = work.values.cwiseAbs2();
		transposed = true;
	} else if(dir == CrestDirection::diagonal || dir == CrestDirection::antidiagonal) {
		// shear so the requested diagonal becomes a constant-row line
		int const m = static_cast<int>(field.values.rows());
		Eigen::MatrixXcd sheared(m, m);
		for(int b = 0; b < m; ++b)
			for(int a = 0; a < m; ++a) {
				int const src = dir == CrestDirection::diagonal ? ((a + b) % m) : ((a - b) % m + m) % m;
				sheared(a, b) = field.values(src, b);
			}
		work.values = sheared;
		dens = sheared.cwiseAbs2();
	}
	int const m1 = static_cast<int>(dens.rows());
	Eigen::VectorXd marg = dens.rowwise().sum();
	double const mmax = marg.maxCoeff();
	// featureless marginals only vary at floating-point noise level; without
	// this guard the strict local-max sweep below would pick up jitter peaks
	if(mmax <= 0.0 || mmax - marg.minCoeff() <= 1e-9 * mmax)
		throw std::runtime_error("crest_trace: NoCrest");
	std::vector<Crest> crests;
	for(int a = 0; a < m1; ++a) {
		double const prev = marg(((a - 1) % m1 + m1) % m1);
		double const next = marg((a + 1) % m1);
		if(marg(a) > prev && marg(a) >= next && marg(a) > 0.05 * mmax) {
			Crest c;
			c.path = detail::ridge_path(dens, a);
			auto const wr = winding_number(work, c.path, {1e-3, false});
			if(wr.ok) c.winding = wr.winding;
			// report path indices in the original (psi1, psi2) frame
			if(transposed)
				for(auto& [pa, pb] : c.path) std::swap(pa, pb);
			else if(dir == CrestDirection::diagonal)
				for(auto& [pa, pb] : c.path) pa = (pa + pb) % m1;
			else if(dir == CrestDirection::antidiagonal)
				for(auto& [pa, pb] : c.path) pa = ((pa - pb) % m1 + m1) % m1;
			crests.push_back(std::move(c));
		}
	}
	if(crests.empty()) throw std::runtime_error("crest_trace: NoCrest");
	return crests;
}

// mean of |Phi|^2 over the grid; equals the squared coefficient norm
inline double mean_density(TorusField const& field) { return field.values.cwiseAbs2().mean(); }

}  // namespace triwell
