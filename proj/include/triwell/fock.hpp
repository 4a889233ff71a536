#pragma once

// Fixed-N three-mode number basis, Bose-Hubbard matrix assembly and dense
// diagonalization.  L = (N+1)(N+2)/2 is small (496 at N=30), so everything
// is dense and eager.

#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "model.hpp"

namespace triwell {

struct FockBasis {
	int N = 0;
	std::vector<std::array<int, 3>> states;  // lexicographic, n1 descending, then n2

	// position of (n1, n2, .) in `states`; closed form, no lookup table needed
	int index_of(int n1, int n2) const {
		int const b = N - n1;
		return b * (b + 1) / 2 + (b - n2);
	}

	int size() const { return static_cast<int>(states.size()); }
};

inline FockBasis enumerate_basis(int n_particles) {
	if(n_particles < 0) throw std::invalid_argument("enumerate_basis: negative N");
	FockBasis basis;
	basis.N = n_particles;
	basis.states.reserve((n_particles + 1) * (n_particles + 2) / 2);
	for(int n1 = n_particles; n1 >= 0; --n1)
		for(int n2 = n_particles - n1; n2 >= 0; --n2)
			basis.states.push_back({n1, n2, n_particles - n1 - n2});
	return basis;
}

// Symmetrized Hamiltonian: the diagonal carries the (n + 1/2) form of the
// oscillator terms, the hopping moves one particle between neighbouring
// wells 1<->2 and 2<->3 (no direct 1<->3 coupling).
inline Eigen::MatrixXd build_hamiltonian(ModelParams const& params, FockBasis const& basis) {
	if(basis.N != params.n_particles)
		throw std::invalid_argument("build_hamiltonian: basis/params N mismatch");
	int const L = basis.size();
	Eigen::MatrixXd h = Eigen::MatrixXd::Zero(L, L);
	for(int a = 0; a < L; ++a) {
		auto const& s = basis.states[a];
		double diag = 0.0;
		for(int j = 0; j < 3; ++j) {
			double const nj = s[j] + 0.5;
			diag += params.omega[j] * nj + params.x[j] * nj * nj;
		}
		h(a, a) = diag;
		if(s[1] >= 1) {
			// (n1, n2, n3) -> (n1+1, n2-1, n3)
			int const b12 = basis.index_of(s[0] + 1, s[1] - 1);
			double const el12 = -0.5 * params.k12 * std::sqrt(double(s[0] + 1) * s[1]);
			h(a, b12) = el12;
			h(b12, a) = el12;
			// (n1, n2, n3) -> (n1, n2-1, n3+1)
			int const b23 = basis.index_of(s[0], s[1] - 1);
			double const el23 = -0.5 * params.k23 * std::sqrt(double(s[2] + 1) * s[1]);
			h(a, b23) = el23;
			h(b23, a) = el23;
		}
	}
	return h;
}

struct EigenSystem {
	Eigen::VectorXd energies;  // ascending; eigenstate labels are 1-based
	Eigen::MatrixXd vectors;   // column k-1 = coefficients of state k in basis order

	double energy(int label) const { return energies(label - 1); }
	Eigen::VectorXd vector(int label) const { return vectors.col(label - 1); }
};

inline EigenSystem diagonalize(Eigen::MatrixXd const& h) {
	double const asym = (h - h.transpose()).cwiseAbs().maxCoeff();
	if(asym > 1e-12) throw std::invalid_argument("diagonalize: matrix not symmetric");
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
	if(solver.info() != Eigen::Success) throw std::runtime_error("diagonalize: solver failed");
	EigenSystem sys{solver.eigenvalues(), solver.eigenvectors()};
	// fix the overall sign of each column: largest-magnitude coefficient positive
	for(int k = 0; k < sys.vectors.cols(); ++k) {
		int row = 0;
		sys.vectors.col(k).cwiseAbs().maxCoeff(&row);
		if(sys.vectors(row, k) < 0) sys.vectors.col(k) = -sys.vectors.col(k);
	}
	return sys;
}

}  // namespace triwell
