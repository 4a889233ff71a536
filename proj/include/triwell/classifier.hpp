#pragma once

// Automatic classification of eigenstates into organization-center types.
//
// The decision pipeline works on two complementary representations of an
// eigenstate: the Fock coefficient matrix C(n1, n3) and the synthesized torus
// field Phi(psi1, psi2).  Each center type has a dedicated detector:
//
//   E1  density clumped around the stable fixed point (0,0) in both angles;
//       quantum numbers from 2-D oscillator templates in rotated coordinates
//   D   density concentrated along psi1 = psi2 + const; detected through the
//       n1+n3 shell structure and the exact marginal in v = psi1 - psi2
//   C/B density locked along one angle: the cut through the dominant
//       spectator occupation must match a low-lying eigenvector of the
//       two-mode pair Hamiltonian below its classical separatrix
//   A   free rotation: plane-wave-like phase, structureless density
//   E2  none of the above, but energy inside the classically chaotic band
//
// All thresholds were calibrated once against the figure-anchored states and
// the published class counts, then frozen here.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "fock.hpp"
#include "torusfield.hpp"
#include "types.hpp"

namespace triwell {

struct StateAssignment {
	int state_index = 0;  // 1-based
	Center center = Center::UNASSIGNED;
	// type-dependent pair: A -> (mu_l1, mu_l2); B/C/D -> (mu_l, mu_t);
	// E1 -> (mu_td, mu_ta); E2 and UNASSIGNED carry none (-1)
	int qn1 = -1;
	int qn2 = -1;
	double confidence = 0.0;
	double energy = 0.0;
};

struct ClassifierThresholds {
	// E1: angular concentration of both density marginals, centered at (0,0)
	double e1_concentration = 0.40;
	double e1_center_radius = 0.6;
	// D: unanimous line windings plus a tight n1+n3 shell and concentrated v
	double d_line_unanimity = 0.98;
	double d_v_concentration = 0.40;
	double d_shell_spread = 2.5;
	// C/B: pair-eigenvector overlap and spectator freeze
	double pair_overlap = 0.5;
	double spectator_mass = 0.35;
	// A: unanimous windings on every line of both directions, no deep minima
	double a_line_unanimity = 0.98;
	double a_density_min = 0.10;
	// torus-field density floor (relative to max) for phase analysis
	double floor_fraction = 1e-3;
	// oscillator-template search space
	int max_template_quanta = 6;
	std::vector<double> width_factors{0.6, 0.8, 1.0, 1.25};
	// classically chaotic energy band for the E2 / UNASSIGNED split; the
	// defaults are frozen from chaos_scan at default model parameters
	double e2_band_lo = 28.0;
	double e2_band_hi = 58.0;
};

// ---------------------------------------------------------------------------
// per-state features

struct StateFeatures {
	double energy = 0.0;
	// circular concentration and mean position of the two density marginals
	double conc1 = 0.0, pos1 = 0.0;
	double conc2 = 0.0, pos2 = 0.0;
	// modal line windings: value, mass-weighted agreement, number of usable lines
	std::optional<int> w1, w2;
	double u1 = 0.0, u2 = 0.0;
	int nl1 = 0, nl2 = 0;
	// occupation-marginal peaks (spectator candidates)
	int n1_peak = 0, n3_peak = 0;
	double f1_peak = 0.0, f3_peak = 0.0;
	// shell (n1+n3) statistics and the v = psi1 - psi2 marginal
	double shell_mean = 0.0, shell_spread = 0.0;
	double v_concentration = 0.0;
	double v_offset = 0.0;  // 0 or pi
	// global density contrast
	double density_min_ratio = 0.0;
};

namespace detail {

struct CircStat {
	double concentration;
	double position;
};

inline CircStat circular_concentration(Eigen::VectorXd const& weights, TorusGrid const& grid,
                                       bool axis1) {
	std::complex<double> s{0.0, 0.0};
	double tot = 0.0;
	for(int i = 0; i < weights.size(); ++i) {
		double const ang = axis1 ? grid.psi1(i) : grid.psi2(i);
		s += weights(i) * std::polar(1.0, ang);
		tot += weights(i);
	}
	return {std::abs(s) / tot, std::arg(s)};
}

struct ModalWinding {
	std::optional<int> winding;
	double unanimity = 0.0;
	int n_lines = 0;
};

// Mass-weighted vote over the windings of all fully-above-floor lines.
// Lines are accepted on the density criterion alone (no step-size veto): the
// voting already down-weights any line with a questionable unwrap.
inline ModalWinding modal_line_winding(TorusField const& field, bool columns, double floor) {
	int const m1 = static_cast<int>(field.values.rows());
	int const m2 = static_cast<int>(field.values.cols());
	std::map<int, double> mass;
	int n_lines = 0;
	double total = 0.0;
	int const n_loops = columns ? m2 : m1;
	for(int l = 0; l < n_loops; ++l) {
		double line_min = 1e300, line_mass = 0.0;
		int const len = columns ? m1 : m2;
		for(int i = 0; i < len; ++i) {
			double const d = std::norm(columns ? field.values(i, l) : field.values(l, i));
			line_min = std::min(line_min, d);
			line_mass += d;
		}
		if(line_min <= floor) continue;
		GridPath const path = columns ? column_loop(field.grid, l) : row_loop(field.grid, l);
		auto const wr = winding_number(field, path, {0.0, false});
		if(!wr.ok) continue;
		mass[wr.winding] += line_mass;
		total += line_mass;
		++n_lines;
	}
	ModalWinding out;
	out.n_lines = n_lines;
	if(mass.empty()) return out;
	auto const best = std::max_element(mass.begin(), mass.end(),
	                                   [](auto const& a, auto const& b) { return a.second < b.second; });
	out.winding = best->first;
	out.unanimity = best->second / total;
	return out;
}

}  // namespace detail

inline StateFeatures compute_features(Eigen::MatrixXcd const& coef, TorusField const& field,
                                      double energy, ClassifierThresholds const& th = {}) {
	StateFeatures f;
	f.energy = energy;
	int const nmax = static_cast<int>(coef.rows()) - 1;  // = N
	Eigen::MatrixXd const dens = field.values.cwiseAbs2();
	double const dmax = dens.maxCoeff();
	double const floor = th.floor_fraction * dmax;

	auto const c1 = detail::circular_concentration(dens.rowwise().sum(), field.grid, true);
	auto const c2 = detail::circular_concentration(dens.colwise().sum().transpose(), field.grid, false);
	f.conc1 = c1.concentration;
	f.pos1 = c1.position;
	f.conc2 = c2.concentration;
	f.pos2 = c2.position;

	auto const mw1 = detail::modal_line_winding(field, true, floor);   // psi1-direction loops
	auto const mw2 = detail::modal_line_winding(field, false, floor);  // psi2-direction loops
	f.w1 = mw1.winding;
	f.u1 = mw1.unanimity;
	f.nl1 = mw1.n_lines;
	f.w2 = mw2.winding;
	f.u2 = mw2.unanimity;
	f.nl2 = mw2.n_lines;

	Eigen::MatrixXd const a2 = coef.cwiseAbs2();
	Eigen::VectorXd const rowmass = a2.rowwise().sum();  // occupation marginal of n1
	Eigen::VectorXd const colmass = a2.colwise().sum();  // of n3
	rowmass.maxCoeff(&f.n1_peak);
	colmass.maxCoeff(&f.n3_peak);
	f.f1_peak = rowmass(f.n1_peak);
	f.f3_peak = colmass(f.n3_peak);

	// shell structure: sigma = n1 + n3 mass distribution and the exact
	// density marginal in v = psi1 - psi2 (sum over shells of |chi_sigma|^2)
	int const nv = 512;
	Eigen::VectorXd shell_mass = Eigen::VectorXd::Zero(nmax + 1);
	Eigen::VectorXd pv = Eigen::VectorXd::Zero(nv);
	for(int sigma = 0; sigma <= nmax; ++sigma) {
		double m = 0.0;
		for(int n1 = 0; n1 <= sigma; ++n1) m += std::norm(coef(n1, sigma - n1));
		shell_mass(sigma) = m;
		if(m < 1e-12) continue;
		for(int iv = 0; iv < nv; ++iv) {
			double const v = -PI + TWO_PI * iv / nv;
			std::complex<double> chi{0.0, 0.0};
			for(int n1 = 0; n1 <= sigma; ++n1) chi += coef(n1, sigma - n1) * std::polar(1.0, n1 * v);
			pv(iv) += std::norm(chi);
		}
	}
	for(int sigma = 0; sigma <= nmax; ++sigma) f.shell_mean += sigma * shell_mass(sigma);
	for(int sigma = 0; sigma <= nmax; ++sigma)
		f.shell_spread += (sigma - f.shell_mean) * (sigma - f.shell_mean) * shell_mass(sigma);
	f.shell_spread = std::sqrt(std::max(0.0, f.shell_spread));
	std::complex<double> sv{0.0, 0.0};
	for(int iv = 0; iv < nv; ++iv) sv += pv(iv) * std::polar(1.0, -PI + TWO_PI * iv / nv);
	f.v_concentration = std::abs(sv) / pv.sum();
	f.v_offset = pv(nv / 2) >= pv(0) ? 0.0 : PI;  // grid point nv/2 sits at v = 0

	f.density_min_ratio = dens.minCoeff() / dmax;
	return f;
}

// ---------------------------------------------------------------------------
// two-mode pair systems (C and B detectors)

struct PairSystem {
	Eigen::VectorXd levels;
	Eigen::MatrixXd vectors;
	double separatrix = 0.0;  // classical pair energy at the top of the well
};

// Quantum pair Hamiltonian of modes (i, j) sharing sigma quanta, plus the
// classical separatrix energy of the corresponding pendulum-like reduced
// Hamiltonian: levels below it belong to librating (locked) pair motion.
inline PairSystem pair_system(int mode_i, int mode_j, int sigma, double coupling,
                              ModelParams const& p) {
	int const n = sigma + 1;
	Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
	for(int k = 0; k < n; ++k) {
		double const ni = k + 0.5, nj = sigma - k + 0.5;
		h(k, k) = p.omega[mode_i] * ni + p.omega[mode_j] * nj + p.x[mode_i] * ni * ni
		          + p.x[mode_j] * nj * nj;
		if(k + 1 < n) {
			double const off = -0.5 * coupling * std::sqrt(double(k + 1) * (sigma - k));
			h(k, k + 1) = off;
			h(k + 1, k) = off;
		}
	}
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
	PairSystem out{es.eigenvalues(), es.eigenvectors(), 0.0};
	// classical separatrix: minimum over the action share of the anti-locked
	// (cos = -1) branch of the pair Hamiltonian
	double const St = sigma + 1.0;
	double sep = 1e300;
	int const n_scan = 800;
	for(int k = 1; k < n_scan; ++k) {
		double const I = St * k / n_scan;
		double const e = p.omega[mode_i] * I + p.omega[mode_j] * (St - I) + p.x[mode_i] * I * I
		                 + p.x[mode_j] * (St - I) * (St - I) + coupling * std::sqrt(I * (St - I));
		sep = std::min(sep, e);
	}
	out.separatrix = sep;
	return out;
}

struct PairMatch {
	bool locked = false;
	int level = -1;          // pair eigenindex of the best match (= mu_t)
	double overlap = 0.0;
	int n_locked_levels = 0;
};

namespace detail {

inline PairMatch match_pair(Eigen::VectorXcd const& slice, PairSystem const& sys) {
	PairMatch out;
	double const nrm = slice.norm();
	if(nrm < 1e-12) return out;
	Eigen::VectorXcd const s = slice / nrm;
	int best = 0;
	double best_ov = 0.0;
	for(int j = 0; j < sys.levels.size(); ++j) {
		std::complex<double> acc{0.0, 0.0};
		for(int k = 0; k < s.size(); ++k) acc += sys.vectors(k, j) * std::conj(s(k));
		double const ov = std::norm(acc);
		if(ov > best_ov) {
			best_ov = ov;
			best = j;
		}
	}
	out.level = best;
	out.overlap = best_ov;
	out.locked = sys.levels(best) < sys.separatrix;
	for(int j = 0; j < sys.levels.size(); ++j)
		if(sys.levels(j) < sys.separatrix) ++out.n_locked_levels;
	return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// oscillator-template readers

namespace detail {

inline double hermite(int n, double x) {
	double h0 = 1.0;
	if(n == 0) return h0;
	double h1 = 2.0 * x;
	for(int k = 1; k < n; ++k) {
		double const h2 = 2.0 * x * h1 - 2.0 * k * h0;
		h0 = h1;
		h1 = h2;
	}
	return h1;
}

inline double wrap_angle(double a) { return std::remainder(a, TWO_PI); }

}  // namespace detail

struct TemplateMatch {
	double overlap = 0.0;
	int qn1 = 0;
	int qn2 = 0;
};

// E1 reader.  Demodulate the carrier plane wave (winding = rounded mean
// occupations), then project onto 2-D oscillator templates in the rotated
// frame spanned by the diagonal and antidiagonal directions around the
// density centroid.  Returns (mu_td, mu_ta).
inline TemplateMatch e1_template_match(Eigen::MatrixXcd const& coef, TorusField const& field,
                                       ClassifierThresholds const& th = {}) {
	int const m1 = static_cast<int>(field.values.rows());
	int const m2 = static_cast<int>(field.values.cols());
	int const nmax = static_cast<int>(coef.rows()) - 1;
	Eigen::MatrixXd const dens = field.values.cwiseAbs2();

	// carrier winding from the occupation means
	Eigen::MatrixXd const a2 = coef.cwiseAbs2();
	double const tot = a2.sum();
	double mean1 = 0.0, mean3 = 0.0;
	for(int n1 = 0; n1 <= nmax; ++n1)
		for(int n3 = 0; n3 <= nmax - n1; ++n3) {
			mean1 += n1 * a2(n1, n3);
			mean3 += n3 * a2(n1, n3);
		}
	int const w1 = static_cast<int>(std::lround(mean1 / tot));
	int const w2 = static_cast<int>(std::lround(mean3 / tot));

	// density centroid (wrapped around the density maximum)
	int ia = 0, ib = 0;
	dens.maxCoeff(&ia, &ib);
	double const dsum = dens.sum();
	double off1 = 0.0, off2 = 0.0;
	for(int a = 0; a < m1; ++a)
		for(int b = 0; b < m2; ++b) {
			double const wgt = dens(a, b) / dsum;
			off1 += detail::wrap_angle(field.grid.psi1(a) - field.grid.psi1(ia)) * wgt;
			off2 += detail::wrap_angle(field.grid.psi2(b) - field.grid.psi2(ib)) * wgt;
		}
	double const cen1 = field.grid.psi1(ia) + off1;
	double const cen2 = field.grid.psi2(ib) + off2;

	// rotated offsets and their density-weighted widths
	Eigen::MatrixXd dco(m1, m2), aco(m1, m2);
	double sd = 0.0, sa = 0.0;
	for(int a = 0; a < m1; ++a)
		for(int b = 0; b < m2; ++b) {
			double const d1 = detail::wrap_angle(field.grid.psi1(a) - cen1);
			double const d2 = detail::wrap_angle(field.grid.psi2(b) - cen2);
			dco(a, b) = (d1 - d2) / std::sqrt(2.0);
			aco(a, b) = (d1 + d2) / std::sqrt(2.0);
			double const wgt = dens(a, b) / dsum;
			sd += dco(a, b) * dco(a, b) * wgt;
			sa += aco(a, b) * aco(a, b) * wgt;
		}
	sd = std::sqrt(sd);
	sa = std::sqrt(sa);

	// carrier-demodulated field
	Eigen::MatrixXcd fd(m1, m2);
	for(int a = 0; a < m1; ++a)
		for(int b = 0; b < m2; ++b)
			fd(a, b) = field.values(a, b)
			           * std::polar(1.0, -(w1 * field.grid.psi1(a) + w2 * field.grid.psi2(b)));
	double const fnorm = fd.norm();

	TemplateMatch best;
	int const nq = th.max_template_quanta;
	std::size_t const cells = static_cast<std::size_t>(m1) * m2;
	std::vector<double> g(cells), hd((nq + 1) * cells), ha((nq + 1) * cells);
	for(double factor_d : th.width_factors)
		for(double factor_a : th.width_factors) {
			double const wd = sd * factor_d, wa = sa * factor_a;
			// tabulate the Gaussian and both Hermite families once per width pair
			std::size_t c = 0;
			for(int a = 0; a < m1; ++a)
				for(int b = 0; b < m2; ++b, ++c) {
					g[c] = std::exp(-(dco(a, b) * dco(a, b) / (2 * wd * wd)
					                  + aco(a, b) * aco(a, b) / (2 * wa * wa)));
					for(int q = 0; q <= nq; ++q) {
						hd[q * cells + c] = detail::hermite(q, dco(a, b) / wd);
						ha[q * cells + c] = detail::hermite(q, aco(a, b) / wa);
					}
				}
			for(int i = 0; i <= nq; ++i)
				for(int j = 0; j <= nq; ++j) {
					double tn = 0.0;
					std::complex<double> acc{0.0, 0.0};
					std::size_t cc = 0;
					for(int a = 0; a < m1; ++a)
						for(int b = 0; b < m2; ++b, ++cc) {
							double const t = hd[i * cells + cc] * ha[j * cells + cc] * g[cc];
							tn += t * t;
							acc += t * fd(a, b);
						}
					double const ov = std::abs(acc) / (std::sqrt(tn) * fnorm);
					if(ov > best.overlap) best = {ov, j, i};  // (mu_td, mu_ta)
				}
		}
	return best;
}

// D reader: transverse quantum number of the dominant n1+n3 shell profile in
// v = psi1 - psi2, counted around the detected offset (0 or pi).
inline TemplateMatch d_template_match(Eigen::MatrixXcd const& coef,
                                      ClassifierThresholds const& th = {}) {
	int const nmax = static_cast<int>(coef.rows()) - 1;
	int sig_peak = 0;
	double best_mass = -1.0;
	for(int sigma = 0; sigma <= nmax; ++sigma) {
		double m = 0.0;
		for(int n1 = 0; n1 <= sigma; ++n1) m += std::norm(coef(n1, sigma - n1));
		if(m > best_mass) {
			best_mass = m;
			sig_peak = sigma;
		}
	}
	int const nv = 512;
	Eigen::VectorXcd chi(nv);
	Eigen::VectorXd pv(nv);
	double carrier_mean = 0.0, shell_tot = 0.0;
	for(int n1 = 0; n1 <= sig_peak; ++n1) {
		double const m = std::norm(coef(n1, sig_peak - n1));
		carrier_mean += n1 * m;
		shell_tot += m;
	}
	int const nbar = static_cast<int>(std::lround(carrier_mean / shell_tot));
	for(int iv = 0; iv < nv; ++iv) {
		double const v = -PI + TWO_PI * iv / nv;
		std::complex<double> acc{0.0, 0.0};
		for(int n1 = 0; n1 <= sig_peak; ++n1) acc += coef(n1, sig_peak - n1) * std::polar(1.0, n1 * v);
		chi(iv) = acc * std::polar(1.0, -nbar * v);  // demodulated shell profile
		pv(iv) = std::norm(acc);
	}
	double const v0 = pv(nv / 2) >= pv(0) ? 0.0 : PI;
	double width = 0.0;
	double const ptot = pv.sum();
	Eigen::VectorXd dv(nv);
	for(int iv = 0; iv < nv; ++iv) {
		dv(iv) = detail::wrap_angle(-PI + TWO_PI * iv / nv - v0);
		width += dv(iv) * dv(iv) * pv(iv) / ptot;
	}
	width = std::sqrt(width);
	double const cnorm = chi.norm();
	TemplateMatch best;
	for(double factor : th.width_factors) {
		double const wv = width * factor;
		for(int t = 0; t <= th.max_template_quanta; ++t) {
			double tn = 0.0;
			std::complex<double> acc{0.0, 0.0};
			for(int iv = 0; iv < nv; ++iv) {
				double const g = std::exp(-dv(iv) * dv(iv) / (2 * wv * wv));
				double const tv = detail::hermite(t, dv(iv) / wv) * g;
				tn += tv * tv;
				acc += tv * chi(iv);
			}
			double const ov = std::abs(acc) / (std::sqrt(tn) * cnorm);
			if(ov > best.overlap) best = {ov, t, 0};
		}
	}
	return best;  // qn1 = mu_t
}

// ---------------------------------------------------------------------------
// the decision pipeline

class Classifier {
public:
	Classifier(ModelParams const& params, ClassifierThresholds const& thresholds = {})
	    : params_(params), th_(thresholds) {}

	ClassifierThresholds const& thresholds() const { return th_; }

	StateAssignment classify(int state_index, Eigen::VectorXd const& eigvec, double energy,
	                         FockBasis const& basis, TorusGrid const& grid = {}) const {
		Eigen::MatrixXcd const coef = coefficient_matrix(eigvec, basis);
		TorusField const field = synthesize(eigvec, basis, grid);
		StateFeatures const f = compute_features(coef, field, energy, th_);
		return decide(state_index, coef, field, f, basis);
	}

	std::vector<StateAssignment> classify_all(EigenSystem const& sys, FockBasis const& basis,
	                                          TorusGrid const& grid = {}) const {
		std::vector<StateAssignment> out;
		out.reserve(sys.energies.size());
		for(int k = 1; k <= sys.energies.size(); ++k)
			out.push_back(classify(k, sys.vector(k), sys.energy(k), basis, grid));
		return out;
	}

	std::map<Center, int> counts(std::vector<StateAssignment> const& assignments) const {
		std::map<Center, int> h;
		for(auto const& a : assignments) ++h[a.center];
		return h;
	}

private:
	StateAssignment decide(int state_index, Eigen::MatrixXcd const& coef, TorusField const& field,
	                       StateFeatures const& f, FockBasis const& basis) const {
		StateAssignment out;
		out.state_index = state_index;
		out.energy = f.energy;

		// E1: both marginals concentrated, center on the (0,0) fixed point
		if(std::min(f.conc1, f.conc2) >= th_.e1_concentration
		   && std::max(std::abs(f.pos1), std::abs(f.pos2)) <= th_.e1_center_radius) {
			auto const m = e1_template_match(coef, field, th_);
			out.center = Center::E1;
			out.qn1 = m.qn1;  // mu_td
			out.qn2 = m.qn2;  // mu_ta
			out.confidence = m.overlap;
			return out;
		}

		// D: diagonal organization; unanimous windings along both axes plus a
		// narrow shell and a concentrated v-marginal
		if(f.u1 >= th_.d_line_unanimity && f.u2 >= th_.d_line_unanimity
		   && f.v_concentration >= th_.d_v_concentration && f.shell_spread <= th_.d_shell_spread) {
			auto const m = d_template_match(coef, th_);
			out.center = Center::D;
			out.qn1 = *f.w1 + *f.w2;  // mu_l: winding along the diagonal
			out.qn2 = m.qn1;          // mu_t relative to the detected offset
			out.confidence = std::min(m.overlap, f.v_concentration);
			return out;
		}

		// C and B: pair locking with a frozen spectator
		int const N = basis.N;
		PairMatch cm, bm;
		if(N - f.n3_peak >= 2) {
			auto const& sys = pair_cache(0, 1, N - f.n3_peak, params_.k12);
			cm = detail::match_pair(coef.col(f.n3_peak).head(N - f.n3_peak + 1), sys);
		}
		if(N - f.n1_peak >= 2) {
			auto const& sys = pair_cache(2, 1, N - f.n1_peak, params_.k23);
			bm = detail::match_pair(coef.row(f.n1_peak).head(N - f.n1_peak + 1).transpose(), sys);
		}
		bool const c_ok = cm.locked && cm.overlap >= th_.pair_overlap && f.f3_peak >= th_.spectator_mass;
		bool const b_ok = bm.locked && bm.overlap >= th_.pair_overlap && f.f1_peak >= th_.spectator_mass;
		if(c_ok && (!b_ok || cm.overlap * f.f3_peak >= bm.overlap * f.f1_peak)) {
			out.center = Center::C;
			out.qn1 = f.n3_peak;  // mu_l = spectator occupation
			out.qn2 = cm.level;   // mu_t = pair eigenindex
			out.confidence = cm.overlap * f.f3_peak;
			return out;
		}
		if(b_ok) {
			out.center = Center::B;
			out.qn1 = f.n1_peak;
			out.qn2 = bm.level;
			out.confidence = bm.overlap * f.f1_peak;
			return out;
		}

		// A: every line of both directions usable and unanimous, flat density
		if(f.u1 >= th_.a_line_unanimity && f.u2 >= th_.a_line_unanimity
		   && f.nl1 == field.grid.m2 && f.nl2 == field.grid.m1
		   && f.density_min_ratio >= th_.a_density_min) {
			out.center = Center::A;
			out.qn1 = *f.w1;  // mu_l1
			out.qn2 = *f.w2;  // mu_l2
			out.confidence = std::min(f.u1, f.u2);
			return out;
		}

		// leftovers: irregular states inside the chaotic band are E2
		if(f.energy >= th_.e2_band_lo && f.energy <= th_.e2_band_hi) {
			out.center = Center::E2;
			out.confidence = 0.5;
			return out;
		}
		return out;  // UNASSIGNED
	}

	PairSystem const& pair_cache(int mi, int mj, int sigma, double coupling) const {
		auto const key = std::make_tuple(mi, sigma);
		auto it = pair_cache_.find(key);
		if(it == pair_cache_.end())
			it = pair_cache_.emplace(key, pair_system(mi, mj, sigma, coupling, params_)).first;
		return it->second;
	}

	ModelParams params_;
	ClassifierThresholds th_;
	mutable std::map<std::tuple<int, int>, PairSystem> pair_cache_;
};

// ---------------------------------------------------------------------------
// quantum companion grid

// Label every basis cell with the type of the assigned eigenstate carrying
// the largest weight |c|^2 on it, provided that weight exceeds `min_weight`.
inline std::vector<Center> quantum_basis_grid(EigenSystem const& sys, FockBasis const& basis,
                                              std::vector<StateAssignment> const& assignments,
                                              double min_weight = 0.05) {
	int const N = basis.N;
	std::vector<Center> grid;
	grid.reserve((N + 1) * (N + 2) / 2);
	for(int n1 = 0; n1 <= N; ++n1)
		for(int n3 = 0; n3 <= N - n1; ++n3) {
			int const idx = basis.index_of(n1, N - n1 - n3);
			double best_w = 0.0;
			Center best_c = Center::UNASSIGNED;
			for(auto const& a : assignments) {
				if(a.center == Center::UNASSIGNED) continue;
				double const w = sys.vectors(idx, a.state_index - 1)
				                 * sys.vectors(idx, a.state_index - 1);
				if(w > best_w) {
					best_w = w;
					best_c = a.center;
				}
			}
			grid.push_back(best_w > min_weight ? best_c : Center::UNASSIGNED);
		}
	return grid;
}

struct GridAgreement {
	int mutually_assigned = 0;
	int agreeing = 0;

	double fraction() const {
		return mutually_assigned > 0 ? double(agreeing) / mutually_assigned : 0.0;
	}
};

inline GridAgreement grid_agreement(std::vector<Center> const& classical,
                                    std::vector<Center> const& quantum) {
	GridAgreement out;
	for(std::size_t i = 0; i < classical.size() && i < quantum.size(); ++i) {
		if(classical[i] == Center::UNASSIGNED || quantum[i] == Center::UNASSIGNED) continue;
		++out.mutually_assigned;
		if(classical[i] == quantum[i]) ++out.agreeing;
	}
	return out;
}

}  // namespace triwell
