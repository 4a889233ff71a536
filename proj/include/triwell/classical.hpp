#pragma once

// Classical dynamics of the trimer.
//
// Two equivalent charts are used.  The reduced chart (psi1, psi2, J1, J2)
// with psi1 = phi1 - phi2, psi2 = phi3 - phi2 exposes the conserved total
// action K and is what Poincare sections and the classifier work with, but
// its vector field is singular where any action reaches zero.  The complex
// amplitudes c_k = sqrt(I_k) e^{-i phi_k} obey a polynomial (mean-field)
// vector field that is regular everywhere, so all propagation happens in the
// c-chart; reduced coordinates are only ever projected out for analysis.
// Direct integration of the reduced equations is kept as a cross-check mode.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "model.hpp"

namespace triwell {

struct FullState {
	std::array<double, 3> phi;     // angles
	std::array<double, 3> action;  // I_k > 0
};

struct ReducedState {
	double psi1 = 0.0;
	double psi2 = 0.0;
	double j1 = 0.0;
	double j2 = 0.0;
	double k_total = 0.0;  // conserved; I2 = k_total - j1 - j2

	double i2() const { return k_total - j1 - j2; }
};

using CVec = std::array<double, 6>;  // (Re c1, Re c2, Re c3, Im c1, Im c2, Im c3)

inline constexpr double ACTION_FLOOR = 1e-9;

struct SingularBoundary : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct NoRoot : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
	using std::runtime_error::runtime_error;
};

inline double wrap_pi(double a) { return std::remainder(a, TWO_PI); }

// --- Hamiltonians -----------------------------------------------------------

inline double h_full(FullState const& s, ModelParams const& p) {
	for(double i : s.action)
		if(!(i > 0.0)) throw DomainError("h_full: action must be positive");
	double h = 0.0;
	for(int j = 0; j < 3; ++j) h += p.omega[j] * s.action[j] + p.x[j] * s.action[j] * s.action[j];
	h -= p.k12 * std::sqrt(s.action[0] * s.action[1]) * std::cos(s.phi[0] - s.phi[1]);
	h -= p.k23 * std::sqrt(s.action[2] * s.action[1]) * std::cos(s.phi[2] - s.phi[1]);
	return h;
}

// subtract_zero_point shifts by -H0(1/2,1/2,1/2) = -0.075 at default params,
// the convention used for all quoted classical energy windows
inline double h_reduced(ReducedState const& s, ModelParams const& p,
                        bool subtract_zero_point = false) {
	double const i2 = s.i2();
	if(!(s.j1 > 0.0) || !(s.j2 > 0.0) || !(i2 > 0.0))
		throw DomainError("h_reduced: actions outside invariant domain");
	double h = p.omega[0] * s.j1 + p.omega[1] * i2 + p.omega[2] * s.j2 + p.x[0] * s.j1 * s.j1
	           + p.x[1] * i2 * i2 + p.x[2] * s.j2 * s.j2
	           - p.k12 * std::sqrt(s.j1 * i2) * std::cos(s.psi1)
	           - p.k23 * std::sqrt(s.j2 * i2) * std::cos(s.psi2);
	return subtract_zero_point ? h - p.zero_point() : h;
}

// --- chart changes ----------------------------------------------------------

inline ReducedState reduce(FullState const& s) {
	ReducedState r;
	r.psi1 = wrap_pi(s.phi[0] - s.phi[1]);
	r.psi2 = wrap_pi(s.phi[2] - s.phi[1]);
	r.j1 = s.action[0];
	r.j2 = s.action[2];
	r.k_total = s.action[0] + s.action[1] + s.action[2];
	return r;
}

inline CVec amplitudes_from_reduced(ReducedState const& s, double theta = 0.0) {
	double const i2 = s.i2();
	std::array<double, 3> const phi{s.psi1 + theta, theta, s.psi2 + theta};
	std::array<double, 3> const act{s.j1, i2, s.j2};
	CVec y{};
	for(int k = 0; k < 3; ++k) {
		y[k] = std::sqrt(act[k]) * std::cos(phi[k]);
		y[k + 3] = -std::sqrt(act[k]) * std::sin(phi[k]);  // c = sqrt(I) e^{-i phi}
	}
	return y;
}

inline ReducedState reduced_from_amplitudes(CVec const& y) {
	std::complex<double> const c1(y[0], y[3]), c2(y[1], y[4]), c3(y[2], y[5]);
	ReducedState r;
	r.psi1 = std::arg(c2 * std::conj(c1));  // phi1 - phi2 with phi = -arg c
	r.psi2 = std::arg(c2 * std::conj(c3));
	r.j1 = std::norm(c1);
	r.j2 = std::norm(c3);
	r.k_total = std::norm(c1) + std::norm(c2) + std::norm(c3);
	return r;
}

inline double h_amplitudes(CVec const& y, ModelParams const& p) {
	std::complex<double> const c1(y[0], y[3]), c2(y[1], y[4]), c3(y[2], y[5]);
	double h = 0.0;
	double const i1 = std::norm(c1), i2 = std::norm(c2), i3 = std::norm(c3);
	h += p.omega[0] * i1 + p.omega[1] * i2 + p.omega[2] * i3;
	h += p.x[0] * i1 * i1 + p.x[1] * i2 * i2 + p.x[2] * i3 * i3;
	h -= p.k12 * std::real(c1 * std::conj(c2));
	h -= p.k23 * std::real(c3 * std::conj(c2));
	return h;
}

// --- vector fields ----------------------------------------------------------

// i dc/dt = dH/dc*; polynomial, regular for any y
inline void eom_amplitudes(CVec const& y, CVec& dydt, ModelParams const& p) {
	std::complex<double> const c1(y[0], y[3]), c2(y[1], y[4]), c3(y[2], y[5]);
	std::complex<double> const i(0.0, 1.0);
	std::complex<double> const d1 = -i * ((p.omega[0] + 2 * p.x[0] * std::norm(c1)) * c1 - 0.5 * p.k12 * c2);
	std::complex<double> const d2 = -i * ((p.omega[1] + 2 * p.x[1] * std::norm(c2)) * c2 - 0.5 * p.k12 * c1 - 0.5 * p.k23 * c3);
	std::complex<double> const d3 = -i * ((p.omega[2] + 2 * p.x[2] * std::norm(c3)) * c3 - 0.5 * p.k23 * c2);
	dydt = {d1.real(), d2.real(), d3.real(), d1.imag(), d2.imag(), d3.imag()};
}

// canonical equations in the reduced chart; singular at the action boundary
inline std::array<double, 4> eom_reduced(ReducedState const& s, ModelParams const& p) {
	double const i2 = s.i2();
	if(s.j1 <= ACTION_FLOOR || s.j2 <= ACTION_FLOOR || i2 <= ACTION_FLOOR)
		throw SingularBoundary("eom_reduced: action at square-root boundary");
	double const r1 = std::sqrt(s.j1 * i2);
	double const r2 = std::sqrt(s.j2 * i2);
	double const c1 = std::cos(s.psi1), c2 = std::cos(s.psi2);
	double const dpsi1 = p.omega[0] + 2 * p.x[0] * s.j1 - p.omega[1] - 2 * p.x[1] * i2
	                     - 0.5 * p.k12 * c1 * (i2 - s.j1) / r1
	                     + 0.5 * p.k23 * c2 * std::sqrt(s.j2) / std::sqrt(i2);
	double const dpsi2 = p.omega[2] + 2 * p.x[2] * s.j2 - p.omega[1] - 2 * p.x[1] * i2
	                     - 0.5 * p.k23 * c2 * (i2 - s.j2) / r2
	                     + 0.5 * p.k12 * c1 * std::sqrt(s.j1) / std::sqrt(i2);
	double const dj1 = -p.k12 * r1 * std::sin(s.psi1);
	double const dj2 = -p.k23 * r2 * std::sin(s.psi2);
	return {dpsi1, dpsi2, dj1, dj2};
}

// dtheta/dt for the lift: derivative of the reduced Hamiltonian w.r.t. K
inline double dtheta_dt(ReducedState const& s, ModelParams const& p) {
	double const i2 = s.i2();
	if(i2 <= ACTION_FLOOR) throw SingularBoundary("dtheta_dt: I2 at boundary");
	return p.omega[1] + 2 * p.x[1] * i2
	       - 0.5 * p.k12 * std::sqrt(s.j1) * std::cos(s.psi1) / std::sqrt(i2)
	       - 0.5 * p.k23 * std::sqrt(s.j2) * std::cos(s.psi2) / std::sqrt(i2);
}

// --- integration ------------------------------------------------------------

struct IntegratorOptions {
	double abs_tol = 1e-11;
	double rel_tol = 1e-11;
	double dt_observe = 0.05;  // sampling interval of stored output
};

struct Trajectory {
	std::vector<double> t;
	std::vector<CVec> y;

	ReducedState reduced(std::size_t i) const { return reduced_from_amplitudes(y[i]); }
	std::size_t size() const { return t.size(); }
};

namespace detail {

using ErrorStepper = boost::numeric::odeint::runge_kutta_fehlberg78<CVec>;

// advance y from t0 to t1 in place with adaptive steps
inline void propagate(CVec& y, double t0, double t1, ModelParams const& p,
                      IntegratorOptions const& opt) {
	if(t1 == t0) return;
	auto stepper = boost::numeric::odeint::make_controlled<ErrorStepper>(opt.abs_tol, opt.rel_tol);
	auto rhs = [&p](CVec const& yy, CVec& dydt, double) { eom_amplitudes(yy, dydt, p); };
	double const dt0 = (t1 > t0 ? 1.0 : -1.0) * 1e-3;
	boost::numeric::odeint::integrate_adaptive(stepper, rhs, y, t0, t1, dt0);
}

}  // namespace detail

inline Trajectory integrate(CVec const& y0, ModelParams const& params, double t_end,
                            IntegratorOptions const& opt = {}) {
	Trajectory traj;
	std::size_t const n = static_cast<std::size_t>(std::ceil(t_end / opt.dt_observe));
	traj.t.reserve(n + 1);
	traj.y.reserve(n + 1);
	CVec y = y0;
	double t = 0.0;
	traj.t.push_back(t);
	traj.y.push_back(y);
	for(std::size_t i = 1; i <= n; ++i) {
		double const t_next = std::min(i * opt.dt_observe, t_end);
		detail::propagate(y, t, t_next, params, opt);
		t = t_next;
		traj.t.push_back(t);
		traj.y.push_back(y);
	}
	return traj;
}

inline Trajectory integrate(ReducedState const& s0, ModelParams const& params, double t_end,
                            IntegratorOptions const& opt = {}) {
	return integrate(amplitudes_from_reduced(s0), params, t_end, opt);
}

// Cross-check mode: propagate the reduced chart directly (interior orbits only).
inline std::vector<std::array<double, 5>> integrate_reduced_direct(ReducedState const& s0,
                                                                   ModelParams const& params,
                                                                   double t_end,
                                                                   IntegratorOptions const& opt = {}) {
	using RVec = std::array<double, 4>;
	RVec y{s0.psi1, s0.psi2, s0.j1, s0.j2};
	double const K = s0.k_total;
	auto rhs = [&](RVec const& yy, RVec& dydt, double) {
		dydt = eom_reduced(ReducedState{yy[0], yy[1], yy[2], yy[3], K}, params);
	};
	auto stepper = boost::numeric::odeint::make_controlled<
	    boost::numeric::odeint::runge_kutta_fehlberg78<RVec>>(opt.abs_tol, opt.rel_tol);
	std::vector<std::array<double, 5>> out;
	double t = 0.0;
	out.push_back({t, y[0], y[1], y[2], y[3]});
	std::size_t const n = static_cast<std::size_t>(std::ceil(t_end / opt.dt_observe));
	for(std::size_t i = 1; i <= n; ++i) {
		double const t_next = std::min(i * opt.dt_observe, t_end);
		boost::numeric::odeint::integrate_adaptive(stepper, rhs, y, t, t_next, 1e-3);
		t = t_next;
		out.push_back({t, y[0], y[1], y[2], y[3]});
	}
	return out;
}

// Lift a c-chart trajectory back to the three original oscillators: theta(t)
// is obtained by quadrature of dH/dK along the orbit, then the angle chart is
// inverted.  theta0 fixes the free overall angle at t = 0.
inline std::vector<FullState> lift(Trajectory const& traj, ModelParams const& params,
                                   double theta0 = 0.0) {
	std::vector<FullState> out;
	out.reserve(traj.size());
	double theta = theta0;
	double prev_rate = 0.0, prev_t = 0.0;
	for(std::size_t i = 0; i < traj.size(); ++i) {
		ReducedState const r = traj.reduced(i);
		double const rate = dtheta_dt(r, params);
		if(i > 0) theta += 0.5 * (rate + prev_rate) * (traj.t[i] - prev_t);
		prev_rate = rate;
		prev_t = traj.t[i];
		FullState f;
		f.phi = {wrap_pi(r.psi1 + theta), wrap_pi(theta), wrap_pi(r.psi2 + theta)};
		f.action = {r.j1, r.i2(), r.j2};
		out.push_back(f);
	}
	return out;
}

// --- Poincare section machinery --------------------------------------------

// Solve h_reduced(psi1=0, psi2, J1, J2) = energy for J1.  Brackets come from a
// coarse scan (10^3 samples), refined by bisection to 1e-12.  When several
// branches exist, `branch_hint` (a previous root) selects the same branch;
// otherwise the branch with the larger J1 whose flow leaves the section in the
// positive direction is used.
inline ReducedState poincare_seed(double psi2, double j2, double energy, ModelParams const& params,
                                  std::optional<double> branch_hint = std::nullopt) {
	double const K = params.K();
	double const lo = ACTION_FLOOR, hi = K - j2 - ACTION_FLOOR;
	if(!(hi > lo)) throw NoRoot("poincare_seed: no admissible J1 interval");
	auto f = [&](double j1) {
		return h_reduced(ReducedState{0.0, psi2, j1, j2, K}, params) - energy;
	};
	int const n_scan = 1000;
	std::vector<std::pair<double, double>> brackets;
	double prev_x = lo, prev_v = f(lo);
	for(int i = 1; i <= n_scan; ++i) {
		double const xc = lo + (hi - lo) * i / n_scan;
		double const vc = f(xc);
		if(prev_v == 0.0 || prev_v * vc < 0.0) brackets.emplace_back(prev_x, xc);
		prev_x = xc;
		prev_v = vc;
	}
	if(brackets.empty()) throw NoRoot("poincare_seed: energy not accessible at this (psi2, J2)");

	auto bisect = [&](double a, double b) {
		double fa = f(a);
		for(int it = 0; it < 80 && b - a > 1e-12; ++it) {
			double const m = 0.5 * (a + b);
			double const fm = f(m);
			if(fa * fm <= 0.0)
				b = m;
			else {
				a = m;
				fa = fm;
			}
		}
		return 0.5 * (a + b);
	};

	std::vector<double> roots;
	for(auto const& [a, b] : brackets) roots.push_back(bisect(a, b));

	double chosen = roots.back();
	if(branch_hint) {
		double best = std::abs(roots[0] - *branch_hint);
		chosen = roots[0];
		for(double r : roots)
			if(std::abs(r - *branch_hint) < best) {
				best = std::abs(r - *branch_hint);
				chosen = r;
			}
	} else {
		// prefer the outgoing (dpsi1/dt > 0) branch, highest J1 first
		for(auto it = roots.rbegin(); it != roots.rend(); ++it) {
			ReducedState const cand{0.0, psi2, *it, j2, K};
			try {
				if(eom_reduced(cand, params)[0] > 0.0) {
					chosen = *it;
					break;
				}
			} catch(SingularBoundary const&) {}
		}
	}
	return ReducedState{0.0, psi2, chosen, j2, K};
}

struct Crossing {
	int seed_id = 0;
	double t = 0.0;
	double psi2 = 0.0;
	double j2 = 0.0;
	double psi1 = 0.0;         // residual, |psi1| < tolerance
	double energy_error = 0.0;
	CVec y{};                  // amplitude state at the crossing
};

struct PoincareSection {
	double energy = 0.0;
	std::vector<Crossing> crossings;
	std::vector<std::string> seed_failures;
};

namespace detail {

// signed distance of psi1 from the section plane (0 mod 2pi), in (-pi, pi]
inline double section_coord(CVec const& y) {
	std::complex<double> const c1(y[0], y[3]), c2(y[1], y[4]);
	return std::arg(c2 * std::conj(c1));
}

inline double dpsi1_dt(CVec const& y, ModelParams const& p) {
	return eom_reduced(reduced_from_amplitudes(y), p)[0];
}

}  // namespace detail

// Collect oriented crossings psi1 = 0, dpsi1/dt > 0 of the orbit through y0.
// Sign changes of the section coordinate between observation samples are
// refined by bisection in time to |psi1| < tol_psi.
inline std::vector<Crossing> find_crossings(CVec const& y0, ModelParams const& params,
                                            int max_crossings, double t_max,
                                            IntegratorOptions const& opt = {},
                                            double tol_psi = 1e-12) {
	std::vector<Crossing> out;
	CVec y = y0;
	double t = 0.0;
	double d_prev = detail::section_coord(y);
	CVec y_prev = y;
	while(t < t_max && static_cast<int>(out.size()) < max_crossings) {
		double const t_next = t + opt.dt_observe;
		detail::propagate(y, t, t_next, params, opt);
		double const d_next = detail::section_coord(y);
		// genuine 0-crossing: sign change without passing the +-pi branch cut
		if(d_prev != 0.0 && d_prev * d_next <= 0.0 && std::abs(d_prev) + std::abs(d_next) < 1.0) {
			double ta = t, tb = t_next;
			CVec ya = y_prev;
			double da = d_prev;
			double t_hit = t_next;
			CVec yc = y;
			for(int it = 0; it < 100; ++it) {
				double const tm = 0.5 * (ta + tb);
				CVec ym = ya;
				detail::propagate(ym, ta, tm, params, opt);
				double const dm = detail::section_coord(ym);
				t_hit = tm;
				yc = ym;
				if(std::abs(dm) < tol_psi * 0.5 || tb - ta < 1e-14) break;
				if(da * dm <= 0.0) {
					tb = tm;
				} else {
					ta = tm;
					ya = ym;
					da = dm;
				}
			}
			if(detail::dpsi1_dt(yc, params) > 0.0) {
				ReducedState const r = reduced_from_amplitudes(yc);
				Crossing cr;
				cr.t = t_hit;
				cr.psi1 = r.psi1;
				cr.psi2 = r.psi2;
				cr.j2 = r.j2;
				cr.y = yc;
				out.push_back(cr);
			}
		}
		t = t_next;
		y_prev = y;
		d_prev = d_next;
	}
	return out;
}

inline PoincareSection poincare_section(double energy, ModelParams const& params,
                                        std::vector<std::pair<double, double>> const& seeds,
                                        int crossings_per_seed, IntegratorOptions const& opt = {},
                                        double t_max_per_seed = 4000.0) {
	PoincareSection section;
	section.energy = energy;
	int seed_id = 0;
	for(auto const& [psi2, j2] : seeds) {
		++seed_id;
		try {
			ReducedState const s0 = poincare_seed(psi2, j2, energy, params);
			CVec const y0 = amplitudes_from_reduced(s0);
			auto crossings = find_crossings(y0, params, crossings_per_seed, t_max_per_seed, opt);
			for(auto& c : crossings) {
				c.seed_id = seed_id;
				c.energy_error = h_amplitudes(c.y, params) - energy;
				section.crossings.push_back(c);
			}
		} catch(std::exception const& e) {
			section.seed_failures.push_back(std::string("seed ") + std::to_string(seed_id) + ": "
			                                + e.what());
		}
	}
	return section;
}

// --- effective frequencies ---------------------------------------------------

inline std::array<double, 3> effective_frequencies(std::array<double, 3> const& actions,
                                                   ModelParams const& p) {
	return {p.omega[0] + 2 * p.x[0] * actions[0], p.omega[1] + 2 * p.x[1] * actions[1],
	        p.omega[2] + 2 * p.x[2] * actions[2]};
}

// --- periodic orbits ---------------------------------------------------------

struct PeriodicOrbit {
	ReducedState point;     // on the section psi1 = 0
	double period = 0.0;
	double residual = 0.0;  // phase-space distance of map(z) from z
	double multiplier = 0.0;  // dominant |eigenvalue| of the linearized return map
	double trace = 0.0;       // trace of the 2x2 return-map Jacobian
	bool stable = false;
};

namespace detail {

// `returns`-fold return map of the section (psi2, j2) -> (psi2', j2') at fixed
// energy, together with the elapsed time
inline std::pair<std::array<double, 2>, double> section_map(double psi2, double j2, double energy,
                                                            ModelParams const& params, int returns,
                                                            IntegratorOptions const& opt,
                                                            std::optional<double> branch_hint) {
	ReducedState const s0 = poincare_seed(psi2, j2, energy, params, branch_hint);
	auto const crossings =
	    find_crossings(amplitudes_from_reduced(s0), params, returns, 4000.0, opt);
	if(static_cast<int>(crossings.size()) < returns)
		throw NoConvergence("section_map: trajectory produced too few crossings");
	auto const& c = crossings[returns - 1];
	return {{c.psi2, c.j2}, c.t};
}

}  // namespace detail

// Newton iteration on the section return map with finite-difference Jacobian.
inline PeriodicOrbit find_periodic_orbit(double psi2_guess, double j2_guess, double energy,
                                         ModelParams const& params, int returns = 1,
                                         IntegratorOptions const& opt = {}) {
	double z[2] = {psi2_guess, j2_guess};
	std::optional<double> hint;
	double period = 0.0;
	double residual = 1e99;
	for(int iter = 0; iter < 40; ++iter) {
		ReducedState const s_here = poincare_seed(z[0], z[1], energy, params, hint);
		hint = s_here.j1;
		auto const [fz, T] = detail::section_map(z[0], z[1], energy, params, returns, opt, hint);
		period = T;
		double const r0 = wrap_pi(fz[0] - z[0]);
		double const r1 = fz[1] - z[1];
		residual = std::hypot(r0, r1);
		if(residual < 1e-9) break;
		// finite-difference Jacobian of map(z) - z
		double const h0 = 1e-7, h1 = 1e-7;
		auto const [fp0, tp0] = detail::section_map(z[0] + h0, z[1], energy, params, returns, opt, hint);
		auto const [fp1, tp1] = detail::section_map(z[0], z[1] + h1, energy, params, returns, opt, hint);
		(void)tp0;
		(void)tp1;
		double const j00 = wrap_pi(fp0[0] - fz[0]) / h0 - 1.0;
		double const j01 = wrap_pi(fp1[0] - fz[0]) / h1;
		double const j10 = (fp0[1] - fz[1]) / h0;
		double const j11 = (fp1[1] - fz[1]) / h1 - 1.0;
		double const det = j00 * j11 - j01 * j10;
		if(std::abs(det) < 1e-14) throw NoConvergence("find_periodic_orbit: singular Jacobian");
		double const dz0 = (-r0 * j11 + r1 * j01) / det;
		double const dz1 = (-r1 * j00 + r0 * j10) / det;
		double const step_cap = 0.5;
		double const scale = std::max(1.0, std::max(std::abs(dz0), std::abs(dz1)) / step_cap);
		z[0] += dz0 / scale;
		z[1] += dz1 / scale;
	}
	if(residual > 1e-6) throw NoConvergence("find_periodic_orbit: did not close");

	PeriodicOrbit orbit;
	orbit.point = poincare_seed(z[0], z[1], energy, params, hint);
	orbit.period = period;
	orbit.residual = residual;
	// linear stability from the FD Jacobian of the return map itself
	auto const [fc, tc] = detail::section_map(z[0], z[1], energy, params, returns, opt, hint);
	(void)tc;
	double const h = 1e-6;
	auto const [fa, ta] = detail::section_map(z[0] + h, z[1], energy, params, returns, opt, hint);
	auto const [fb, tb] = detail::section_map(z[0], z[1] + h, energy, params, returns, opt, hint);
	(void)ta;
	(void)tb;
	double const m00 = wrap_pi(fa[0] - fc[0]) / h, m01 = wrap_pi(fb[0] - fc[0]) / h;
	double const m10 = (fa[1] - fc[1]) / h, m11 = (fb[1] - fc[1]) / h;
	orbit.trace = m00 + m11;
	double const disc = orbit.trace * orbit.trace / 4.0 - (m00 * m11 - m01 * m10);
	if(disc >= 0.0) {
		double const l1 = orbit.trace / 2.0 + std::sqrt(disc);
		double const l2 = orbit.trace / 2.0 - std::sqrt(disc);
		orbit.multiplier = std::max(std::abs(l1), std::abs(l2));
	} else {
		orbit.multiplier = std::sqrt(m00 * m11 - m01 * m10);  // complex pair, |lambda|
	}
	// the finite-difference Jacobian carries ~1e-4 noise in the eigenvalues, so
	// an elliptic orbit can report a multiplier slightly above 1
	orbit.stable = orbit.multiplier <= 1.0 + 1e-3;
	return orbit;
}

// --- chaos indicator ---------------------------------------------------------

struct ChaosScanPoint {
	double energy = 0.0;
	int n_chaotic = 0;
	int n_seeds = 0;

	double fraction() const { return n_seeds > 0 ? double(n_chaotic) / n_seeds : 0.0; }
};

// Finite-time divergence proxy: two copies separated by 1e-9 in one amplitude
// component; chaotic if the separation grows by more than `factor` within
// t_end.  Seeds are random section points at the given energy.
inline ChaosScanPoint chaos_probe(double energy, ModelParams const& params, int n_seeds,
                                  std::mt19937_64& rng, double t_end = 1000.0,
                                  double factor = 1e4, IntegratorOptions const& opt = {1e-10, 1e-10, 20.0}) {
	ChaosScanPoint out;
	out.energy = energy;
	std::uniform_real_distribution<double> upsi(-PI, PI);
	std::uniform_real_distribution<double> uj(0.02, params.K() - 0.04);
	for(int s = 0; s < n_seeds * 20 && out.n_seeds < n_seeds; ++s) {
		double const psi2 = upsi(rng);
		double const j2 = uj(rng);
		ReducedState s0;
		try {
			s0 = poincare_seed(psi2, j2, energy, params);
		} catch(NoRoot const&) {
			continue;
		}
		CVec y = amplitudes_from_reduced(s0);
		CVec yp = y;
		yp[4] += 1e-9;
		double const d0 = 1e-9;
		double t = 0.0;
		double ratio_max = 0.0;
		bool ok = true;
		try {
			while(t < t_end) {
				double const t_next = std::min(t + opt.dt_observe, t_end);
				detail::propagate(y, t, t_next, params, opt);
				detail::propagate(yp, t, t_next, params, opt);
				t = t_next;
				double acc = 0.0;
				for(int k = 0; k < 6; ++k) acc += (y[k] - yp[k]) * (y[k] - yp[k]);
				ratio_max = std::max(ratio_max, std::sqrt(acc) / d0);
				if(ratio_max > factor) break;  // verdict settled
			}
		} catch(std::exception const&) {
			ok = false;
		}
		if(!ok) continue;
		++out.n_seeds;
		if(ratio_max > factor) ++out.n_chaotic;
	}
	return out;
}

inline std::vector<ChaosScanPoint> chaos_scan(ModelParams const& params,
                                              std::vector<double> const& energies,
                                              int n_seeds = 10, std::uint64_t rng_seed = 7,
                                              double t_end = 1000.0, double factor = 1e4) {
	std::mt19937_64 rng(rng_seed);
	std::vector<ChaosScanPoint> out;
	out.reserve(energies.size());
	for(double e : energies) out.push_back(chaos_probe(e, params, n_seeds, rng, t_end, factor));
	return out;
}

// Contiguous hull of scan energies whose chaotic fraction reaches `threshold`.
inline std::optional<std::pair<double, double>> chaotic_band(std::vector<ChaosScanPoint> const& scan,
                                                             double threshold = 0.5) {
	std::optional<std::pair<double, double>> band;
	for(auto const& pt : scan)
		if(pt.fraction() >= threshold) {
			if(!band)
				band = {pt.energy, pt.energy};
			else
				band->second = pt.energy;
		}
	return band;
}

}  // namespace triwell
