#pragma once

// Model parameters for the three-mode Bose-Hubbard trimer and its
// mean-field / reduced classical counterparts.  One instance of
// ModelParams is the single source of truth for a run.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace triwell {

inline constexpr double PI = 3.14159265358979323846;
inline constexpr double TWO_PI = 2.0 * PI;

struct ModelParams {
	// Mode frequencies.  Well 1 is the energetically cheapest mode and well 3
	// the most expensive one, so the upper end of the spectrum is dominated
	// by large n3.  (The opposite sign choice gives the mirror-image model
	// with modes 1 and 3 swapped; all derived quantities map accordingly.)
	std::array<double, 3> omega{-0.1, 0.0, 0.1};
	std::array<double, 3> x{0.1, 0.1, 0.1};  // anharmonicities
	double k12 = 0.5;                        // coupling wells 1-2
	double k23 = 0.5;                        // coupling wells 2-3
	int    n_particles = 30;

	// Conserved total action of the symmetrized classical model: each of the
	// three modes carries a half-quantum of zero-point action.
	double K() const { return n_particles + 1.5; }

	// Energy of the zero-point configuration I = (1/2, 1/2, 1/2).
	double zero_point() const {
		double h0 = 0.0;
		for(int j = 0; j < 3; ++j) h0 += 0.5 * omega[j] + 0.25 * x[j];
		return h0;
	}

	bool operator==(ModelParams const&) const = default;
};

inline void to_json(nlohmann::json& j, ModelParams const& p) {
	j = nlohmann::json{{"omega", p.omega},
	                   {"x", p.x},
	                   {"k12", p.k12},
	                   {"k23", p.k23},
	                   {"n_particles", p.n_particles}};
}

inline void from_json(nlohmann::json const& j, ModelParams& p) {
	if(j.contains("omega")) j.at("omega").get_to(p.omega);
	if(j.contains("x")) j.at("x").get_to(p.x);
	if(j.contains("k12")) p.k12 = j.at("k12").get<double>();
	if(j.contains("k23")) p.k23 = j.at("k23").get<double>();
	if(j.contains("n_particles")) p.n_particles = j.at("n_particles").get<int>();
	if(p.n_particles < 0) throw std::invalid_argument("n_particles must be >= 0");
}

}  // namespace triwell
