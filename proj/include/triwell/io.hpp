#pragma once

// File export helpers: CSV tables, 8-bit binary PGM images and JSON summaries.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "classifier.hpp"
#include "meanfield.hpp"
#include "types.hpp"

namespace triwell {

inline std::ofstream open_out(std::filesystem::path const& path) {
	if(path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
	std::ofstream out(path, std::ios::binary);
	if(!out) throw std::runtime_error("cannot open for writing: " + path.string());
	return out;
}

inline void write_spectrum_csv(std::filesystem::path const& path, Eigen::VectorXd const& energies) {
	auto out = open_out(path);
	out << "index,energy\n" << std::setprecision(15);
	for(int k = 0; k < energies.size(); ++k) out << k + 1 << "," << energies(k) << "\n";
}

inline void write_matrix_csv(std::filesystem::path const& path, Eigen::MatrixXd const& m) {
	auto out = open_out(path);
	out << std::setprecision(15);
	for(int a = 0; a < m.rows(); ++a) {
		for(int b = 0; b < m.cols(); ++b) out << (b ? "," : "") << m(a, b);
		out << "\n";
	}
}

// Grayscale PGM: white = 0, black = the grid maximum.
inline void write_pgm(std::filesystem::path const& path, Eigen::MatrixXd const& m) {
	auto out = open_out(path);
	double const mx = m.maxCoeff();
	out << "P5\n" << m.cols() << " " << m.rows() << "\n255\n";
	for(int a = 0; a < m.rows(); ++a)
		for(int b = 0; b < m.cols(); ++b) {
			double const v = mx > 0 ? m(a, b) / mx : 0.0;
			out.put(static_cast<char>(255 - static_cast<int>(std::lround(255.0 * v))));
		}
}

inline void write_assignments_csv(std::filesystem::path const& path,
                                  std::vector<StateAssignment> const& assignments) {
	auto out = open_out(path);
	out << "index,energy,center,qn1,qn2,confidence\n" << std::setprecision(10);
	for(auto const& a : assignments) {
		out << a.state_index << "," << a.energy << "," << to_string(a.center) << ",";
		if(a.qn1 >= 0) out << a.qn1;
		out << ",";
		if(a.qn2 >= 0) out << a.qn2;
		out << "," << a.confidence << "\n";
	}
}

inline nlohmann::json counts_json(std::vector<StateAssignment> const& assignments) {
	std::map<std::string, int> h;
	for(auto const& a : assignments) ++h[to_string(a.center)];
	nlohmann::json j;
	j["counts"] = h;
	int assigned = 0;
	for(auto const& a : assignments)
		if(a.center != Center::UNASSIGNED && a.center != Center::E2) ++assigned;
	j["organized_total"] = assigned;
	j["states_total"] = assignments.size();
	return j;
}

inline void write_section_csv(std::filesystem::path const& path, PoincareSection const& s) {
	auto out = open_out(path);
	out << "seed_id,psi2,j2\n" << std::setprecision(12);
	for(auto const& c : s.crossings) out << c.seed_id << "," << c.psi2 << "," << c.j2 << "\n";
}

inline void write_trajectory_csv(std::filesystem::path const& path, Trajectory const& traj) {
	auto out = open_out(path);
	out << "t,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,abs2_c1,abs2_c2,abs2_c3,phase1,phase2,phase3\n"
	    << std::setprecision(12);
	for(std::size_t i = 0; i < traj.size(); ++i) {
		auto const& y = traj.y[i];
		out << traj.t[i];
		for(int k = 0; k < 3; ++k) out << "," << y[k] << "," << y[k + 3];
		for(int k = 0; k < 3; ++k) out << "," << (y[k] * y[k] + y[k + 3] * y[k + 3]);
		for(int k = 0; k < 3; ++k)
			out << "," << -std::atan2(y[k + 3], y[k]);  // phi = -arg c
		out << "\n";
	}
}

inline void write_reduced_trajectory_csv(std::filesystem::path const& path, Trajectory const& traj,
                                         ModelParams const& params) {
	auto out = open_out(path);
	out << "t,psi1,psi2,j1,j2,energy\n" << std::setprecision(12);
	for(std::size_t i = 0; i < traj.size(); ++i) {
		ReducedState const r = traj.reduced(i);
		out << traj.t[i] << "," << r.psi1 << "," << r.psi2 << "," << r.j1 << "," << r.j2 << ","
		    << h_amplitudes(traj.y[i], params) << "\n";
	}
}

inline void write_gridmap_csv(std::filesystem::path const& path, std::vector<GridCell> const& grid) {
	auto out = open_out(path);
	out << "n1,n3,label_classical,label_quantum\n";
	for(auto const& cell : grid)
		out << cell.n1 << "," << cell.n3 << "," << to_string(cell.classical_type) << ","
		    << to_string(cell.quantum_type) << "\n";
}

inline nlohmann::json lock_report_json(LockReport const& rep) {
	nlohmann::json j;
	j["type"] = to_string(rep.type);
	j["locked_12"] = rep.locked12;
	j["locked_23"] = rep.locked23;
	j["locked_13"] = rep.locked13;
	j["intermittent"] = rep.intermittent;
	j["window_patterns"] = rep.window_patterns;
	std::vector<std::vector<double>> rates;
	for(auto const& r : rep.window_rates) rates.push_back({r[0], r[1], r[2]});
	j["window_rates"] = rates;
	return j;
}

}  // namespace triwell
