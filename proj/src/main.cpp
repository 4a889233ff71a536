// triwell — spectra, semiclassical torus fields, state classification and
// mean-field dynamics of the three-site Bose-Hubbard trimer, as subcommands
// with file-based, reproducible output.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "triwell/classical.hpp"
#include "triwell/classifier.hpp"
#include "triwell/fock.hpp"
#include "triwell/io.hpp"
#include "triwell/meanfield.hpp"
#include "triwell/model.hpp"
#include "triwell/torusfield.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace triwell;

static constexpr char const* kVersion = "1.0.0";

// --- run configuration -------------------------------------------------------

struct RunConfig {
	ModelParams model;
	int grid_m1 = 128;
	int grid_m2 = 128;
	IntegratorOptions integrator;
	ClassifierThresholds thresholds;
	fs::path out_dir = "out";
	std::uint64_t seed = 7;
};

static json thresholds_to_json(ClassifierThresholds const& t) {
	return json{{"e1_concentration", t.e1_concentration},
	            {"e1_center_radius", t.e1_center_radius},
	            {"d_line_unanimity", t.d_line_unanimity},
	            {"d_v_concentration", t.d_v_concentration},
	            {"d_shell_spread", t.d_shell_spread},
	            {"pair_overlap", t.pair_overlap},
	            {"spectator_mass", t.spectator_mass},
	            {"a_line_unanimity", t.a_line_unanimity},
	            {"a_density_min", t.a_density_min},
	            {"floor_fraction", t.floor_fraction},
	            {"max_template_quanta", t.max_template_quanta},
	            {"width_factors", t.width_factors},
	            {"e2_band_lo", t.e2_band_lo},
	            {"e2_band_hi", t.e2_band_hi}};
}

static void thresholds_from_json(json const& j, ClassifierThresholds& t) {
	t.e1_concentration = j.value("e1_concentration", t.e1_concentration);
	t.e1_center_radius = j.value("e1_center_radius", t.e1_center_radius);
	t.d_line_unanimity = j.value("d_line_unanimity", t.d_line_unanimity);
	t.d_v_concentration = j.value("d_v_concentration", t.d_v_concentration);
	t.d_shell_spread = j.value("d_shell_spread", t.d_shell_spread);
	t.pair_overlap = j.value("pair_overlap", t.pair_overlap);
	t.spectator_mass = j.value("spectator_mass", t.spectator_mass);
	t.a_line_unanimity = j.value("a_line_unanimity", t.a_line_unanimity);
	t.a_density_min = j.value("a_density_min", t.a_density_min);
	t.floor_fraction = j.value("floor_fraction", t.floor_fraction);
	t.max_template_quanta = j.value("max_template_quanta", t.max_template_quanta);
	t.width_factors = j.value("width_factors", t.width_factors);
	t.e2_band_lo = j.value("e2_band_lo", t.e2_band_lo);
	t.e2_band_hi = j.value("e2_band_hi", t.e2_band_hi);
}

static json config_to_json(RunConfig const& cfg) {
	json j;
	j["model"] = cfg.model;
	j["grid"] = {{"m1", cfg.grid_m1}, {"m2", cfg.grid_m2}};
	j["integrator"] = {{"abs_tol", cfg.integrator.abs_tol},
	                   {"rel_tol", cfg.integrator.rel_tol},
	                   {"dt_observe", cfg.integrator.dt_observe}};
	j["thresholds"] = thresholds_to_json(cfg.thresholds);
	j["out_dir"] = cfg.out_dir.string();
	j["seed"] = cfg.seed;
	return j;
}

static void config_from_json(json const& j, RunConfig& cfg) {
	if(j.contains("model")) cfg.model = j["model"].get<ModelParams>();
	if(j.contains("grid")) {
		cfg.grid_m1 = j["grid"].value("m1", cfg.grid_m1);
		cfg.grid_m2 = j["grid"].value("m2", cfg.grid_m2);
	}
	if(j.contains("integrator")) {
		auto const& ji = j["integrator"];
		cfg.integrator.abs_tol = ji.value("abs_tol", cfg.integrator.abs_tol);
		cfg.integrator.rel_tol = ji.value("rel_tol", cfg.integrator.rel_tol);
		cfg.integrator.dt_observe = ji.value("dt_observe", cfg.integrator.dt_observe);
	}
	if(j.contains("thresholds")) thresholds_from_json(j["thresholds"], cfg.thresholds);
	if(j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
	if(j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
}

// FNV-1a over the canonical config dump; stable across runs and platforms
static std::string config_hash(RunConfig const& cfg) {
	std::string const dump = config_to_json(cfg).dump();
	std::uint64_t h = 1469598103934665603ull;
	for(unsigned char c : dump) {
		h ^= c;
		h *= 1099511628211ull;
	}
	std::ostringstream os;
	os << std::hex << h;
	return os.str();
}

// metadata JSON beside each command's artifacts; `generated_at` is the only
// field allowed to differ between identical runs
static void write_metadata(fs::path const& path, RunConfig const& cfg, std::string const& command,
                           std::vector<fs::path> const& artifacts) {
	json j;
	j["command"] = command;
	j["version"] = kVersion;
	j["config"] = config_to_json(cfg);
	j["config_hash"] = config_hash(cfg);
	std::vector<std::string> names;
	for(auto const& a : artifacts) names.push_back(a.filename().string());
	j["artifacts"] = names;
	auto const now = std::chrono::system_clock::now().time_since_epoch();
	j["generated_at"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
	auto out = open_out(path);
	out << j.dump(2) << "\n";
}

// --- subcommands -------------------------------------------------------------

static int cmd_spectrum(RunConfig const& cfg, std::string const& label) {
	auto basis = enumerate_basis(cfg.model.n_particles);
	auto sys = diagonalize(build_hamiltonian(cfg.model, basis));
	fs::path dir = cfg.out_dir / "spectrum";
	fs::path csv = dir / (label + ".csv");
	write_spectrum_csv(csv, sys.energies);
	write_metadata(dir / (label + ".meta.json"), cfg, "spectrum", {csv});
	std::cout << "spectrum: " << sys.energies.size() << " levels in [" << sys.energies.minCoeff()
	          << ", " << sys.energies.maxCoeff() << "] -> " << csv.string() << "\n";
	return 0;
}

static int cmd_wavefn(RunConfig const& cfg, std::vector<int> const& states) {
	auto basis = enumerate_basis(cfg.model.n_particles);
	auto sys = diagonalize(build_hamiltonian(cfg.model, basis));
	TorusGrid grid{cfg.grid_m1, cfg.grid_m2};
	fs::path dir = cfg.out_dir / "wavefn";
	std::vector<fs::path> artifacts;
	for(int k : states) {
		if(k < 1 || k > int(basis.size()))
			throw DomainError("wavefn: state index " + std::to_string(k) + " outside 1.." +
			                  std::to_string(basis.size()));
		auto field = synthesize(sys.vector(k), basis, grid);
		std::string const stem = "phi" + std::to_string(k);
		fs::path const dcsv = dir / (stem + "_density.csv");
		fs::path const pcsv = dir / (stem + "_phase.csv");
		fs::path const dpgm = dir / (stem + "_density.pgm");
		fs::path const ppgm = dir / (stem + "_phase.pgm");
		write_matrix_csv(dcsv, density(field));
		write_matrix_csv(pcsv, phase(field));
		write_pgm(dpgm, density(field));
		write_pgm(ppgm, phase(field));
		for(auto const& a : {dcsv, pcsv, dpgm, ppgm}) artifacts.push_back(a);
		std::cout << "wavefn: state " << k << " (E = " << sys.energy(k) << ") -> " << dir.string()
		          << "/" << stem << "_*\n";
	}
	write_metadata(dir / "run.meta.json", cfg, "wavefn", artifacts);
	return 0;
}

static int cmd_classify(RunConfig const& cfg, std::string const& label) {
	auto basis = enumerate_basis(cfg.model.n_particles);
	auto sys = diagonalize(build_hamiltonian(cfg.model, basis));
	Classifier cls(cfg.model, cfg.thresholds);
	auto assignments = cls.classify_all(sys, basis, TorusGrid{cfg.grid_m1, cfg.grid_m2});
	fs::path dir = cfg.out_dir / "classify";
	fs::path csv = dir / (label + ".csv");
	fs::path summary = dir / (label + "_summary.json");
	write_assignments_csv(csv, assignments);
	{
		auto out = open_out(summary);
		out << counts_json(assignments).dump(2) << "\n";
	}
	write_metadata(dir / (label + ".meta.json"), cfg, "classify", {csv, summary});
	std::cout << "classify: " << counts_json(assignments).dump() << " -> " << csv.string() << "\n";
	return 0;
}

static int cmd_poincare(RunConfig const& cfg, std::string const& label, double energy,
                        int n_psi2, int n_j2, int crossings) {
	// seed grid over the section rectangle; infeasible nodes are skipped inside
	std::vector<std::pair<double, double>> seeds;
	double const K = cfg.model.K();
	for(int a = 0; a < n_psi2; ++a)
		for(int b = 0; b < n_j2; ++b)
			seeds.emplace_back(-PI + TWO_PI * (a + 0.5) / n_psi2, K * (b + 0.5) / n_j2);
	auto section = poincare_section(energy, cfg.model, seeds, crossings, cfg.integrator);
	if(section.crossings.empty())
		throw NoRoot("poincare: no feasible seed at E = " + std::to_string(energy));
	fs::path dir = cfg.out_dir / "poincare";
	fs::path csv = dir / (label + ".csv");
	write_section_csv(csv, section);
	write_metadata(dir / (label + ".meta.json"), cfg, "poincare", {csv});
	std::cout << "poincare: E = " << energy << ", " << seeds.size() << " seeds, "
	          << section.crossings.size() << " crossings -> " << csv.string() << "\n";
	return 0;
}

static int cmd_evolve(RunConfig const& cfg, std::string const& label, CVec const& y0,
                      double t_end) {
	auto traj = integrate(y0, cfg.model, t_end, cfg.integrator);
	auto rep = detect_locking(traj);
	fs::path dir = cfg.out_dir / "evolve";
	fs::path csv = dir / (label + ".csv");
	fs::path rcsv = dir / (label + "_reduced.csv");
	fs::path lockj = dir / (label + "_lock.json");
	write_trajectory_csv(csv, traj);
	write_reduced_trajectory_csv(rcsv, traj, cfg.model);
	{
		auto out = open_out(lockj);
		out << lock_report_json(rep).dump(2) << "\n";
	}
	write_metadata(dir / (label + ".meta.json"), cfg, "evolve", {csv, rcsv, lockj});
	std::cout << "evolve: t_end = " << t_end << ", type " << to_string(rep.type) << " -> "
	          << csv.string() << "\n";
	return 0;
}

static int cmd_gridmap(RunConfig const& cfg, std::string const& label, double t_end) {
	auto grid = classify_basis_grid(cfg.model, t_end, {}, cfg.integrator);
	auto basis = enumerate_basis(cfg.model.n_particles);
	auto sys = diagonalize(build_hamiltonian(cfg.model, basis));
	Classifier cls(cfg.model, cfg.thresholds);
	auto assignments = cls.classify_all(sys, basis, TorusGrid{cfg.grid_m1, cfg.grid_m2});
	auto qgrid = quantum_basis_grid(sys, basis, assignments);
	for(std::size_t i = 0; i < grid.size(); ++i) grid[i].quantum_type = qgrid[i];

	std::vector<Center> classical;
	for(auto const& cell : grid) classical.push_back(cell.classical_type);
	auto agreement = grid_agreement(classical, qgrid);

	fs::path dir = cfg.out_dir / "gridmap";
	fs::path csv = dir / (label + ".csv");
	fs::path summary = dir / (label + "_summary.json");
	write_gridmap_csv(csv, grid);
	{
		json j;
		j["cells"] = grid.size();
		j["mutually_assigned"] = agreement.mutually_assigned;
		j["agreeing"] = agreement.agreeing;
		j["agreement"] = agreement.fraction();
		auto out = open_out(summary);
		out << j.dump(2) << "\n";
	}
	write_metadata(dir / (label + ".meta.json"), cfg, "gridmap", {csv, summary});
	std::cout << "gridmap: " << grid.size() << " cells, agreement " << agreement.fraction()
	          << " on " << agreement.mutually_assigned << " mutually assigned -> " << csv.string()
	          << "\n";
	return 0;
}

// --- entry -------------------------------------------------------------------

static CVec parse_ic(std::string const& number_state, std::string const& phases_s,
                     std::string const& amplitudes, std::optional<int> eigenstate,
                     RunConfig const& cfg) {
	int n_given = int(!number_state.empty()) + int(!amplitudes.empty()) + int(eigenstate.has_value());
	if(n_given != 1)
		throw DomainError("evolve: give exactly one of --number-state, --eigenstate, --amplitudes");
	auto split = [](std::string const& s) {
		std::vector<double> v;
		std::stringstream ss(s);
		std::string tok;
		while(std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
		return v;
	};
	if(!number_state.empty()) {
		auto n = split(number_state);
		if(n.size() != 3) throw DomainError("evolve: --number-state needs n1,n2,n3");
		std::array<double, 3> ph{0, 0, 0};
		if(!phases_s.empty()) {
			auto p = split(phases_s);
			if(p.size() != 3) throw DomainError("evolve: --phases needs p1,p2,p3");
			ph = {p[0], p[1], p[2]};
		}
		return ic_from_number_state(int(n[0]), int(n[1]), int(n[2]), ph);
	}
	if(!amplitudes.empty()) {
		auto v = split(amplitudes);
		if(v.size() != 6) throw DomainError("evolve: --amplitudes needs re1,re2,re3,im1,im2,im3");
		return CVec{v[0], v[1], v[2], v[3], v[4], v[5]};
	}
	auto basis = enumerate_basis(cfg.model.n_particles);
	auto sys = diagonalize(build_hamiltonian(cfg.model, basis));
	if(*eigenstate < 1 || *eigenstate > int(basis.size()))
		throw DomainError("evolve: --eigenstate outside 1.." + std::to_string(basis.size()));
	return ic_from_eigenstate(sys.vector(*eigenstate), basis);
}

int main(int argc, char** argv) {
	CLI::App app{"triwell: Bose-Hubbard trimer spectra, torus wave fields, state classification "
	             "and mean-field dynamics"};
	app.set_version_flag("--version", kVersion);
	app.require_subcommand(1);

	RunConfig cfg;
	std::string config_path;
	std::string out_dir;
	bool default_params = false;
	app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
	app.add_option("--out", out_dir, "output directory (overrides config)");
	app.add_flag("--default-params", default_params,
	             "ignore model overrides from --config and use the built-in parameter set");

	auto* sp = app.add_subcommand("spectrum", "diagonalize and export the energy spectrum");
	std::string sp_label = "run";
	sp->add_option("--label", sp_label, "artifact label");

	auto* wf = app.add_subcommand("wavefn", "export torus density/phase maps for eigenstates");
	std::vector<int> wf_states;
	wf->add_option("--states", wf_states, "1-based eigenstate labels")->required()->delimiter(',');

	auto* cl = app.add_subcommand("classify", "assign organization-center types to all states");
	std::string cl_label = "assignments";
	cl->add_option("--label", cl_label, "artifact label");

	auto* po = app.add_subcommand("poincare", "accumulate a psi1 = 0 surface of section");
	std::string po_label = "section";
	double po_energy = 27.0;
	int po_npsi2 = 8, po_nj2 = 8, po_crossings = 200;
	po->add_option("--energy", po_energy, "section energy (unshifted)");
	po->add_option("--n-psi2", po_npsi2, "seed grid resolution in psi2");
	po->add_option("--n-j2", po_nj2, "seed grid resolution in J2");
	po->add_option("--crossings", po_crossings, "crossings to collect per seed");
	po->add_option("--label", po_label, "artifact label");

	auto* ev = app.add_subcommand("evolve", "integrate one mean-field trajectory and "
	                                        "diagnose phase locking");
	std::string ev_label = "traj", ev_number, ev_phases, ev_amps;
	std::optional<int> ev_eigenstate;
	double ev_tend = 1000.0;
	ev->add_option("--number-state", ev_number, "initial condition n1,n2,n3");
	ev->add_option("--phases", ev_phases, "initial phases for --number-state");
	ev->add_option("--eigenstate", ev_eigenstate, "initial condition from eigenstate occupations");
	ev->add_option("--amplitudes", ev_amps, "raw initial condition re1,re2,re3,im1,im2,im3");
	ev->add_option("--t-end", ev_tend, "integration horizon");
	ev->add_option("--label", ev_label, "artifact label");

	auto* gm = app.add_subcommand("gridmap", "classify every basis cell classically and "
	                                         "quantum mechanically");
	std::string gm_label = "grid";
	double gm_tend = 1000.0;
	gm->add_option("--t-end", gm_tend, "per-cell integration horizon");
	gm->add_option("--label", gm_label, "artifact label");

	CLI11_PARSE(app, argc, argv);

	std::string active = app.get_subcommands().front()->get_name();
	try {
		if(!config_path.empty()) {
			std::ifstream in(config_path);
			json j = json::parse(in);
			config_from_json(j, cfg);
		}
		if(default_params) cfg.model = ModelParams{};
		if(!out_dir.empty()) cfg.out_dir = out_dir;

		if(sp->parsed()) return cmd_spectrum(cfg, sp_label);
		if(wf->parsed()) return cmd_wavefn(cfg, wf_states);
		if(cl->parsed()) return cmd_classify(cfg, cl_label);
		if(po->parsed()) return cmd_poincare(cfg, po_label, po_energy, po_npsi2, po_nj2,
		                                     po_crossings);
		if(ev->parsed())
			return cmd_evolve(cfg, ev_label,
			                  parse_ic(ev_number, ev_phases, ev_amps, ev_eigenstate, cfg), ev_tend);
		if(gm->parsed()) return cmd_gridmap(cfg, gm_label, gm_tend);
	} catch(std::exception const& e) {
		json err;
		err["error"] = {{"command", active}, {"type", typeid(e).name()}, {"message", e.what()}};
		std::cerr << err.dump() << "\n";
		return 1;
	}
	return 2;  // unreachable: require_subcommand enforces one match
}
