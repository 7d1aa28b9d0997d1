// seqmeas: sequential joint tables, EPR-Bohm correlations, coincidence
// simulation and Kolmogorov feasibility from the command line.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqmeas/eprbohm.hpp"
#include "seqmeas/error.hpp"
#include "seqmeas/eventsim.hpp"
#include "seqmeas/io.hpp"
#include "seqmeas/kolmogorov.hpp"
#include "seqmeas/sequential.hpp"

namespace {

using seqmeas::io::json;
namespace epr = seqmeas::epr;
namespace eventsim = seqmeas::eventsim;
namespace kolmogorov = seqmeas::kolmogorov;
namespace sequential = seqmeas::sequential;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitBadInput = 2;

struct Options {
  std::string output;
  std::string format = "json";
  std::string convention = "spin";

  // sequential
  std::string state = "ket0";
  std::string observables;
  std::string order = "ab";
  std::string input;

  // epr
  std::string angles;
  std::string problem_out;

  // simulate
  eventsim::SimConfig sim;
  std::string events_path;
  std::string replay_path;
  unsigned workers = 1;

  // feasibility
  double tol = kolmogorov::kDefaultTol;
};

epr::Convention parse_convention(const std::string& name) {
  return name == "photon" ? epr::Convention::photon : epr::Convention::spin_half;
}

void emit(const Options& opt, const std::string& text) {
  if (opt.output.empty() || opt.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + opt.output + "'");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return json::parse(in);
}

int cmd_sequential(const Options& opt) {
  const auto convention = parse_convention(opt.convention);
  json state_spec = opt.state;
  json obs_specs = json::array();
  if (!opt.input.empty()) {
    const json doc = read_json_file(opt.input);
    if (doc.contains("state")) state_spec = doc["state"];
    if (doc.contains("observables")) obs_specs = doc["observables"];
  }
  if (!opt.observables.empty()) {
    obs_specs = json::array();
    for (const auto& name : seqmeas::io::split_list(opt.observables)) obs_specs.push_back(name);
  }
  if (!obs_specs.is_array() || obs_specs.size() != 2) {
    throw std::invalid_argument("sequential needs exactly two observables");
  }

  std::string state_label;
  const auto psi = seqmeas::io::parse_state(state_spec, &state_label);
  auto a = seqmeas::io::parse_observable(obs_specs[0], convention);
  auto b = seqmeas::io::parse_observable(obs_specs[1], convention);
  if (opt.order == "ba") std::swap(a, b);

  const auto sd_a = seqmeas::hilbert::spectral_decompose(a.matrix);
  const auto sd_b = seqmeas::hilbert::spectral_decompose(b.matrix);
  const auto forward = sequential::sequential_joint(psi, sd_a, sd_b, {a.label, b.label});
  const auto reversed = sequential::sequential_joint(psi, sd_b, sd_a, {b.label, a.label});
  const double gap = sequential::order_symmetry_gap(psi, sd_a, sd_b);

  if (opt.format == "csv") {
    std::ostringstream out;
    out << "table,first,second,first_outcome,second_outcome,probability\n";
    auto rows = [&](const char* name, const sequential::SequentialJointTable& t) {
      for (std::size_t i = 0; i < t.q.size(); ++i) {
        for (std::size_t j = 0; j < t.q[i].size(); ++j) {
          out << name << ',' << t.order_label.first << ',' << t.order_label.second << ','
              << seqmeas::io::format_double(t.first_outcomes[i]) << ','
              << seqmeas::io::format_double(t.second_outcomes[j]) << ','
              << seqmeas::io::format_double(t.q[i][j]) << '\n';
        }
      }
    };
    rows("forward", forward);
    rows("reversed", reversed);
    out << "gap,,,,," << seqmeas::io::format_double(gap) << '\n';
    emit(opt, out.str());
    return kExitOk;
  }

  json j;
  j["state"] = state_label;
  j["forward"] = seqmeas::io::table_to_json(forward);
  j["reversed"] = seqmeas::io::table_to_json(reversed);
  j["order_symmetry_gap"] = gap;
  j["commutator_norm"] = seqmeas::hilbert::commutator_norm(a.matrix, b.matrix);
  emit(opt, dump(j));
  return kExitOk;
}

int cmd_epr(const Options& opt) {
  const auto convention = parse_convention(opt.convention);
  std::vector<double> angles;
  for (const auto& s : seqmeas::io::split_list(opt.angles)) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad angle '" + s + "'");
    angles.push_back(v);
  }
  if (angles.size() < 2 || angles.size() > 4) {
    throw std::invalid_argument("epr takes 2, 3 or 4 angles, got " + std::to_string(angles.size()));
  }
  auto first = [&](double t) { return epr::AngleSetting(t, epr::Leg::first, convention); };
  auto second = [&](double t) { return epr::AngleSetting(t, epr::Leg::second, convention); };

  json j;
  j["convention"] = epr::to_string(convention);
  j["angles"] = angles;
  if (angles.size() == 2) {
    const auto d = epr::conditional_decomposition(first(angles[0]), second(angles[1]));
    j["correlation"] = d.correlation;
    j["decomposition"] = seqmeas::io::decomposition_to_json(d);
  } else if (angles.size() == 3) {
    const auto r = epr::bell_inequality_report(angles[0], angles[1], angles[2], convention);
    j["correlations"] = {{"a,b", r.e_ab}, {"b,c", r.e_bc}, {"a,c", r.e_ac}};
    j["paper_form"] = seqmeas::io::inequality_to_json(r.paper_form);
    j["textbook_form"] = seqmeas::io::inequality_to_json(r.textbook_form);
  } else {
    const auto a1 = first(angles[0]);
    const auto a2 = first(angles[1]);
    const auto b1 = second(angles[2]);
    const auto b2 = second(angles[3]);
    seqmeas::CorrelationSet set;
    const kolmogorov::ChshLabels labels;
    set.set(labels.a1, labels.b1, epr::correlation(a1, b1));
    set.set(labels.a1, labels.b2, epr::correlation(a1, b2));
    set.set(labels.a2, labels.b1, epr::correlation(a2, b1));
    set.set(labels.a2, labels.b2, epr::correlation(a2, b2));
    j["chsh"] = epr::chsh(a1, a2, b1, b2);
    json corr = json::object();
    for (const auto& [key, value] : set.values()) corr[key.first + "," + key.second] = value;
    j["correlations"] = corr;
    j["facets"] = seqmeas::io::chsh_report_to_json(kolmogorov::evaluate_chsh_facets(set, labels));
    if (!opt.problem_out.empty()) {
      json problem = {{"variables", {labels.a1, labels.a2, labels.b1, labels.b2}}, {"pairwise", json::array()}};
      for (const auto& [key, value] : set.values()) {
        problem["pairwise"].push_back({{"x", key.first}, {"y", key.second}, {"correlation", value}});
      }
      std::ofstream out(opt.problem_out);
      if (!out) throw std::runtime_error("cannot open '" + opt.problem_out + "'");
      out << dump(problem);
    }
  }
  if (angles.size() != 4 && !opt.problem_out.empty()) {
    throw std::invalid_argument("--problem needs the 4-angle CHSH form");
  }
  emit(opt, dump(j));
  return kExitOk;
}

int cmd_simulate(Options opt) {
  if (opt.format != "json") throw std::invalid_argument("simulate emits stats as JSON; use --events for CSV");
  opt.sim.convention = parse_convention(opt.convention);
  opt.sim.validate();

  std::vector<eventsim::EventRecord> events;
  if (!opt.replay_path.empty()) {
    std::ifstream in(opt.replay_path);
    if (!in) throw std::runtime_error("cannot open '" + opt.replay_path + "'");
    events = seqmeas::io::read_events_csv(in);
  } else {
    events = eventsim::run_experiment(opt.sim, opt.workers);
    if (!opt.events_path.empty()) {
      std::ofstream out(opt.events_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot open '" + opt.events_path + "'");
      seqmeas::io::write_events_csv(out, events, opt.sim);
    }
  }
  const auto stats = eventsim::match_coincidences(events, opt.sim);
  emit(opt, dump(seqmeas::io::stats_to_json(stats)));
  return kExitOk;
}

int cmd_feasibility(const Options& opt) {
  json doc;
  try {
    doc = read_json_file(opt.input);
  } catch (const json::exception& e) {
    throw seqmeas::MalformedProblemError(std::string("invalid JSON: ") + e.what());
  }
  const auto problem = seqmeas::io::problem_from_json(doc);
  const auto result = kolmogorov::solve_feasibility(problem, opt.tol);
  emit(opt, dump(seqmeas::io::result_to_json(result, problem)));
  return result.status == kolmogorov::Status::feasible ? kExitOk : kExitInfeasible;
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--output", opt.output, "Output file (default: stdout)");
  cmd->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--convention", opt.convention, "Angle convention")->check(CLI::IsMember({"spin", "photon"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential-measurement probabilities, EPR-Bohm correlations and Kolmogorov feasibility"};
  app.require_subcommand(1, 1);
  Options opt;

  auto* seq = app.add_subcommand("sequential", "Sequential joint tables for two observables, both orders");
  add_common(seq, opt);
  seq->add_option("--state", opt.state, "State preset (ket0, ket1, plus, minus, plus_i, minus_i, singlet)");
  seq->add_option("--observables", opt.observables, "Two comma-separated observable presets");
  seq->add_option("--order", opt.order, "Measure ab or ba")->check(CLI::IsMember({"ab", "ba"}));
  seq->add_option("--input", opt.input, "JSON file with \"state\" and \"observables\" (matrices allowed)");

  auto* eprc = app.add_subcommand("epr", "Singlet correlations, decomposition, Bell and CHSH reports");
  add_common(eprc, opt);
  eprc->add_option("--angles", opt.angles, "2, 3 or 4 comma-separated angles in radians")->required();
  eprc->add_option("--problem", opt.problem_out, "With 4 angles: also write a feasibility problem file");

  auto* sim = app.add_subcommand("simulate", "Event-by-event EPR-Bohm run with coincidence matching");
  add_common(sim, opt);
  sim->add_option("--pairs", opt.sim.n_pairs, "Number of emitted pairs");
  sim->add_option("--theta-a", opt.sim.theta_a, "Analyzer angle on side 1 (radians)");
  sim->add_option("--theta-b", opt.sim.theta_b, "Analyzer angle on side 2 (radians)");
  sim->add_option("--window", opt.sim.window_delta, "Coincidence window in seconds (inf allowed)");
  sim->add_option("--jitter", opt.sim.jitter_sigma, "Click-time jitter sigma in seconds");
  sim->add_option("--efficiency", opt.sim.detector_efficiency, "Detector efficiency in (0, 1]");
  sim->add_option("--seed", opt.sim.seed, "RNG seed");
  sim->add_option("--tie-epsilon", opt.sim.tie_epsilon, "Clicks closer than this count as simultaneous");
  sim->add_option("--events", opt.events_path, "Write the event CSV here");
  sim->add_option("--replay", opt.replay_path, "Recompute stats from an event CSV instead of simulating");
  sim->add_option("--workers", opt.workers, "Sampling threads (output does not depend on this)");

  auto* feas = app.add_subcommand("feasibility", "Does one joint measure reproduce all pairwise tables?");
  add_common(feas, opt);
  feas->add_option("--input,input", opt.input, "Problem JSON file")->required();
  feas->add_option("--tol", opt.tol, "Feasibility tolerance on the phase-1 residual");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (*seq) return cmd_sequential(opt);
    if (*eprc) return cmd_epr(opt);
    if (*sim) return cmd_simulate(opt);
    if (*feas) return cmd_feasibility(opt);
  } catch (const std::exception& e) {
    std::cerr << "seqmeas: " << e.what() << '\n';
    return kExitBadInput;
  }
  return kExitBadInput;
}
