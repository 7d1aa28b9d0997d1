#include <doctest.h>

#include <cmath>
#include <sstream>

#include "seqmeas/error.hpp"
#include "seqmeas/io.hpp"

using namespace seqmeas;
using io::json;

TEST_CASE("problem_from_json with tables") {
  const auto j = json::parse(R"({
    "variables": ["a", "b"],
    "pairwise": [{"x": "a", "y": "b", "table": [[0.5, 0.0], [0.0, 0.5]]}]
  })");
  const auto p = io::problem_from_json(j);
  CHECK(p.variables.size() == 2);
  REQUIRE(p.pairwise.size() == 1);
  CHECK(p.pairwise[0].table[0][0] == 0.5);
  CHECK_FALSE(p.assumed_unbiased_marginals);
  CHECK(io::problem_from_json(io::problem_to_json(p)).pairwise[0].table == p.pairwise[0].table);
}

TEST_CASE("problem_from_json with correlations and marginals") {
  const auto j = json::parse(R"({
    "variables": ["a", "b"],
    "pairwise": [{"x": "a", "y": "b", "correlation": -0.5}],
    "marginals": {"a": [0.5, 0.5]}
  })");
  const auto p = io::problem_from_json(j);
  CHECK(p.assumed_unbiased_marginals);
  CHECK(p.pairwise[0].table[0][1] == 0.375);
  CHECK(p.singleton_marginals.at("a")[0] == 0.5);

  const auto r = kolmogorov::solve_feasibility(p);
  const auto out = io::result_to_json(r, p);
  CHECK(out["status"] == "feasible");
  CHECK(out["assumed_unbiased_marginals"] == true);
  CHECK(out["witness"].size() == 4);
}

TEST_CASE("problem_from_json rejects bad input") {
  const char* bad[] = {
      R"([])",
      R"({"pairwise": []})",
      R"({"variables": ["a"], "pairwise": [{"x": "a", "y": "b", "correlation": 0}]})",
      R"({"variables": ["a", "b"], "pairwise": [{"x": "a", "y": "b", "table": [[0.4, 0.0], [0.0, 0.5]]}]})",
      R"({"variables": ["a", "b"], "pairwise": [{"x": "a", "y": "b", "table": [0.5, 0.5]}]})",
      R"({"variables": ["a", "b"], "pairwise": [{"x": "a", "y": "b"}]})",
      R"({"variables": ["a", "b"], "pairwise": [{"x": "a", "y": "b", "correlation": "big"}]})",
      R"({"variables": ["a", "b"], "pairwise": [{"x": "a", "y": "b", "correlation": 2}]})",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(kolmogorov::solve_feasibility(io::problem_from_json(json::parse(text))),
                    MalformedProblemError);
  }
}

TEST_CASE("infeasible result JSON") {
  const auto p = io::problem_from_json(json::parse(R"({
    "variables": ["a", "b", "c"],
    "pairwise": [{"x": "a", "y": "b", "correlation": 1},
                 {"x": "b", "y": "c", "correlation": 1},
                 {"x": "a", "y": "c", "correlation": -1}]
  })"));
  const auto out = io::result_to_json(kolmogorov::solve_feasibility(p), p);
  CHECK(out["status"] == "infeasible");
  CHECK_FALSE(out.contains("witness"));
  CHECK(out["max_violation"].get<double>() > 0.0);
}

TEST_CASE("stats_to_json") {
  eventsim::CoincidenceStats empty;
  empty.n_pairs = 4;
  empty.n_unmatched = 4;
  const auto j = io::stats_to_json(empty);
  CHECK(j["status"] == "no_data");
  CHECK(j["e_hat"].is_null());
  CHECK(j["n_matched"] == 0);

  eventsim::SimConfig c;
  c.n_pairs = 100;
  c.window_delta = INFINITY;
  const auto stats = eventsim::match_coincidences(eventsim::run_experiment(c), c);
  const auto k = io::stats_to_json(stats);
  CHECK(k["status"] == "ok");
  CHECK(k["counts"]["+-"].get<std::uint64_t>() + k["counts"]["-+"].get<std::uint64_t>() == 100);
}

TEST_CASE("event CSV round trip keeps every statistic") {
  eventsim::SimConfig c;
  c.n_pairs = 3000;
  c.theta_a = 0.25;
  c.theta_b = 1.9;
  c.detector_efficiency = 0.8;
  c.seed = 31;
  const auto events = eventsim::run_experiment(c);

  std::stringstream csv;
  io::write_events_csv(csv, events, c);
  const auto back = io::read_events_csv(csv);
  REQUIRE(back.size() == events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    auto expected = events[i];
    // Click order is only recorded through the two times.
    if (!expected.t1 || !expected.t2) expected.branch = back[i].branch;
    CHECK(back[i] == expected);
  }
  for (double window : {0.0, 1e-6, 3e-6, double(INFINITY)}) {
    c.window_delta = window;
    CHECK(eventsim::match_coincidences(back, c) == eventsim::match_coincidences(events, c));
  }
}

TEST_CASE("read_events_csv errors") {
  std::istringstream wrong_header("a,b,c\n");
  CHECK_THROWS_AS(io::read_events_csv(wrong_header), std::runtime_error);
  std::istringstream bad_row(std::string(io::kEventCsvHeader) + "\n0,0,0,x,,1,\n");
  CHECK_THROWS_AS(io::read_events_csv(bad_row), std::runtime_error);
  std::istringstream bad_outcome(std::string(io::kEventCsvHeader) + "\n0,0,0,0.1,0.2,3,1\n");
  CHECK_THROWS_AS(io::read_events_csv(bad_outcome), std::runtime_error);
}

TEST_CASE("format helpers") {
  CHECK(io::format_time(1.5e-4) == "0.000150000");
  CHECK(std::stod(io::format_double(0.1)) == 0.1);
  CHECK(io::split_list(" a, b ,c") == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("parse_state") {
  CHECK(io::parse_state("ket0")[0] == hilbert::Complex(1.0));
  CHECK(io::parse_state("singlet").dim() == 4);
  CHECK(std::abs(io::parse_state("plus_i")[1] - hilbert::Complex(0.0, 1.0 / std::sqrt(2.0))) < 1e-15);
  CHECK(io::parse_state(json::parse("[[0.6, 0], [0, 0.8]]"))[1] == hilbert::Complex(0.0, 0.8));
  CHECK_THROWS(io::parse_state("nonsense"));
  CHECK_THROWS(io::parse_state(json::parse("[[1, 0], [1, 0]]")));
}

TEST_CASE("parse_observable") {
  const auto conv = epr::Convention::spin_half;
  CHECK(hilbert::max_abs_diff(io::parse_observable("pauli_z", conv).matrix, hilbert::pauli_z()) == 0.0);
  const auto leg = io::parse_observable("pauli_x@leg2", conv);
  CHECK(leg.matrix.rows() == 4);
  CHECK(hilbert::max_abs_diff(leg.matrix, hilbert::tensor_product(hilbert::ComplexMatrix::identity(2),
                                                                 hilbert::pauli_x())) == 0.0);
  const auto angled = io::parse_observable("leg1:1.5707963267948966", conv);
  CHECK(hilbert::max_abs_diff(angled.matrix, hilbert::tensor_product(hilbert::pauli_x(),
                                                                    hilbert::ComplexMatrix::identity(2))) < 1e-15);
  const auto m = io::parse_observable(json::parse("[[1, [0, 1]], [[0, -1], 2]]"), conv);
  CHECK(m.matrix(0, 1) == hilbert::Complex(0.0, 1.0));
  CHECK_THROWS_AS(io::parse_observable(json::parse("[[0, 1], [0, 0]]"), conv), NotHermitianError);
  CHECK_THROWS(io::parse_observable("leg3:0", conv));
}

TEST_CASE("matrix JSON round trip") {
  const auto y = hilbert::pauli_y();
  CHECK(hilbert::max_abs_diff(io::matrix_from_json(io::matrix_to_json(y)), y) == 0.0);
}
