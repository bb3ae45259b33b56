#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chanalloc/coding.hpp"
#include "chanalloc/dynamics.hpp"
#include "chanalloc/error.hpp"
#include "chanalloc/experiment.hpp"
#include "chanalloc/scenario_io.hpp"
#include "chanalloc/signaling.hpp"

namespace py = pybind11;
using namespace chanalloc;

namespace {

using Rows = std::vector<std::vector<double>>;

Rows to_rows(const Matrix& m) {
  Rows out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r].assign(m.row(r).begin(), m.row(r).end());
  return out;
}

Matrix from_rows(const Rows& rows) {
  const std::size_t n = rows.size();
  const std::size_t c = n ? rows[0].size() : 0;
  Matrix m(n, c, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != c) throw InvalidParameter("ragged matrix");
    for (std::size_t k = 0; k < c; ++k) m(r, k) = rows[r][k];
  }
  return m;
}

StrategyProfile profile(const std::vector<int>& channels) { return StrategyProfile(channels); }

UtilityKind parse_utility(const std::string& s) {
  if (s == "selfish" || s == "u1") return UtilityKind::Selfish;
  if (s == "cooperative" || s == "u2") return UtilityKind::Cooperative;
  throw InvalidParameter("utility must be 'selfish' or 'cooperative'");
}

py::dict result_dict(const SchemeResult& r) {
  py::dict d;
  d["label"] = r.label;
  d["per_user_avg_sir_db"] = r.per_user_avg_sir_db;
  d["per_user_avg_throughput"] = r.per_user_avg_throughput;
  d["total_throughput"] = r.total_throughput;
  d["mean_throughput"] = r.mean_throughput;
  d["variance_throughput"] = r.variance_throughput;
  d["converged"] = r.converged;
  d["outcome"] = to_string(r.trace.outcome);
  d["converged_at"] = r.trace.converged_at ? py::cast(*r.trace.converged_at) : py::none();
  d["potential_series"] = r.trace.potential_series;
  d["final_profile"] = r.trace.final_profile.channels;
  d["final_weights"] = to_rows(r.trace.final_weights);
  return d;
}

py::dict trace_dict(const RunTrace& t) {
  py::dict d;
  std::vector<std::vector<int>> profiles;
  for (const auto& p : t.profiles) profiles.push_back(p.channels);
  d["profiles"] = profiles;
  d["potential_series"] = t.potential_series;
  d["converged_at"] = t.converged_at ? py::cast(*t.converged_at) : py::none();
  d["outcome"] = to_string(t.outcome);
  d["final_profile"] = t.final_profile.channels;
  d["final_weights"] = to_rows(t.final_weights);
  return d;
}

ScenarioConfig config_from_kwargs(const py::kwargs& kw) {
  // reuse the JSON reader so key names and checks match the CLI
  auto json = py::module_::import("json");
  return config_from_json(json.attr("dumps")(kw).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_chanalloc, m) {
  m.doc() = "Distributed channel allocation for cognitive radio networks";

  auto base = py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
  py::register_exception<TooLarge>(m, "TooLarge", base);
  py::register_exception<UnsupportedConfiguration>(m, "UnsupportedConfiguration", PyExc_RuntimeError);
  py::register_exception<InvalidState>(m, "InvalidState", PyExc_RuntimeError);

  py::class_<Network>(m, "Network")
      .def_property_readonly("size", &Network::size)
      .def_property_readonly("gains", [](const Network& n) { return to_rows(n.gains); })
      .def_readonly("powers", &Network::powers)
      .def_readonly("area_side", &Network::area_side)
      .def_property_readonly("positions", [](const Network& n) {
        std::vector<std::tuple<double, double, double, double>> out;
        for (const auto& p : n.pairs) out.emplace_back(p.tx.x, p.tx.y, p.rx.x, p.rx.y);
        return out;
      })
      .def("__len__", &Network::size)
      .def("__eq__", [](const Network& a, const Network& b) { return a == b; });

  m.def("generate_network",
        [](std::uint64_t seed, std::size_t n_pairs, double area_side, const std::string& placement,
           double alpha, double ref_dist) {
          return generate_network(seed, n_pairs, area_side, parse_placement(placement),
                                  Propagation{alpha, ref_dist});
        },
        py::arg("seed"), py::arg("n_pairs") = 30, py::arg("area_side") = 200.0,
        py::arg("placement") = "disk(50)", py::arg("alpha") = 4.0, py::arg("ref_dist") = 1.0);
  m.def("network_from_gains",
        [](const Rows& gains, std::vector<double> powers) {
          if (powers.empty()) powers.assign(gains.size(), 1.0);
          return network_from_gains(from_rows(gains), powers);
        },
        py::arg("gains"), py::arg("powers") = std::vector<double>{});

  m.def("sir", [](std::size_t i, const std::vector<int>& s, const Network& n) { return sir(i, profile(s), n); },
        py::arg("i"), py::arg("profile"), py::arg("net"));
  m.def("utility",
        [](std::size_t i, const std::vector<int>& s, const Network& n, const std::string& kind) {
          return utility(parse_utility(kind), i, profile(s), n);
        },
        py::arg("i"), py::arg("profile"), py::arg("net"), py::arg("kind") = "cooperative");
  m.def("potential", [](const std::vector<int>& s, const Network& n) { return potential(profile(s), n); },
        py::arg("profile"), py::arg("net"));
  m.def("generalized_potential",
        [](const std::vector<int>& s, const Network& n, double a) {
          return generalized_potential(profile(s), n, a);
        },
        py::arg("profile"), py::arg("net"), py::arg("a"));
  m.def("best_response_set",
        [](std::size_t i, const std::vector<int>& s, const Network& n, int k, const std::string& kind) {
          return best_response_set(i, profile(s), n, {k, parse_utility(kind)});
        },
        py::arg("i"), py::arg("profile"), py::arg("net"), py::arg("n_channels"),
        py::arg("kind") = "cooperative");
  m.def("is_pure_nash",
        [](const std::vector<int>& s, const Network& n, int k, const std::string& kind) {
          return is_pure_nash(profile(s), n, {k, parse_utility(kind)});
        },
        py::arg("profile"), py::arg("net"), py::arg("n_channels"), py::arg("kind") = "cooperative");
  m.def("enumerate_pure_nash",
        [](const Network& n, int k, const std::string& kind, std::uint64_t cap) {
          std::vector<std::vector<int>> out;
          for (const auto& p : enumerate_pure_nash(n, {k, parse_utility(kind)}, cap)) out.push_back(p.channels);
          return out;
        },
        py::arg("net"), py::arg("n_channels"), py::arg("kind") = "cooperative",
        py::arg("cap") = 1'000'000);

  m.def("rate_table", [] {
    std::vector<std::tuple<int, double, double>> rows;
    for (const auto& r : rate_table()) rows.emplace_back(r.m, r.rate, r.required_sir_db);
    return rows;
  });
  m.def("normalized_throughput", &normalized_throughput, py::arg("sir_db"));
  m.def("required_sir_db", &required_sir_db, py::arg("m"));

  m.def("weights_from_cum_utils",
        [](const std::vector<double>& cum, double beta) { return weights_from_cum_utils(cum, beta); },
        py::arg("cum_utils"), py::arg("beta") = 0.1);
  m.def("run_potential_game",
        [](const Network& n, int k, const std::vector<int>& initial, std::uint64_t seed,
           const std::string& scheduler, std::size_t max_slots, std::size_t window) {
          Rng rng(seed);
          const Scheduler sched = parse_scheduler_mode(scheduler) == SchedulerMode::StrictSequential
                                      ? Scheduler::strict_sequential()
                                      : Scheduler::bernoulli(n.size());
          return trace_dict(run_potential_game(n, {k, UtilityKind::Cooperative}, sched, profile(initial),
                                               rng, {max_slots, window}));
        },
        py::arg("net"), py::arg("n_channels"), py::arg("initial"), py::arg("seed"),
        py::arg("scheduler") = "bernoulli", py::arg("max_slots") = 5000, py::arg("stability_window") = 50);
  m.def("run_learning",
        [](const Network& n, int k, const std::vector<int>& initial, std::uint64_t seed,
           const std::string& kind, double beta, double utility_scale, std::size_t max_slots,
           bool stop_at_vertex) {
          Rng rng(seed);
          LearningConfig lc;
          lc.beta = beta;
          lc.utility_scale = utility_scale;
          lc.max_slots = max_slots;
          lc.stop_at_vertex = stop_at_vertex;
          return trace_dict(run_learning(n, {k, parse_utility(kind)}, rng, lc, profile(initial)));
        },
        py::arg("net"), py::arg("n_channels"), py::arg("initial"), py::arg("seed"),
        py::arg("kind") = "cooperative", py::arg("beta") = 0.1, py::arg("utility_scale") = 1.0,
        py::arg("max_slots") = 5000, py::arg("stop_at_vertex") = true);
  m.def("reference_utility_scale", &reference_utility_scale, py::arg("net"),
        py::arg("reference_sir_db") = 10.0);

  m.def("protocol_utilities",
        [](const Network& n, int k, const std::vector<int>& s) {
          SignalingWorld w(n, k);
          for (std::size_t i = 0; i < n.size(); ++i) w.announce(i, s.at(i));
          std::vector<std::vector<double>> out;
          for (std::size_t i = 0; i < n.size(); ++i) out.push_back(w.protocol_utilities(i));
          return out;
        },
        py::arg("net"), py::arg("n_channels"), py::arg("profile"),
        "-(I_d + I_o) per pair and channel after every pair announces its channel.");

  m.def("run_scenario", [](const py::kwargs& kw) { return result_dict(run_scenario(config_from_kwargs(kw))); },
        "Keyword arguments use the JSON config keys.");
  m.def("compare_schemes",
        [](const std::vector<std::string>& schemes, const py::kwargs& kw) {
          std::vector<Scheme> list;
          for (const auto& s : schemes) list.push_back(parse_scheme(s));
          const auto cmp = compare_schemes(config_from_kwargs(kw), list);
          py::dict d;
          d["initial_profile"] = cmp.setup.initial.channels;
          d["initial"] = result_dict(cmp.initial);
          py::list results;
          for (const auto& r : cmp.results) results.append(result_dict(r));
          d["results"] = results;
          return d;
        },
        py::arg("schemes") = std::vector<std::string>{"potential", "learn_u1", "learn_u2", "random"});

  m.def("empirical_cdf", [](const std::vector<double>& v) {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : empirical_cdf(v)) out.emplace_back(p.x, p.fraction);
    return out;
  });
  m.def("summary_stats", [](const std::vector<double>& v) {
    const auto s = summary_stats(v);
    return std::make_tuple(s.mean, s.variance, s.total);
  });
}
