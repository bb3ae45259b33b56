#include "chanalloc/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chanalloc/csv.hpp"
#include "chanalloc/error.hpp"

namespace chanalloc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw InvalidParameter("cannot write " + file.string());
  return out;
}

template <typename T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw InvalidParameter("config key '" + key + "' has the wrong type");
  }
}

std::string converged_field(const SchemeResult& r) {
  return r.trace.converged_at ? std::to_string(*r.trace.converged_at) : std::string{};
}

void write_cdf(const fs::path& file, const std::string& column, std::span<const double> values) {
  auto out = open_out(file);
  out << column << ",fraction\n";
  for (const auto& p : empirical_cdf(values)) out << csv::num(p.x) << ',' << csv::num(p.fraction) << '\n';
}

}  // namespace

ScenarioConfig config_from_json(const std::string& text, ScenarioConfig cfg) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidParameter(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidParameter("config must be a JSON object");

  for (const auto& [key, v] : doc.items()) {
    if (key == "seed") cfg.seed = get_as<std::uint64_t>(v, key);
    else if (key == "n_pairs") cfg.n_pairs = get_as<std::size_t>(v, key);
    else if (key == "area_side") cfg.area_side = get_as<double>(v, key);
    else if (key == "n_channels") cfg.n_channels = get_as<int>(v, key);
    else if (key == "scheme") cfg.scheme = parse_scheme(get_as<std::string>(v, key));
    else if (key == "beta") cfg.beta = get_as<double>(v, key);
    else if (key == "utility_scale") {
      if (v.is_string() && v.get<std::string>() == "auto") cfg.utility_scale.reset();
      else cfg.utility_scale = get_as<double>(v, key);
    }
    else if (key == "reference_sir_db") cfg.reference_sir_db = get_as<double>(v, key);
    else if (key == "learning_gated") cfg.learning_gated = get_as<bool>(v, key);
    else if (key == "scheduler") cfg.scheduler_mode = parse_scheduler_mode(get_as<std::string>(v, key));
    else if (key == "p_a") {
      if (v.is_null()) cfg.p_a.reset();
      else cfg.p_a = get_as<double>(v, key);
    }
    else if (key == "placement") cfg.placement = parse_placement(get_as<std::string>(v, key));
    else if (key == "alpha") cfg.propagation.alpha = get_as<double>(v, key);
    else if (key == "ref_dist") cfg.propagation.ref_dist = get_as<double>(v, key);
    else if (key == "eval_slots") cfg.eval_slots = get_as<std::size_t>(v, key);
    else if (key == "max_slots") cfg.max_slots = get_as<std::size_t>(v, key);
    else if (key == "stability_window") cfg.stability_window = get_as<std::size_t>(v, key);
    else throw InvalidParameter("unknown config key '" + key + "'");
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const fs::path& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), std::move(base));
}

std::string config_to_json(const ScenarioConfig& cfg) {
  json doc = {
      {"seed", cfg.seed},
      {"n_pairs", cfg.n_pairs},
      {"area_side", cfg.area_side},
      {"n_channels", cfg.n_channels},
      {"scheme", to_string(cfg.scheme)},
      {"beta", cfg.beta},
      {"reference_sir_db", cfg.reference_sir_db},
      {"learning_gated", cfg.learning_gated},
      {"scheduler", to_string(cfg.scheduler_mode)},
      {"placement", to_string(cfg.placement)},
      {"alpha", cfg.propagation.alpha},
      {"ref_dist", cfg.propagation.ref_dist},
      {"eval_slots", cfg.eval_slots},
      {"max_slots", cfg.max_slots},
      {"stability_window", cfg.stability_window},
  };
  doc["utility_scale"] = cfg.utility_scale ? json(*cfg.utility_scale) : json("auto");
  doc["p_a"] = cfg.p_a ? json(*cfg.p_a) : json(nullptr);
  return doc.dump(2) + "\n";
}

void write_network_files(const fs::path& dir, const Network& net) {
  fs::create_directories(dir);
  auto topo = open_out(dir / "topology.csv");
  write_topology_csv(topo, net);
  auto gains = open_out(dir / "gains.csv");
  write_gains_csv(gains, net);
}

void write_scheme_files(const fs::path& dir, const SchemeResult& r) {
  fs::create_directories(dir);
  const auto& tr = r.trace;

  if (!tr.profiles.empty()) {
    auto pot = open_out(dir / "potential.csv");
    pot << "slot,potential\n";
    for (std::size_t t = 0; t < tr.potential_series.size(); ++t) {
      pot << t << ',' << csv::num(tr.potential_series[t]) << '\n';
    }

    auto act = open_out(dir / "actions.csv");
    act << "slot";
    for (std::size_t i = 1; i <= tr.profiles.front().size(); ++i) act << ",s_" << i;
    act << '\n';
    for (std::size_t t = 0; t < tr.profiles.size(); ++t) {
      act << t << ',' << profile_to_csv(tr.profiles[t]) << '\n';
    }
  }

  if (!tr.weight_snapshots.empty()) {
    const auto& first = tr.weight_snapshots.front().weights;
    for (std::size_t i = 0; i < first.rows(); ++i) {
      auto w = open_out(dir / ("weights_u" + std::to_string(i + 1) + ".csv"));
      w << "slot";
      for (std::size_t k = 1; k <= first.cols(); ++k) w << ",w_" << k;
      w << '\n';
      for (const auto& snap : tr.weight_snapshots) {
        w << snap.slot;
        for (double x : snap.weights.row(i)) w << ',' << csv::num(x);
        w << '\n';
      }
    }
  }

  auto per_user = open_out(dir / "per_user.csv");
  per_user << "id,avg_sir_db,avg_throughput\n";
  for (std::size_t i = 0; i < r.per_user_avg_throughput.size(); ++i) {
    per_user << i + 1 << ',' << csv::num(r.per_user_avg_sir_db[i]) << ','
             << csv::num(r.per_user_avg_throughput[i]) << '\n';
  }

  write_summary_csv(dir / "summary.csv", std::span(&r, 1));
  write_cdf(dir / "cdf_sir.csv", "avg_sir_db", r.per_user_avg_sir_db);
  write_cdf(dir / "cdf_throughput.csv", "avg_throughput", r.per_user_avg_throughput);
}

void write_summary_csv(const fs::path& file, std::span<const SchemeResult> results) {
  auto out = open_out(file);
  out << "scheme,total,mean,variance,converged_at\n";
  for (const auto& r : results) {
    out << r.label << ',' << csv::num(r.total_throughput) << ',' << csv::num(r.mean_throughput)
        << ',' << csv::num(r.variance_throughput) << ',' << converged_field(r) << '\n';
  }
}

void write_run_outputs(const fs::path& dir, const ScenarioSetup& setup, const SchemeResult& result) {
  write_network_files(dir, setup.net);
  write_scheme_files(dir, result);
}

void write_comparison_outputs(const fs::path& dir, const Comparison& cmp) {
  write_network_files(dir, cmp.setup.net);
  std::vector<SchemeResult> rows{cmp.initial};
  for (const auto& r : cmp.results) {
    write_scheme_files(dir / r.label, r);
    rows.push_back(r);
  }
  write_summary_csv(dir / "summary.csv", rows);
}

}  // namespace chanalloc
