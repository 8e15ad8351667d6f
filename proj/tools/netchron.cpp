// netchron: command-line front end for edge formation order reconstruction.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "netchron/datasets.hpp"
#include "netchron/dynamics.hpp"
#include "netchron/eval.hpp"
#include "netchron/io.hpp"
#include "netchron/ordering.hpp"
#include "netchron/pipeline.hpp"

namespace {

using namespace netchron;
using io::json;
using tool::RunManifest;

std::string sibling(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  p.replace_extension();
  return p.string() + suffix;
}

/// Values of every option of `sub` after parsing (given or default).
json config_snapshot(const CLI::App& sub) {
  json j = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      j[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

/// Flat JSON config: each key becomes `--key=value` unless the flag is
/// already on the command line, so explicit flags win.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path || args.size() < 2) return args;
  json cfg;
  try {
    cfg = json::parse(io::read_file(*path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, "config " + *path + ": " + e.what());
  }
  if (!cfg.is_object()) throw Error(ErrorKind::ParseError, "config must be a flat JSON object");
  auto given = [&](const std::string& flag) {
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  std::vector<std::string> extra;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_array()) {
      for (const auto& v : value) {
        if (!text.empty()) text += ",";
        text += v.is_string() ? v.get<std::string>() : v.dump();
      }
    } else {
      text = value.dump();
    }
    extra.push_back(flag + "=" + text);
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

void write_steady_state(RunManifest& m, const std::string& out, const SteadyState& st,
                        const DynamicsSpec& spec) {
  m.write_output("steady_state", out, io::steady_state_csv(st));
  m.write_output("steady_state_metadata", sibling(out, ".json"),
                 io::dump(io::steady_state_metadata(st, spec)));
}

std::vector<double> load_steady_state(const std::string& path, const TemporalNetwork& net) {
  return io::parse_steady_state_csv(io::read_file(path), net.node_count());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netchron: reconstruct the order in which a network's edges formed"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::string config_path;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Flat JSON file of option values; flags override it");
  };

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic temporal network");
  std::string synth_kind = "pa", synth_out, synth_stats;
  std::size_t synth_n = 200, synth_m = 2;
  std::uint64_t synth_seed = 0;
  synth->add_option("--kind", synth_kind)->check(CLI::IsMember({"pa", "random-growth", "er-shuffled"}));
  synth->add_option("--n", synth_n, "Node count");
  synth->add_option("--m", synth_m, "Edges per arriving node");
  synth->add_option("--seed", synth_seed);
  synth->add_option("--out", synth_out)->required();
  synth->add_option("--stats", synth_stats, "Also write dataset statistics JSON here");
  add_config(synth);

  // stats
  auto* stats = app.add_subcommand("stats", "Dataset statistics of an edge list");
  std::string stats_graph, stats_out;
  stats->add_option("graph", stats_graph)->required();
  stats->add_option("--out", stats_out)->required();
  add_config(stats);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run node dynamics to steady state");
  std::string sim_graph, sim_out, sim_dyn = "sis";
  std::uint64_t sim_seed = 0;
  DynamicsSpec sim_defaults;
  double sim_beta = sim_defaults.beta, sim_delta = sim_defaults.delta, sim_hill = sim_defaults.hill_n;
  double sim_tol = sim_defaults.tol;
  std::size_t sim_steps = sim_defaults.max_steps;
  sim->add_option("graph", sim_graph)->required();
  sim->add_option("--dynamics", sim_dyn)->check(CLI::IsMember({"sis", "gene", "opinion"}));
  sim->add_option("--seed", sim_seed);
  sim->add_option("--beta", sim_beta, "SIS infection rate");
  sim->add_option("--delta", sim_delta, "SIS recovery rate");
  sim->add_option("--hill-n", sim_hill, "Gene Hill coefficient");
  sim->add_option("--tol", sim_tol);
  sim->add_option("--max-steps", sim_steps);
  sim->add_option("--out", sim_out, "Steady-state CSV; metadata goes next to it as .json")->required();
  add_config(sim);

  // train
  auto* tr = app.add_subcommand("train", "Train the edge scorer");
  std::string tr_graph, tr_state, tr_out, tr_log, tr_features, tr_mode = "both", tr_act = "tanh",
                                                                tr_agg = "mean";
  TrainConfig tc;
  tr->add_option("graph", tr_graph)->required();
  tr->add_option("steady-state", tr_state)->required();
  tr->add_option("--mode", tr_mode)->check(CLI::IsMember({"both", "struct", "state"}));
  tr->add_option("--label-fraction", tc.label_fraction);
  tr->add_option("--seed", tc.seed);
  tr->add_option("--epochs", tc.epochs);
  tr->add_option("--batch-size", tc.batch_size);
  tr->add_option("--pair-budget", tc.pair_budget);
  tr->add_option("--lr", tc.learning_rate);
  tr->add_option("--l2", tc.l2_coeff, "Regularization coefficient on scorer weights");
  tr->add_option("--hidden", tc.hidden, "Scorer hidden width");
  tr->add_option("--prop-dims", tc.propagation_dims, "Propagation widths, first must be 4")
      ->delimiter(',')
      ->allow_extra_args(false);
  tr->add_option("--activation", tr_act)->check(CLI::IsMember({"tanh", "relu"}));
  tr->add_option("--aggregation", tr_agg)->check(CLI::IsMember({"mean", "symmetric"}));
  tr->add_option("--validation-fraction", tc.validation_fraction);
  tr->add_option("--out", tr_out, "Model checkpoint JSON")->required();
  tr->add_option("--log", tr_log, "Training log JSON (default: <out stem>.log.json)");
  tr->add_option("--features-out", tr_features, "Also write normalized features CSV and stats JSON");
  add_config(tr);

  // infer
  auto* inf = app.add_subcommand("infer", "Score all edges and emit the reconstructed order");
  std::string inf_graph, inf_state, inf_model, inf_out;
  inf->add_option("graph", inf_graph)->required();
  inf->add_option("steady-state", inf_state)->required();
  inf->add_option("model", inf_model)->required();
  inf->add_option("--out", inf_out)->required();
  add_config(inf);

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Compare an ordering with ground-truth times");
  std::string ev_order, ev_graph, ev_out, ev_log, ev_state;
  EvalOptions eo;
  ev->add_option("ordering", ev_order)->required();
  ev->add_option("graph", ev_graph)->required();
  ev->add_option("--out", ev_out, "Report JSON; plot CSVs go next to it")->required();
  ev->add_option("--train-log", ev_log, "Restrict pairwise accuracy to edges not labeled in training");
  ev->add_option("--steady-state", ev_state, "Include steady-state columns in feature correlations");
  ev->add_option("--bins", eo.bins);
  ev->add_option("--samples", eo.samples, "Trajectory sample points");
  ev->add_option("--top-k", eo.top_k, "Hubs on the radar");
  add_config(ev);

  // theory-check
  auto* th = app.add_subcommand("theory-check", "Monte Carlo check of the accuracy/error relation");
  std::vector<double> th_p = {0.7, 0.8, 0.9};
  std::vector<std::size_t> th_m = {100, 400};
  std::size_t th_trials = 500;
  std::uint64_t th_seed = 0;
  std::string th_out;
  th->add_option("--p-grid", th_p)->delimiter(',')->allow_extra_args(false);
  th->add_option("--m-grid", th_m)->delimiter(',')->allow_extra_args(false);
  th->add_option("--trials", th_trials);
  th->add_option("--seed", th_seed);
  th->add_option("--out", th_out)->required();
  add_config(th);

  // pathdep
  auto* pd = app.add_subcommand("pathdep", "Show that edge order changes the final state");
  std::size_t pd_n = 6;
  std::uint64_t pd_seed = 0;
  std::string pd_dyn = "sis", pd_out;
  double pd_duration = 1.0;
  bool pd_identical = false;
  pd->add_option("--n", pd_n)->check(CLI::Range(std::size_t{4}, std::size_t{100000}));
  pd->add_option("--seed", pd_seed);
  pd->add_option("--dynamics", pd_dyn)->check(CLI::IsMember({"sis", "gene", "opinion"}));
  pd->add_option("--duration", pd_duration, "Time spent on each stage");
  pd->add_flag("--identical", pd_identical, "Use the same edge order for both paths");
  pd->add_option("--out", pd_out)->required();
  add_config(pd);

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = merge_config(std::move(args));
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*synth) {
      SynthSpec spec;
      spec.kind = *parse_synth_kind(synth_kind);
      spec.nodes = synth_n;
      spec.edges_per_node = synth_m;
      spec.seed = synth_seed;
      RunManifest m("synth", synth_seed, config_snapshot(*synth));
      const auto net = generate_synthetic(spec);
      m.write_output("graph", synth_out, format_edge_list(net));
      if (!synth_stats.empty()) {
        m.write_output("dataset_stats", synth_stats, io::dump(io::dataset_stats_json(dataset_stats(net))));
      }
      m.write(synth_out);
    } else if (*stats) {
      RunManifest m("stats", 0, config_snapshot(*stats));
      m.add_input("graph", stats_graph);
      const auto net = load_edge_list(stats_graph);
      m.write_output("dataset_stats", stats_out, io::dump(io::dataset_stats_json(dataset_stats(net))));
      m.write(stats_out);
    } else if (*sim) {
      RunManifest m("simulate", sim_seed, config_snapshot(*sim));
      m.add_input("graph", sim_graph);
      const auto net = load_edge_list(sim_graph);
      const DynamicsKind kind = *parse_dynamics_kind(sim_dyn);
      DynamicsSpec spec = sample_dynamics_params(kind, net.node_count(), sim_seed);
      spec.beta = sim_beta;
      spec.delta = sim_delta;
      spec.hill_n = sim_hill;
      spec.tol = sim_tol;
      spec.max_steps = sim_steps;
      const auto st = simulate(net, spec);
      write_steady_state(m, sim_out, st, spec);
      m.write(sim_out);
      if (!st.converged) {
        std::cerr << "warning: " << sim_dyn << " did not converge in " << st.steps
                  << " steps (residual " << st.residual << ")\n";
      }
    } else if (*tr) {
      tc.mode = *parse_feature_mode(tr_mode);
      tc.activation = *parse_activation(tr_act);
      tc.aggregation = *parse_aggregation(tr_agg);
      const TrainConfig effective = config_for_mode(tc, tc.mode);
      RunManifest m("train", tc.seed, config_snapshot(*tr));
      m.add_input("graph", tr_graph);
      m.add_input("steady_state", tr_state);
      const auto net = load_edge_list(tr_graph);
      const auto state = load_steady_state(tr_state, net);
      const EdgeInputs in = prepare_inputs(net, state, effective.mode);
      const auto result = train(net, in, effective);
      m.write_output("model", tr_out, io::dump(io::model_json(result.model, effective, result.best_epoch)));
      const std::string log_path = tr_log.empty() ? sibling(tr_out, ".log.json") : tr_log;
      m.write_output("training_log", log_path, io::dump(io::training_log_json(result, net, effective)));
      if (!tr_features.empty()) {
        m.write_output("features", tr_features, io::feature_csv(in.base, net));
        m.write_output("feature_stats", sibling(tr_features, ".stats.json"),
                       io::dump(io::normalization_stats(in.base)));
      }
      m.write(tr_out);
    } else if (*inf) {
      RunManifest m("infer", 0, config_snapshot(*inf));
      m.add_input("graph", inf_graph);
      m.add_input("steady_state", inf_state);
      m.add_input("model", inf_model);
      const auto net = load_edge_list(inf_graph);
      const auto state = load_steady_state(inf_state, net);
      json mj;
      try {
        mj = json::parse(io::read_file(inf_model));
      } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, "model " + inf_model + ": " + e.what());
      }
      const auto model = io::model_from_json(mj);
      const auto ordering = infer_ordering(net, state, model);
      m.write_output("ordering", inf_out, io::ordering_csv(net, ordering));
      m.write(inf_out);
    } else if (*ev) {
      RunManifest m("evaluate", 0, config_snapshot(*ev));
      m.add_input("ordering", ev_order);
      m.add_input("graph", ev_graph);
      const auto net = load_edge_list(ev_graph);
      const auto ordering = io::parse_ordering_csv(io::read_file(ev_order), net);
      std::optional<double> label_fraction;
      if (!ev_log.empty()) {
        m.add_input("training_log", ev_log);
        const auto log = json::parse(io::read_file(ev_log));
        const auto labeled = io::labeled_mask_from_log(log, net);
        eo.accuracy_edges.assign(net.edge_count(), false);
        for (EdgeId e = 0; e < net.edge_count(); ++e) eo.accuracy_edges[e] = !labeled[e];
        label_fraction = log.value("label_fraction", 0.0);
      }
      std::vector<double> state(net.node_count(), 0.0);
      if (!ev_state.empty()) {
        m.add_input("steady_state", ev_state);
        state = load_steady_state(ev_state, net);
      }
      const auto tables = compute_feature_tables(net, state);
      const FeatureMatrix features = ev_state.empty() ? tables.structural : raw_edge_features(tables);
      const auto report = evaluate(net, ordering, &features, eo);
      json rj = io::report_json(report);
      rj["accuracy_scope"] = ev_log.empty() ? "all timed edges" : "edges not labeled in training";
      if (label_fraction) rj["label_fraction"] = *label_fraction;
      m.write_output("report", ev_out, io::dump(rj));
      m.write_output("bin_trend", sibling(ev_out, ".bins.csv"), io::bin_trend_csv(report.bin_trend));
      m.write_output("trajectories", sibling(ev_out, ".trajectories.csv"), io::trajectories_csv(report));
      m.write_output("hub_radar", sibling(ev_out, ".radar.csv"), io::radar_csv(report.hub_radar));
      m.write(ev_out);
    } else if (*th) {
      RunManifest m("theory-check", th_seed, config_snapshot(*th));
      json rows = json::array();
      std::string csv = "p,M,theory,empirical,ratio\n";
      for (double p : th_p) {
        for (std::size_t mm : th_m) {
          const double theory = theoretical_error(p, mm).expected_error;
          const double mc = monte_carlo_error(p, mm, th_trials, derive_seed(th_seed, mm));
          const std::optional<double> ratio =
              theory > 0.0 ? std::optional<double>(mc / theory) : std::nullopt;
          rows.push_back({{"p", p}, {"M", mm}, {"theory", theory}, {"empirical", mc},
                          {"ratio", io::optional_json(ratio)}});
          csv += format_double(p) + "," + std::to_string(mm) + "," + format_double(theory) + "," +
                 format_double(mc) + "," + (ratio ? format_double(*ratio) : std::string("")) + "\n";
        }
      }
      m.write_output("theory_report", th_out, io::dump({{"trials", th_trials}, {"rows", rows}}));
      m.write_output("theory_table", sibling(th_out, ".csv"), csv);
      m.write(th_out);
    } else if (*pd) {
      RunManifest m("pathdep", pd_seed, config_snapshot(*pd));
      const DynamicsKind kind = *parse_dynamics_kind(pd_dyn);
      DynamicsSpec spec = sample_dynamics_params(kind, pd_n, pd_seed);
      const auto r = path_dependence_demo(pd_n, spec, pd_identical, pd_duration);
      json j;
      j["nodes"] = r.nodes;
      j["dynamics"] = pd_dyn;
      j["stage_duration"] = pd_duration;
      j["order_a"] = r.order_a;
      j["order_b"] = r.order_b;
      j["final_distance"] = r.final_distance;
      j["trajectory_a"] = r.trajectory_a;
      j["trajectory_b"] = r.trajectory_b;
      std::string csv = "stage,node,x_a,x_b\n";
      for (std::size_t s = 0; s < r.trajectory_a.size(); ++s) {
        for (std::size_t i = 0; i < r.nodes; ++i) {
          csv += std::to_string(s) + "," + std::to_string(i) + "," + format_double(r.trajectory_a[s][i]) +
                 "," + format_double(r.trajectory_b[s][i]) + "\n";
        }
      }
      m.write_output("pathdep_report", pd_out, io::dump(j));
      m.write_output("pathdep_trajectories", sibling(pd_out, ".csv"), csv);
      m.write(pd_out);
      std::cout << "final distance " << format_double(r.final_distance) << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return e.exit_code();
  } catch (const io::json::exception& e) {
    std::cerr << "error (ParseError): " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
