#include "elastinet/cli.hpp"

#include "elastinet/errors.hpp"
#include "elastinet/linear.hpp"
#include "elastinet/snapshot.hpp"
#include "elastinet/svg.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace elastinet {

namespace {

Flavor flavor_for(const NetworkState& net, const CliOptions& options) {
  return options.flavor.value_or(natural_flavor(net.topology()));
}

// Writes to the --out file when given, otherwise to the stream.
void emit(const std::string& text, const CliOptions& options, std::ostream& out) {
  if (options.out.empty()) {
    out << text;
  } else {
    write_text_file(options.out, text);
  }
}

std::string frame_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04zu.svg", index);
  return buf;
}

} // namespace

LoadedNetwork resolve_input(const std::string& input, const CliOptions& options) {
  LoadedNetwork loaded;
  if (is_scenario(input) && !std::filesystem::exists(input)) {
    ScenarioOptions so;
    if (options.grid) so.intervals = *options.grid;
    so.mu = options.mu;
    so.amplitude = options.amplitude;
    so.seed = options.seed;
    const Scenario s = make_scenario(input, so);
    loaded.net = s.network;
    loaded.params = s.params;
    return loaded;
  }
  loaded = load_snapshot(input);
  if (options.mu) loaded.params.mu = *options.mu;
  return loaded;
}

int cmd_scenario(const std::string& input, const CliOptions& options, std::ostream& out) {
  const LoadedNetwork in = resolve_input(input, options);
  emit(snapshot_json(in.net, in.params), options, out);
  return kExitPass;
}

int cmd_check(const std::string& input, const CliOptions& options, std::ostream& out) {
  const LoadedNetwork in = resolve_input(input, options);
  const Flavor flavor = flavor_for(in.net, options);
  std::ostringstream text;
  text << "topology " << to_string(in.net.topology()) << ", flavor " << to_string(flavor) << ", mu "
       << format_real(in.params.mu) << ", N " << in.net.intervals() << "\n";
  bool passed = true;
  try {
    const AdmissibilityReport geo = geometric_admissibility(in.net, in.params, flavor);
    text << "geometric admissibility\n" << geo.to_text();
    passed = passed && geo.passed();
  } catch (const TopologyError& e) {
    text << "geometric admissibility\n  FAIL  " << e.what() << "\nFAIL\n";
    passed = false;
  }
  const AdmissibilityReport par = parametric_admissibility(in.net, in.params, flavor);
  text << "parametric admissibility\n" << par.to_text();
  passed = passed && par.passed();
  text << (passed ? "verdict: pass\n" : "verdict: fail\n");
  emit(text.str(), options, out);
  return passed ? kExitPass : kExitFail;
}

int cmd_ls(const std::string& input, const CliOptions& options, std::ostream& out) {
  const LoadedNetwork in = resolve_input(input, options);
  const LSReport report = ls_verify(in.net, flavor_for(in.net, options));
  emit(report.to_json(), options, out);
  return report.passed ? kExitPass : kExitFail;
}

int cmd_reparam(const std::string& input, const CliOptions& options, std::ostream& out) {
  const LoadedNetwork in = resolve_input(input, options);
  const ReparamMap map = build_reparametrization(in.net, in.params);
  emit(snapshot_json(apply_reparametrization(in.net, map), in.params), options, out);
  return kExitPass;
}

int cmd_simulate(const std::string& input, const CliOptions& options, std::ostream& out) {
  if (options.out.empty()) throw IoError("simulate: --out DIR is required");
  const LoadedNetwork in = resolve_input(input, options);
  const Flavor flavor = flavor_for(in.net, options);
  const FlowTrace trace = run(in.net, options.scheme, in.params, flavor);

  const std::filesystem::path dir(options.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_text_file(dir / "trace.csv", trace.to_csv());
  write_text_file(dir / "trace.json", trace.to_json(in.params));
  ViewBox box = view_box(trace.snapshots.front().net);
  for (const auto& s : trace.snapshots) box = merge(box, view_box(s.net));
  for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
    const auto& s = trace.snapshots[k];
    write_text_file(dir / frame_name(k), render_svg(s.net, box, {}, "t = " + format_real(s.time)));
  }
  const auto& last = trace.records.back();
  out << "termination: " << trace.termination << "\nsteps: " << trace.records.size() - 1
      << "\nrejected: " << trace.rejected_steps << "\nt: " << format_real(last.time)
      << "\nenergy: " << format_real(last.energy) << "\n";
  return trace.termination == "t_final" ? kExitPass : kExitFail;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elastic flow of planar three-curve networks"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; command-line flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);

  CliOptions options;
  std::string flavor, input;
  double mu = 0.0, amplitude = 0.0;
  std::size_t grid = 0;
  auto* o_flavor = app.add_option("--flavor", flavor, "c0 or c1 (default: natural flavor of the topology)");
  auto* o_mu = app.add_option("--mu", mu, "length weight mu");
  auto* o_grid = app.add_option("--grid", grid, "grid intervals N for built-in scenarios");
  auto* o_amp = app.add_option("--amplitude", amplitude, "perturbation amplitude for built-in scenarios");
  app.add_option("--seed", options.seed, "seed for randomized scenarios");
  app.add_option("--out", options.out, "output file (output directory for simulate)");
  app.add_option("--t-final", options.scheme.t_final, "final time");
  app.add_option("--dt", options.scheme.dt_init, "initial (and largest) time step");
  app.add_option("--dt-min", options.scheme.dt_min, "smallest time step before giving up");
  app.add_option("--snapshot-every", options.scheme.snapshot_every, "accepted steps between SVG/JSON frames");
  app.add_option("--boundary-corrections", options.scheme.boundary_corrections, "boundary data re-solves per step");
  app.add_option("--regularity-floor", options.scheme.regularity_floor, "stop when min |gamma_x| drops below");
  app.add_option("--energy-tolerance", options.scheme.energy_tolerance, "relative energy increase allowed per unit time");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"scenario", "write a built-in scenario (or re-emit a snapshot)"},
      {"check", "geometric and parametric admissibility report"},
      {"ls", "Lopatinskii-Shapiro verification as JSON"},
      {"reparam", "reparametrize geometrically admissible data"},
      {"simulate", "run the flow and write trace.csv, trace.json and SVG frames"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("input", input, "built-in scenario name or snapshot file")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (o_flavor->count() > 0) options.flavor = parse_flavor(flavor);
    if (o_mu->count() > 0) options.mu = mu;
    if (o_grid->count() > 0) options.grid = grid;
    if (o_amp->count() > 0) options.amplitude = amplitude;
    options.scheme.validate();

    const std::string command = app.get_subcommands().front()->get_name();
    if (command == "scenario") return cmd_scenario(input, options, out);
    if (command == "check") return cmd_check(input, options, out);
    if (command == "ls") return cmd_ls(input, options, out);
    if (command == "reparam") return cmd_reparam(input, options, out);
    return cmd_simulate(input, options, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const GridError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const Error& e) {
    err << "failed: " << e.what() << "\n";
    return kExitFail;
  }
}

} // namespace elastinet
