#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hypflow/config.hpp"
#include "hypflow/field.hpp"

using nlohmann::json;
namespace hf = hypflow;

namespace {

// Flags override config-file values; only flags the user actually passed are
// merged into the JSON before parsing.
struct FlagSet {
  CLI::App* cmd;
  json values;

  void add_double(const std::string& name, const std::string& key, const std::string& desc) {
    auto holder = std::make_shared<double>();
    cmd->add_option_function<double>(
        name, [this, key, holder](double v) { values[key] = v; }, desc);
  }
  void add_int(const std::string& name, const std::string& key, const std::string& desc) {
    cmd->add_option_function<int>(
        name, [this, key](int v) { values[key] = v; }, desc);
  }
  void add_uint64(const std::string& name, const std::string& key, const std::string& desc) {
    cmd->add_option_function<std::uint64_t>(
        name, [this, key](std::uint64_t v) { values[key] = v; }, desc);
  }
  void add_string(const std::string& name, const std::string& key, const std::string& desc) {
    cmd->add_option_function<std::string>(
        name, [this, key](const std::string& v) { values[key] = v; }, desc);
  }
  void add_bool(const std::string& name, const std::string& key, const std::string& desc) {
    cmd->add_flag_function(
        name, [this, key](std::int64_t count) { values[key] = count > 0; }, desc);
  }
};

json merge(const json& base, const json& overrides) {
  json out = base.is_object() ? base : json::object();
  for (auto it = overrides.begin(); it != overrides.end(); ++it) out[it.key()] = *it;
  return out;
}

void add_run_flags(FlagSet& f) {
  f.add_int("--dim", "dim", "spatial dimension (2 or 3)");
  f.add_int("--points", "points", "grid points per axis");
  f.add_double("--box", "box", "torus side length");
  f.add_double("--d", "d", "dissipative coefficient");
  f.add_double("--cfl", "cfl", "CFL factor in (0,1]");
  f.add_double("--t-end", "t_end", "final time");
  f.add_int("--order", "difference_order", "difference order (2 or 4)");
  f.add_string("--rhs", "rhs_variant", "full | gauge_fixed");
  f.add_string("--experiment", "experiment", "generic|homothetic|stability|convergence");
  f.add_int("--cadence", "cadence", "diagnostics cadence in steps");
  f.add_int("--snapshot-cadence", "snapshot_cadence", "snapshot cadence in steps (0=off)");
  f.add_string("--out", "out_dir", "output directory");
  f.add_uint64("--seed", "seed", "random seed");
  f.add_int("--threads", "threads", "worker threads (0 = default)");
  f.add_double("--dt", "dt_fixed", "fixed time step (0 = derive from CFL)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypflow: dissipative hyperbolic geometric flow laboratory"};
  app.require_subcommand(1);

  std::string config_path;

  auto* exact = app.add_subcommand("exact", "homothetic scale-factor ODE and fate");
  FlagSet fe{exact};
  exact->add_option("--config", config_path, "JSON config file");
  fe.add_double("--lambda", "lambda", "Einstein constant");
  fe.add_double("--mu", "mu", "initial rate");
  fe.add_double("--d", "d", "dissipative coefficient");
  fe.add_int("--dim", "dim", "dimension");
  fe.add_string("--variant", "variant", "paper | substitution");
  fe.add_double("--dt", "dt", "integration step");
  fe.add_double("--t-end", "t_end", "integration horizon");
  fe.add_string("--out", "out_dir", "output directory");

  auto* evolve = app.add_subcommand("evolve", "integrate the flow");
  FlagSet fv{evolve};
  evolve->add_option("--config", config_path, "JSON config file");
  add_run_flags(fv);
  fv.add_string("--initial", "initial_kind", "flat|homothetic|conformal_trig|bump");
  fv.add_double("--mu", "initial_mu", "homothetic rate");
  fv.add_double("--amplitude", "initial_amplitude", "conformal amplitude");

  auto* stability = app.add_subcommand("stability", "flat-space perturbation experiment");
  FlagSet fs{stability};
  stability->add_option("--config", config_path, "JSON config file");
  add_run_flags(fs);
  fs.add_double("--epsilon", "epsilon", "perturbation size");
  fs.add_double("--d-paired", "d_paired", "dissipation for the paired run");

  auto* soliton = app.add_subcommand("soliton", "verify a steady soliton candidate");
  FlagSet fso{soliton};
  soliton->add_option("--config", config_path, "JSON config file");
  fso.add_int("--dim", "dim", "dimension");
  fso.add_int("--points", "points", "grid points per axis");
  fso.add_double("--box", "box", "torus side length");
  fso.add_double("--d", "d", "dissipative coefficient");
  fso.add_int("--order", "difference_order", "difference order");
  fso.add_string("--out", "out_dir", "output directory");
  fso.add_int("--threads", "threads", "worker threads");

  auto* identities = app.add_subcommand("identities", "residual norms along a stored run");
  FlagSet fid{identities};
  identities->add_option("--config", config_path, "JSON config file");
  fid.add_string("--run-dir", "run_dir", "directory of a stored run (with snapshots/)");
  fid.add_double("--d", "d", "dissipative coefficient of the run");
  fid.add_int("--order", "difference_order", "difference order");
  fid.add_bool("--fields", "write_residual_fields", "also export residual fields");
  fid.add_string("--out", "out_dir", "output directory (default: run dir)");
  fid.add_int("--threads", "threads", "worker threads");

  auto* convergence = app.add_subcommand("convergence", "grid refinement order study");
  FlagSet fc{convergence};
  convergence->add_option("--config", config_path, "JSON config file");
  add_run_flags(fc);

  CLI11_PARSE(app, argc, argv);

  try {
    json base = config_path.empty() ? json::object() : hf::load_config_file(config_path);

    if (exact->parsed()) return hf::run_exact(hf::parse_exact(merge(base, fe.values)));
    if (evolve->parsed()) {
      json j = merge(base, fv.values);
      // convenience flags expand into the nested initial-data object
      json init = j.contains("initial") ? j["initial"] : json::object();
      if (j.contains("initial_kind")) {
        init["kind"] = j["initial_kind"];
        j.erase("initial_kind");
      }
      if (j.contains("initial_mu")) {
        init["mu"] = j["initial_mu"];
        j.erase("initial_mu");
      }
      if (j.contains("initial_amplitude")) {
        init["amplitude"] = j["initial_amplitude"];
        j.erase("initial_amplitude");
      }
      if (!init.empty()) j["initial"] = init;
      return hf::run_evolve(hf::parse_evolve(j));
    }
    if (stability->parsed()) return hf::run_stability(hf::parse_stability(merge(base, fs.values)));
    if (soliton->parsed()) return hf::run_soliton(hf::parse_soliton(merge(base, fso.values)));
    if (identities->parsed())
      return hf::run_identities(hf::parse_identities(merge(base, fid.values)));
    if (convergence->parsed())
      return hf::run_convergence(hf::parse_convergence(merge(base, fc.values)));
  } catch (const hf::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 64;
  } catch (const hf::DegenerateMetric& e) {
    std::cerr << "degeneration: " << e.what() << "\n";
    return 2;
  } catch (const hf::NonFinite& e) {
    std::cerr << "instability: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
