#include "hypflow/snapshot_io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "hypflow/dynamics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hypflow {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> metric_component_names(int n) {
  std::vector<std::string> names;
  for (const char* base : {"g", "k"})
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        names.push_back(std::string(base) + "_" + std::to_string(i + 1) + std::to_string(j + 1));
  return names;
}

void write_raw(const std::string& path, const double* data, std::size_t count) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * 8));
}

void read_raw(const std::string& path, double* data, std::size_t count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * 8));
  if (static_cast<std::size_t>(in.gcount()) != count * 8)
    throw std::runtime_error("short read from " + path);
}

void write_header(const std::string& dir, const Grid& g,
                  const std::vector<std::string>& names, double time) {
  json h;
  h["schema_version"] = 1;
  h["dimension"] = g.dim;
  h["points_per_axis"] = g.n_axis;
  h["box_length"] = g.box;
  h["component_names"] = names;
  h["time"] = time;
  std::ofstream out(dir + "/header.json");
  if (!out) throw std::runtime_error("cannot open " + dir + "/header.json");
  out << h.dump(2) << "\n";
}

}  // namespace

void write_field_snapshot(const std::string& dir, const FieldStorage& field,
                          const std::vector<std::string>& component_names, double time) {
  if (static_cast<int>(component_names.size()) != field.ncomp())
    throw std::invalid_argument("write_field_snapshot: one name per component required");
  fs::create_directories(dir);
  write_header(dir, field.grid(), component_names, time);
  for (int c = 0; c < field.ncomp(); ++c)
    write_raw(dir + "/" + component_names[c] + ".f64", field.comp(c), field.npts());
}

void write_state_snapshot(const std::string& dir, const FlowState& state) {
  const Grid& g = state.g.grid();
  fs::create_directories(dir);
  std::vector<std::string> names = metric_component_names(g.dim);
  write_header(dir, g, names, state.t);
  int m = state.g.ncomp();
  for (int c = 0; c < m; ++c) write_raw(dir + "/" + names[c] + ".f64", state.g.comp(c), g.npts());
  for (int c = 0; c < m; ++c)
    write_raw(dir + "/" + names[m + c] + ".f64", state.k.comp(c), g.npts());
}

FlowState read_state_snapshot(const std::string& dir) {
  std::ifstream in(dir + "/header.json");
  if (!in) throw std::runtime_error("cannot open " + dir + "/header.json");
  json h = json::parse(in);
  Grid grid(h.at("dimension").get<int>(), h.at("points_per_axis").get<int>(),
            h.at("box_length").get<double>());
  SymTensorField g(grid), k(grid);
  std::vector<std::string> names = metric_component_names(grid.dim);
  if (h.at("component_names").get<std::vector<std::string>>() != names)
    throw std::runtime_error("snapshot component set does not match a flow state");
  int m = g.ncomp();
  for (int c = 0; c < m; ++c) read_raw(dir + "/" + names[c] + ".f64", g.comp(c), grid.npts());
  for (int c = 0; c < m; ++c)
    read_raw(dir + "/" + names[m + c] + ".f64", k.comp(c), grid.npts());
  return FlowState(h.at("time").get<double>(), std::move(g), std::move(k));
}

SnapshotWriter::SnapshotWriter(std::string out_dir, int cadence)
    : out_dir_(std::move(out_dir)), cadence_(cadence) {}

void SnapshotWriter::maybe_write(const FlowState& state, std::size_t step_index) {
  if (out_dir_.empty() || cadence_ <= 0) return;
  if (step_index % static_cast<std::size_t>(cadence_) != 0) return;
  char name[32];
  std::snprintf(name, sizeof(name), "%06d", written_++);
  write_state_snapshot(out_dir_ + "/snapshots/" + name, state);
}

std::vector<std::string> list_snapshots(const std::string& out_dir) {
  std::vector<std::string> dirs;
  fs::path base = fs::path(out_dir) / "snapshots";
  if (!fs::exists(base)) return dirs;
  for (const auto& e : fs::directory_iterator(base))
    if (e.is_directory()) dirs.push_back(e.path().string());
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

void write_diagnostics_csv(const std::string& path, const std::vector<EnergyRecord>& records) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);  // binary: byte-identical newlines
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "t,dt,u_min,u_max,v_max,w_max,R_min,R_max,min_eig_g,gamma_sup,gamma_l2,energy,sup_h,"
         "event\n";
  for (const EnergyRecord& r : records) {
    out << format_double(r.t) << ',' << format_double(r.dt) << ',' << format_double(r.u_min)
        << ',' << format_double(r.u_max) << ',' << format_double(r.v_max) << ','
        << format_double(r.w_max) << ',' << format_double(r.R_min) << ','
        << format_double(r.R_max) << ',' << format_double(r.min_eig_g) << ','
        << format_double(r.gamma_sup) << ',' << format_double(r.gamma_l2) << ','
        << format_double(r.energy) << ',' << format_double(r.sup_h) << ',' << r.event << '\n';
  }
}

}  // namespace hypflow
