#ifndef HYPFLOW_SNAPSHOT_IO_HPP
#define HYPFLOW_SNAPSHOT_IO_HPP

#include <string>
#include <vector>

#include "hypflow/flow.hpp"

namespace hypflow {

struct EnergyRecord;

/// Format a double with full round-trip precision (deterministic output).
std::string format_double(double v);

/// Snapshot layout: one raw little-endian float64 file per tensor component in
/// row-major grid order, plus header.json carrying
/// {schema_version, dimension, points_per_axis, box_length, component_names, time}.
void write_state_snapshot(const std::string& dir, const FlowState& state);
FlowState read_state_snapshot(const std::string& dir);

/// Write an arbitrary field in the same snapshot format.
void write_field_snapshot(const std::string& dir, const FieldStorage& field,
                          const std::vector<std::string>& component_names, double time);

/// Incrementally writes numbered snapshot directories under <out_dir>/snapshots.
class SnapshotWriter {
 public:
  SnapshotWriter(std::string out_dir, int cadence);
  void maybe_write(const FlowState& state, std::size_t step_index);

 private:
  std::string out_dir_;
  int cadence_;
  int written_ = 0;
};

/// List snapshot directories of a run in index order.
std::vector<std::string> list_snapshots(const std::string& out_dir);

void write_diagnostics_csv(const std::string& path, const std::vector<EnergyRecord>& records);

}  // namespace hypflow

#endif
