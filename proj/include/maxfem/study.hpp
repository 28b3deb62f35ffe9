#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maxfem/analysis.hpp"
#include "maxfem/coefficients.hpp"
#include "maxfem/mesh.hpp"

namespace maxfem {

// Flat key = value configuration of a (k, p, h) sweep. List values are
// comma-separated; complex k entries are written `10` or `5+2i`.
struct StudyConfig {
  std::string problem = "exp2_smooth";
  Family family = Family::NedelecII;  // full polynomial spaces: error rate h^p
  std::vector<Complex> ks;
  std::vector<int> ps;
  int initial_n = 1;
  int levels = 1;
  int p_ref = 4;
  std::string output_dir = ".";
  int threads = 1;
  int quad_bump = 0;
  long long dof_cap = 400000;       // refuse runs projected beyond this
  std::string timing_mode = "none"; // "none": zero wall-time columns (reproducible bytes)
  std::optional<AxisBox> inner_box; // subdomain box for the interface problem
};

StudyConfig parse_config_text(const std::string& text);
StudyConfig parse_config_file(const std::string& path);

// Throws std::invalid_argument naming the offending field.
void validate_config(const StudyConfig& cfg);

struct RunRecord {
  Complex k;
  int p = 0;
  int level = 0;
  double h = 0.0;        // max element diameter
  long long dofs = 0;
  double n_k = 0.0;      // dofs^(1/3) / |k|
  double rel_error = 0.0;            // relative error in the curl-k norm
  std::optional<double> quasiopt;    // nullopt when not applicable
  double delta_k = 0.0;
  double t_assemble = 0.0, t_solve = 0.0;  // seconds (zero in timing_mode=none)
};

// Runs the sweep: per (level, k) one reference solve at p_ref (lowered
// towards max(p)+1 if the projected size exceeds dof_cap), then one solve and
// error/diagnostic evaluation per p. Deterministic given cfg.
std::vector<RunRecord> run_study(const StudyConfig& cfg);

// k as used in output filenames: `10` for real k, `5+2i` otherwise.
std::string k_token(Complex k);

// One data_p{p}_k{k}.csv per (p, k) pair in `dir`, rows sorted by level.
// Columns: dof, N_k, relative curl-k error, h, quasiopt ratio, delta_k,
// assemble time, solve time; '#'-prefixed header.
std::vector<std::string> emit_csv(const std::vector<RunRecord>& records, const std::string& dir);

// Log-log SVG (x = N_k, y = relative error), one polyline per k for the given
// order p, plus a dashed O(h^p) guide anchored at the last point.
void emit_plot(const std::vector<RunRecord>& records, int p, const std::string& path);

}  // namespace maxfem
