#include "maxfem/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "maxfem/assembly.hpp"
#include "maxfem/fe_function.hpp"
#include "maxfem/solver.hpp"

namespace maxfem {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Complex parse_complex(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("k: empty entry");
  if (s.back() == 'i') {
    // re{+,-}im i
    size_t pos = s.find_last_of("+-", s.size() - 2);
    if (pos == std::string::npos || pos == 0)
      throw std::invalid_argument("k: cannot parse complex value '" + s + "'");
    double re = std::stod(s.substr(0, pos));
    double im = std::stod(s.substr(pos, s.size() - 1 - pos));
    return Complex(re, im);
  }
  return Complex(std::stod(s), 0.0);
}

double wall_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmtg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string k_token(Complex k) {
  if (k.imag() == 0.0) return fmtg(k.real());
  return fmtg(k.real()) + "+" + fmtg(k.imag()) + "i";
}

StudyConfig parse_config_text(const std::string& text) {
  StudyConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    try {
      if (key == "problem") {
        cfg.problem = val;
      } else if (key == "family") {
        if (val == "nedelec1")
          cfg.family = Family::NedelecI;
        else if (val == "nedelec2")
          cfg.family = Family::NedelecII;
        else
          throw std::invalid_argument("family: expected nedelec1 or nedelec2");
      } else if (key == "k") {
        cfg.ks.clear();
        for (const auto& item : split_list(val)) cfg.ks.push_back(parse_complex(item));
      } else if (key == "p") {
        cfg.ps.clear();
        for (const auto& item : split_list(val)) cfg.ps.push_back(std::stoi(item));
      } else if (key == "initial_n") {
        cfg.initial_n = std::stoi(val);
      } else if (key == "levels") {
        cfg.levels = std::stoi(val);
      } else if (key == "p_ref") {
        cfg.p_ref = std::stoi(val);
      } else if (key == "output_dir") {
        cfg.output_dir = val;
      } else if (key == "threads") {
        cfg.threads = std::stoi(val);
      } else if (key == "quad_bump") {
        cfg.quad_bump = std::stoi(val);
      } else if (key == "dof_cap") {
        cfg.dof_cap = std::stoll(val);
      } else if (key == "timing_mode") {
        if (val != "none" && val != "wall")
          throw std::invalid_argument("timing_mode: expected none or wall");
        cfg.timing_mode = val;
      } else if (key == "inner_box") {
        auto parts = split_list(val);
        if (parts.size() != 6)
          throw std::invalid_argument("inner_box: expected 6 comma-separated coordinates");
        AxisBox box;
        for (int i = 0; i < 3; ++i) box.lo[i] = std::stod(parts[i]);
        for (int i = 0; i < 3; ++i) box.hi[i] = std::stod(parts[3 + i]);
        cfg.inner_box = box;
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      throw std::invalid_argument("config key '" + key + "': " + e.what());
    }
  }
  return cfg;
}

StudyConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void validate_config(const StudyConfig& cfg) {
  if (cfg.ks.empty()) throw std::invalid_argument("k: at least one wavenumber required");
  for (Complex k : cfg.ks)
    if (std::abs(k) < 1.0) throw std::invalid_argument("k: every entry must satisfy |k| >= 1");
  if (cfg.ps.empty()) throw std::invalid_argument("p: at least one order required");
  int max_p = *std::max_element(cfg.ps.begin(), cfg.ps.end());
  int min_p = *std::min_element(cfg.ps.begin(), cfg.ps.end());
  int p_floor = cfg.family == Family::NedelecII ? 1 : 0;
  if (min_p < p_floor || max_p > 4)
    throw std::invalid_argument("p: orders must lie in [" + std::to_string(p_floor) + ", 4]");
  if (cfg.p_ref <= max_p)
    throw std::invalid_argument("p_ref: must exceed max(p) = " + std::to_string(max_p));
  if (cfg.p_ref > 4) throw std::invalid_argument("p_ref: at most 4");
  if (cfg.levels < 1) throw std::invalid_argument("levels: must be >= 1");
  if (cfg.initial_n < 1) throw std::invalid_argument("initial_n: must be >= 1");
  if (cfg.threads < 1) throw std::invalid_argument("threads: must be >= 1");
  if (cfg.problem == "exp1_interface" && !cfg.inner_box)
    throw std::invalid_argument("inner_box: required for exp1_interface");
}

std::vector<RunRecord> run_study(const StudyConfig& cfg) {
  validate_config(cfg);
  const bool timed = cfg.timing_mode == "wall";
  const int max_p = *std::max_element(cfg.ps.begin(), cfg.ps.end());
  AssemblyOptions aopt;
  aopt.quad_bump = cfg.quad_bump;
  aopt.threads = cfg.threads;

  std::vector<RunRecord> records;
  Mesh mesh = build_structured_cube_mesh(cfg.initial_n, cfg.inner_box);

  for (int level = 0; level < cfg.levels; ++level) {
    if (level > 0) mesh = refine_uniform(mesh);
    double h = mesh.max_diameter();

    // Reference order: lowered towards max(p)+1 if the projected size busts
    // the cap; the coarse runs themselves must always fit.
    int p_ref_eff = -1;
    for (int q = cfg.p_ref; q > max_p; --q) {
      DofMap probe = build_dof_map(mesh, cfg.family, q);
      if (probe.n_global <= cfg.dof_cap) {
        p_ref_eff = q;
        break;
      }
    }
    if (p_ref_eff < 0)
      throw std::runtime_error("level " + std::to_string(level) +
                               ": no admissible reference order fits under dof_cap = " +
                               std::to_string(cfg.dof_cap));
    if (p_ref_eff != cfg.p_ref)
      std::cerr << "note: level " << level << ": reference order lowered to " << p_ref_eff
                << " to respect dof_cap\n";

    FESpace ref_space = make_fe_space(mesh, cfg.family, p_ref_eff);
    const ReferenceBasis& ref_basis = oriented_basis(cfg.family, p_ref_eff, {0, 1, 2, 3});

    for (Complex k : cfg.ks) {
      ProblemData pd = builtin_problem(cfg.problem, k);

      FEFunction u_ref(ref_space);
      try {
        ComplexSparseSystem sys = assemble_system(mesh, ref_basis, ref_space.dm, pd, aopt);
        u_ref.coeffs = solve_direct(sys);
      } catch (const std::exception& e) {
        throw std::runtime_error("reference solve failed at (k=" + k_token(k) +
                                 ", p=" + std::to_string(p_ref_eff) +
                                 ", level=" + std::to_string(level) + "): " + e.what());
      }

      for (int p : cfg.ps) {
        FESpace space = make_fe_space(mesh, cfg.family, p);
        const ReferenceBasis& basis = oriented_basis(cfg.family, p, {0, 1, 2, 3});

        RunRecord rec;
        rec.k = k;
        rec.p = p;
        rec.level = level;
        rec.h = h;
        rec.dofs = space.n_dofs();
        rec.n_k = std::cbrt(static_cast<double>(rec.dofs)) / std::abs(k);

        try {
          double t0 = timed ? wall_seconds() : 0.0;
          ComplexSparseSystem sys = assemble_system(mesh, basis, space.dm, pd, aopt);
          double t1 = timed ? wall_seconds() : 0.0;
          FEFunction u_N(space);
          u_N.coeffs = solve_direct(sys);
          double t2 = timed ? wall_seconds() : 0.0;
          if (timed) {
            rec.t_assemble = t1 - t0;
            rec.t_solve = t2 - t1;
          }

          ErrorReport rep = error_report(u_N, u_ref, k);
          rec.rel_error = rep.rel_curlk;
          rec.quasiopt = quasiopt_ratio(u_ref, u_N, space, k);
          rec.delta_k = delta_k_diagnostic(u_ref, u_N, space, pd);
        } catch (const std::exception& e) {
          throw std::runtime_error("run failed at (k=" + k_token(k) + ", p=" + std::to_string(p) +
                                   ", level=" + std::to_string(level) + "): " + e.what());
        }
        records.push_back(rec);
      }
    }
  }
  return records;
}

std::vector<std::string> emit_csv(const std::vector<RunRecord>& records, const std::string& dir) {
  if (records.empty()) throw std::invalid_argument("emit_csv: no records");
  std::filesystem::create_directories(dir);

  std::map<std::pair<int, std::string>, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) groups[{r.p, k_token(r.k)}].push_back(&r);

  std::vector<std::string> paths;
  for (auto& [key, rows] : groups) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const RunRecord* a, const RunRecord* b) { return a->level < b->level; });
    std::string path =
        dir + "/data_p" + std::to_string(key.first) + "_k" + key.second + ".csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
    out << "# dof,N_k,rel_curlk_error,h,quasiopt_ratio,delta_k,t_assemble,t_solve\n";
    for (const RunRecord* r : rows) {
      out << r->dofs << ',' << fmt17(r->n_k) << ',' << fmt17(r->rel_error) << ','
          << fmt17(r->h) << ',' << (r->quasiopt ? fmt17(*r->quasiopt) : std::string("nan"))
          << ',' << fmt17(r->delta_k) << ',' << fmt17(r->t_assemble) << ','
          << fmt17(r->t_solve) << '\n';
    }
    paths.push_back(path);
  }
  return paths;
}

namespace {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> pts;  // (N_k, rel_error)
};

}  // namespace

void emit_plot(const std::vector<RunRecord>& records, int p, const std::string& path) {
  std::map<std::string, Series> by_k;
  for (const RunRecord& r : records) {
    if (r.p != p) continue;
    Series& s = by_k[k_token(r.k)];
    s.label = "k=" + k_token(r.k);
    s.pts.emplace_back(r.n_k, std::max(r.rel_error, 1e-300));
  }
  std::vector<Series> series;
  for (auto& [tok, s] : by_k) {
    std::sort(s.pts.begin(), s.pts.end());
    if (s.pts.size() < 2) {
      std::cerr << "warning: series " << s.label << " has fewer than 2 points; skipped\n";
      continue;
    }
    series.push_back(s);
  }
  if (series.empty()) throw std::invalid_argument("emit_plot: no series with >= 2 points");

  // O(h^p) guide: N_k is proportional to 1/h at fixed k, so the guide is
  // y = y0 (x/x0)^(-p) anchored at the last point of the first series.
  const auto& anchor = series.front().pts.back();
  std::vector<std::pair<double, double>> guide;
  for (const auto& pt : series.front().pts)
    guide.emplace_back(pt.first, anchor.second * std::pow(pt.first / anchor.first, -p));

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto grow = [&](double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  };
  for (const auto& s : series)
    for (const auto& pt : s.pts) grow(pt.first, pt.second);
  for (const auto& pt : guide) grow(pt.first, pt.second);

  double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
  double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
  if (lx1 - lx0 < 1e-12) lx1 = lx0 + 1;
  if (ly1 - ly0 < 1e-12) ly1 = ly0 + 1;
  lx0 -= 0.05 * (lx1 - lx0);
  lx1 += 0.05 * (lx1 - lx0);
  ly0 -= 0.08 * (ly1 - ly0);
  ly1 += 0.08 * (ly1 - ly0);

  const double W = 640, H = 480, ML = 80, MR = 30, MT = 30, MB = 60;
  auto X = [&](double v) { return ML + (std::log10(v) - lx0) / (lx1 - lx0) * (W - ML - MR); };
  auto Y = [&](double v) { return H - MB - (std::log10(v) - ly0) / (ly1 - ly0) * (H - MT - MB); };

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_plot: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << W - ML - MR << "\" height=\""
      << H - MT - MB << "\" fill=\"none\" stroke=\"black\"/>\n";

  // decade ticks
  for (int e = static_cast<int>(std::ceil(lx0)); e <= static_cast<int>(std::floor(lx1)); ++e) {
    double x = X(std::pow(10.0, e));
    out << "<line x1=\"" << x << "\" y1=\"" << H - MB << "\" x2=\"" << x << "\" y2=\""
        << H - MB + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << H - MB + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(ly0)); e <= static_cast<int>(std::floor(ly1)); ++e) {
    double y = Y(std::pow(10.0, e));
    out << "<line x1=\"" << ML - 5 << "\" y1=\"" << y << "\" x2=\"" << ML << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ML - 8 << "\" y=\"" << y + 4
        << "\" font-size=\"12\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  out << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 15
      << "\" font-size=\"14\" text-anchor=\"middle\">DOFs per wavelength</text>\n";
  out << "<text x=\"20\" y=\"" << (MT + H - MB) / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << (MT + H - MB) / 2 << ")\">rel. error</text>\n";

  auto polyline = [&](const std::vector<std::pair<double, double>>& pts, const std::string& color,
                      bool dashed) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (dashed) out << " stroke-dasharray=\"6,4\"";
    out << " points=\"";
    for (const auto& pt : pts) out << X(pt.first) << ',' << Y(pt.second) << ' ';
    out << "\"/>\n";
  };

  for (size_t i = 0; i < series.size(); ++i) {
    const std::string color = colors[i % 6];
    polyline(series[i].pts, color, false);
    for (const auto& pt : series[i].pts)
      out << "<circle cx=\"" << X(pt.first) << "\" cy=\"" << Y(pt.second)
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << W - MR - 10 << "\" y=\"" << MT + 20 + 18 * i
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << color << "\">"
        << series[i].label << "</text>\n";
  }
  polyline(guide, "#555555", true);
  out << "<text x=\"" << W - MR - 10 << "\" y=\"" << MT + 20 + 18 * series.size()
      << "\" font-size=\"12\" text-anchor=\"end\" fill=\"#555555\">O(h^" << p << ")</text>\n";
  out << "</svg>\n";
}

}  // namespace maxfem
