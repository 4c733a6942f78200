// mq - measure quantization CLI on top of the measureq C API.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "measureq.h"

using nlohmann::json;

namespace {

struct MeasureDeleter {
  void operator()(mq_measure* m) const { mq_measure_free(m); }
};
struct TilingDeleter {
  void operator()(mq_tiling* t) const { mq_tiling_free(t); }
};
struct TraceDeleter {
  void operator()(mq_trace* t) const { mq_trace_free(t); }
};
using MeasurePtr = std::unique_ptr<mq_measure, MeasureDeleter>;
using TilingPtr = std::unique_ptr<mq_tiling, TilingDeleter>;
using TracePtr = std::unique_ptr<mq_trace, TraceDeleter>;

[[noreturn]] void die(const std::string& msg) {
  std::cerr << "mq: " << msg << "\n";
  std::exit(1);
}

void check(mq_status s, const std::string& context) {
  if (s != MQ_OK)
    die(context + ": " + mq_status_name(s) + " (" + mq_last_error() + ")");
}

bool file_exists(const std::string& path) {
  std::ifstream f(path);
  return f.good();
}

// --omega accepts builtin:NAME, pgm:PATH, csv:PATH, or a bare path with the
// format sniffed from the extension.
MeasurePtr load_omega(const std::string& spec, uint64_t seed,
                      std::vector<std::string>* notes) {
  mq_measure* m = nullptr;
  if (spec.rfind("builtin:", 0) == 0) {
    check(mq_measure_builtin(spec.substr(8).c_str(), seed, &m), spec);
    return MeasurePtr(m);
  }
  std::string path = spec;
  bool force_pgm = false, force_csv = false;
  if (spec.rfind("pgm:", 0) == 0) {
    path = spec.substr(4);
    force_pgm = true;
  } else if (spec.rfind("csv:", 0) == 0) {
    path = spec.substr(4);
    force_csv = true;
  }
  bool looks_pgm = path.size() > 4 && path.substr(path.size() - 4) == ".pgm";
  if (force_pgm || (looks_pgm && !force_csv)) {
    int fallback = 0;
    check(mq_measure_from_pgm(path.c_str(), &m, &fallback), path);
    if (fallback && notes)
      notes->push_back("zero-intensity image: fell back to the uniform density");
    return MeasurePtr(m);
  }
  check(mq_measure_read_csv(path.c_str(), &m), path);
  return MeasurePtr(m);
}

// --points accepts a CSV path or an inline 1D comma list like "0,0.5,1".
MeasurePtr load_points(const std::string& spec) {
  mq_measure* m = nullptr;
  if (file_exists(spec)) {
    check(mq_measure_read_csv(spec.c_str(), &m), spec);
    return MeasurePtr(m);
  }
  std::vector<double> coords;
  size_t pos = 0;
  while (pos <= spec.size()) {
    size_t comma = spec.find(',', pos);
    std::string field =
        spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      coords.push_back(std::stod(field));
    } catch (...) {
      die("cannot read points '" + spec + "' (no such file, not a number list)");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  check(mq_measure_from_points(1, coords.data(), static_cast<int>(coords.size()), &m),
        "points");
  return MeasurePtr(m);
}

json config_echo(int n, double qa, double qr, const mq_solver_config& cfg) {
  json j;
  j["n"] = n;
  j["qa"] = qa;
  j["qr"] = qr;
  j["lambda"] = cfg.lambda;
  j["tv_method"] = cfg.tv_method == MQ_TV_NONE
                       ? "none"
                       : (cfg.tv_method == MQ_TV_KERNEL ? "kernel" : "pointdiff");
  j["tv_bandwidth"] = cfg.tv_bandwidth;
  j["tv_smoothing"] = cfg.tv_smoothing;
  j["seed"] = cfg.seed;
  j["max_iters"] = cfg.max_iters;
  j["init"] = cfg.init == MQ_INIT_RANDOM ? "random" : "tiling";
  return j;
}

json energy_json(const mq_measure* x, const mq_measure* omega, double qa, double qr,
                 const mq_fourier_quad& quad) {
  json j;
  mq_energy_report rep{};
  check(mq_particle_energy(x, omega, qa, qr, &rep), "energy");
  j["attraction"] = rep.attraction;
  j["repulsion"] = rep.repulsion;
  j["total"] = rep.total;
  if (qa == qr) {
    if (mq_measure_kind(omega) == MQ_MEASURE_PARTICLES) {
      double sym = 0.0;
      if (mq_symmetrized_energy(x, omega, qa, &sym) == MQ_OK)
        j["symmetrized"] = sym;
    }
    double fe = 0.0;
    if (qa < 2.0 && mq_fourier_energy(x, omega, qa, &quad, &fe) == MQ_OK)
      j["fourier"] = fe;
  }
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) die("cannot write " + path);
  out << text;
}

void write_report(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

json trace_summary(const mq_trace* tr) {
  json j;
  j["iterations"] = mq_trace_length(tr);
  j["termination"] = mq_trace_termination(tr);
  j["converged"] = mq_trace_converged(tr) != 0;
  return j;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

struct SolverFlags {
  double lambda = 0.0;
  std::string tv = "none";
  std::string kernel = "triangular";
  double bandwidth = -1.0;
  double smoothing = -1.0;
  uint64_t seed = 0;
  int max_iters = -1;
  std::string init = "tiling";

  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda", lambda, "TV regularization weight");
    cmd->add_option("--tv", tv, "TV discretization: kernel, pointdiff, none")
        ->check(CLI::IsMember({"kernel", "pointdiff", "none"}));
    cmd->add_option("--tv-kernel", kernel, "estimation kernel: triangular, gaussian")
        ->check(CLI::IsMember({"triangular", "gaussian"}));
    cmd->add_option("--h", bandwidth, "kernel TV bandwidth (default: N^(-1/(2d+1)))");
    cmd->add_option("--eps-tv", smoothing, "TV smoothing parameter");
    cmd->add_option("--seed", seed, "RNG seed (sampling, noise, random init)");
    cmd->add_option("--max-iters", max_iters, "iteration cap");
    cmd->add_option("--init", init, "particle initialization: tiling, random")
        ->check(CLI::IsMember({"tiling", "random"}));
  }

  mq_solver_config build() const {
    mq_solver_config cfg;
    mq_solver_config_init(&cfg);
    cfg.lambda = lambda;
    cfg.tv_method = tv == "kernel" ? MQ_TV_KERNEL
                                   : (tv == "pointdiff" ? MQ_TV_POINTDIFF : MQ_TV_NONE);
    cfg.tv_kernel = kernel == "gaussian" ? MQ_KERNEL_GAUSSIAN : MQ_KERNEL_TRIANGULAR;
    cfg.tv_bandwidth = bandwidth;
    cfg.tv_smoothing = smoothing;
    cfg.seed = seed;
    if (max_iters > 0) cfg.max_iters = max_iters;
    cfg.init = init == "random" ? MQ_INIT_RANDOM : MQ_INIT_TILING;
    return cfg;
  }
};

struct QuadFlags {
  double xi_min = 1e-6;
  double xi_max = 1e6;
  int nodes_per_decade = 32;

  void attach(CLI::App* cmd) {
    cmd->add_option("--xi-min", xi_min, "Fourier quadrature lower truncation");
    cmd->add_option("--xi-max", xi_max, "Fourier quadrature upper truncation");
    cmd->add_option("--nodes-per-decade", nodes_per_decade,
                    "log-quadrature density");
  }

  mq_fourier_quad build() const {
    mq_fourier_quad q;
    mq_fourier_quad_init(&q);
    q.xi_min = xi_min;
    q.xi_max = xi_max;
    q.nodes_per_decade = nodes_per_decade;
    return q;
  }
};

int cmd_quantize(const std::string& omega_spec, int n, double qa, double qr,
                 const SolverFlags& sf, const QuadFlags& qf,
                 const std::string& out) {
  if (n < 1) die("n must be >= 1");
  Timer timer;
  std::vector<std::string> notes;
  MeasurePtr omega = load_omega(omega_spec, sf.seed, &notes);
  mq_solver_config cfg = sf.build();

  mq_measure* result = nullptr;
  mq_trace* trace_raw = nullptr;
  mq_status s = mq_minimize_particles(omega.get(), n, qa, qr, &cfg, nullptr,
                                      &result, &trace_raw);
  if (s != MQ_OK && s != MQ_ERR_NOT_CONVERGED && s != MQ_ERR_LINE_SEARCH)
    die(std::string("quantize: ") + mq_status_name(s) + " (" + mq_last_error() + ")");
  MeasurePtr points(result);
  TracePtr trace(trace_raw);

  std::string points_path = out + "_points.csv";
  check(mq_measure_write_csv(points.get(), points_path.c_str()), points_path);

  json report;
  report["schema"] = 1;
  report["command"] = "quantize";
  report["omega"] = omega_spec;
  report["config"] = config_echo(n, qa, qr, cfg);
  report["energy"] = energy_json(points.get(), omega.get(), qa, qr, qf.build());
  if (cfg.lambda > 0.0 && cfg.tv_method != MQ_TV_NONE) {
    mq_tv_estimate tv{};
    double h = cfg.tv_bandwidth > 0.0
                   ? cfg.tv_bandwidth
                   : mq_bandwidth_schedule(n, mq_measure_dim(omega.get()));
    mq_status ts = cfg.tv_method == MQ_TV_KERNEL
                       ? mq_kernel_tv(points.get(), h, cfg.tv_kernel, &tv)
                       : mq_pointdiff_tv(points.get(), &tv);
    if (ts == MQ_OK)
      report["energy"]["tv"] = tv.infinite ? json("inf") : json(tv.value);
  }
  if (mq_measure_dim(omega.get()) == 1) {
    double w1 = 0.0;
    check(mq_wasserstein1_1d(points.get(), omega.get(), &w1), "wasserstein1");
    report["wasserstein1"] = w1;
  }
  report["solver"] = trace_summary(trace.get());
  report["outputs"] = {{"points_csv", points_path}};
  if (!notes.empty()) report["notes"] = notes;
  report["timing_ms"] = timer.ms();
  write_report(out + "_report.json", report);

  std::cout << "quantize: wrote " << points_path << " ("
            << mq_trace_termination(trace.get()) << ")\n";
  return mq_trace_converged(trace.get()) ? 0 : 2;
}

int cmd_dither(const std::string& image, int n, double qa, double qr,
               const SolverFlags& sf, const std::string& out) {
  if (n < 1) die("n must be >= 1");
  Timer timer;
  std::vector<std::string> notes;
  mq_measure* omega_raw = nullptr;
  int fallback = 0;
  check(mq_measure_from_pgm(image.c_str(), &omega_raw, &fallback), image);
  MeasurePtr omega(omega_raw);
  if (fallback)
    notes.push_back("zero-intensity image: fell back to the uniform density");

  int cells[2] = {1, 1};
  check(mq_grid_shape(omega.get(), cells, nullptr, nullptr), "grid shape");

  mq_solver_config cfg = sf.build();
  mq_measure* result = nullptr;
  mq_trace* trace_raw = nullptr;
  mq_status s = mq_minimize_particles(omega.get(), n, qa, qr, &cfg, nullptr,
                                      &result, &trace_raw);
  if (s != MQ_OK && s != MQ_ERR_NOT_CONVERGED && s != MQ_ERR_LINE_SEARCH)
    die(std::string("dither: ") + mq_status_name(s) + " (" + mq_last_error() + ")");
  MeasurePtr points(result);
  TracePtr trace(trace_raw);

  // Point CSV in image (pixel) coordinates.
  int count = mq_particles_count(points.get());
  std::vector<double> coords(static_cast<size_t>(count) * 2);
  check(mq_particles_coords(points.get(), coords.data()), "coords");
  std::vector<double> px(coords);
  for (int i = 0; i < count; ++i) {
    px[2 * i] *= cells[0];
    px[2 * i + 1] *= cells[1];
  }
  mq_measure* pixel_pts = nullptr;
  check(mq_measure_from_points(2, px.data(), count, &pixel_pts), "pixel points");
  MeasurePtr pixels(pixel_pts);
  std::string points_path = out + "_points.csv";
  check(mq_measure_write_csv(pixels.get(), points_path.c_str()), points_path);

  std::string preview_path = out + "_preview.pgm";
  check(mq_write_points_pgm(preview_path.c_str(), cells[0], cells[1], points.get()),
        preview_path);
  std::string trace_path = out + "_trace.csv";
  check(mq_trace_write_csv(trace.get(), trace_path.c_str()), trace_path);

  json report;
  report["schema"] = 1;
  report["command"] = "dither";
  report["image"] = image;
  report["image_size"] = {cells[0], cells[1]};
  report["config"] = config_echo(n, qa, qr, cfg);
  mq_fourier_quad quad;
  mq_fourier_quad_init(&quad);
  report["energy"] = energy_json(points.get(), omega.get(), qa, qr, quad);
  report["solver"] = trace_summary(trace.get());
  report["outputs"] = {{"points_csv", points_path},
                       {"preview_pgm", preview_path},
                       {"trace_csv", trace_path}};
  if (!notes.empty()) report["notes"] = notes;
  report["timing_ms"] = timer.ms();
  write_report(out + "_report.json", report);

  std::cout << "dither: wrote " << points_path << ", " << preview_path << "\n";
  return mq_trace_converged(trace.get()) ? 0 : 2;
}

int cmd_energy(const std::string& points_spec, const std::string& omega_spec,
               double qa, double qr, const SolverFlags& sf, const QuadFlags& qf,
               const std::string& out) {
  MeasurePtr x = load_points(points_spec);
  MeasurePtr omega = load_omega(omega_spec, sf.seed, nullptr);
  json e = energy_json(x.get(), omega.get(), qa, qr, qf.build());

  auto field = [&](const char* key) {
    return e.contains(key) ? e[key].dump() : std::string("n/a");
  };
  std::cout << "V=" << field("attraction") << " W=" << field("repulsion")
            << " E=" << field("total") << " Esym=" << field("symmetrized")
            << " Ehat=" << field("fourier") << "\n";

  if (!out.empty()) {
    json report;
    report["schema"] = 1;
    report["command"] = "energy";
    report["points"] = points_spec;
    report["omega"] = omega_spec;
    report["qa"] = qa;
    report["qr"] = qr;
    report["energy"] = e;
    write_report(out + "_report.json", report);
  }
  return 0;
}

int cmd_tile(const std::string& omega_spec, int n, const std::string& rule,
             uint64_t seed, const std::string& out) {
  if (n < 1) die("n must be >= 1");
  MeasurePtr omega = load_omega(omega_spec, seed, nullptr);
  mq_tiling* traw = nullptr;
  check(mq_tiling_build(omega.get(), n, &traw), "tiling");
  TilingPtr tiling(traw);

  std::string tiles_path = out + "_tiles.csv";
  check(mq_tiling_write_csv(tiling.get(), tiles_path.c_str()), tiles_path);
  mq_measure* praw = nullptr;
  check(mq_tiling_points(tiling.get(),
                         rule == "centroid" ? MQ_RULE_MASS_CENTROID : MQ_RULE_CENTER,
                         &praw),
        "tiling points");
  MeasurePtr points(praw);
  std::string points_path = out + "_points.csv";
  check(mq_measure_write_csv(points.get(), points_path.c_str()), points_path);

  std::vector<int> counts(static_cast<size_t>(mq_tiling_size(tiling.get())) + 1);
  int nc = mq_tiling_axis_counts(tiling.get(), counts.data(),
                                 static_cast<int>(counts.size()));
  std::cout << "tiles=" << mq_tiling_size(tiling.get())
            << " n_tilde=" << mq_tiling_n_tilde(tiling.get()) << " counts=";
  for (int i = 0; i < nc; ++i) std::cout << (i ? "," : "") << counts[i];
  std::cout << "\n";
  return 0;
}

int cmd_tv(const std::string& points_spec, const std::string& omega_spec,
           const std::string& method, double h, const std::string& kernel) {
  mq_tv_estimate tv{};
  if (method == "grid") {
    if (omega_spec.empty()) die("--method grid needs --omega");
    MeasurePtr omega = load_omega(omega_spec, 0, nullptr);
    check(mq_grid_tv(omega.get(), &tv), "grid tv");
  } else {
    if (points_spec.empty()) die("--points is required");
    MeasurePtr x = load_points(points_spec);
    if (method == "pointdiff") {
      check(mq_pointdiff_tv(x.get(), &tv), "pointdiff tv");
    } else {
      double bw = h > 0.0 ? h
                          : mq_bandwidth_schedule(mq_particles_count(x.get()),
                                                  mq_measure_dim(x.get()));
      check(mq_kernel_tv(x.get(), bw,
                         kernel == "gaussian" ? MQ_KERNEL_GAUSSIAN
                                              : MQ_KERNEL_TRIANGULAR,
                         &tv),
            "kernel tv");
    }
  }
  if (tv.infinite) {
    std::cout << "inf\n";
  } else {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", tv.value);
    std::cout << buf << "\n";
  }
  return 0;
}

int cmd_gridsolve(const std::string& omega_spec, double q,
                  const std::string& lambdas_csv, const SolverFlags& sf,
                  const std::string& out) {
  Timer timer;
  MeasurePtr w = load_omega(omega_spec, sf.seed, nullptr);
  if (mq_measure_kind(w.get()) != MQ_MEASURE_GRID)
    die("gridsolve needs a grid datum");
  int cells[2] = {0, 0};
  double lo[2], hi[2];
  check(mq_grid_shape(w.get(), cells, lo, hi), "grid shape");

  std::vector<double> lambdas;
  size_t pos = 0;
  while (pos <= lambdas_csv.size()) {
    size_t comma = lambdas_csv.find(',', pos);
    std::string field = lambdas_csv.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      lambdas.push_back(std::stod(field));
    } catch (...) {
      die("bad --lambdas entry '" + field + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }

  json report;
  report["schema"] = 1;
  report["command"] = "gridsolve";
  report["omega"] = omega_spec;
  report["q"] = q;
  report["cells"] = cells[0];
  json runs = json::array();
  bool all_converged = true;

  for (size_t k = 0; k < lambdas.size(); ++k) {
    mq_solver_config cfg = sf.build();
    cfg.lambda = lambdas[k];
    cfg.tv_method = MQ_TV_NONE;  // grid TV is built into the grid objective
    mq_measure* uraw = nullptr;
    mq_trace* traw = nullptr;
    mq_status s = mq_minimize_grid(w.get(), q, &cfg, &uraw, &traw);
    if (s != MQ_OK && s != MQ_ERR_NOT_CONVERGED)
      die(std::string("gridsolve: ") + mq_status_name(s) + " (" + mq_last_error() +
          ")");
    MeasurePtr u(uraw);
    TracePtr trace(traw);
    all_converged = all_converged && mq_trace_converged(trace.get());

    std::vector<double> values(cells[0]);
    check(mq_grid_values(u.get(), values.data()), "grid values");
    std::string upath = out + "_u" + std::to_string(k) + ".csv";
    std::string text = "# grid dim=1 cells=" + std::to_string(cells[0]) +
                       " lo=" + std::to_string(lo[0]) + " hi=" +
                       std::to_string(hi[0]) + "\n";
    char buf[40];
    double umax = 0.0;
    for (double v : values) {
      std::snprintf(buf, sizeof(buf), "%.17g\n", v);
      text += buf;
      umax = std::max(umax, v);
    }
    write_text(upath, text);

    mq_tv_estimate tv{};
    check(mq_grid_tv(u.get(), &tv), "grid tv");
    json run;
    run["lambda"] = lambdas[k];
    run["u_csv"] = upath;
    run["max_u"] = umax;
    run["grid_tv"] = tv.value;
    run["solver"] = trace_summary(trace.get());
    runs.push_back(run);
    std::cout << "lambda=" << lambdas[k] << " max_u=" << umax
              << " grid_tv=" << tv.value << " ("
              << mq_trace_termination(trace.get()) << ")\n";
  }
  report["runs"] = runs;
  report["timing_ms"] = timer.ms();
  write_report(out + "_report.json", report);
  return all_converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"measure quantization by attraction-repulsion energies"};
  app.require_subcommand(1);

  // quantize
  std::string omega_spec, out = "mq";
  int n = 16;
  double qa = 1.5, qr = 1.5;
  SolverFlags sf;
  QuadFlags qf;
  auto* quantize = app.add_subcommand("quantize", "minimize E_N against a datum");
  quantize->add_option("--omega", omega_spec, "datum: builtin:NAME, csv, or pgm")
      ->required();
  quantize->add_option("--n", n, "number of points")->required();
  quantize->add_option("--qa", qa, "attraction exponent in [1,2]");
  quantize->add_option("--qr", qr, "repulsion exponent in [1,2]");
  sf.attach(quantize);
  qf.attach(quantize);
  quantize->add_option("--out", out, "output prefix");

  // dither
  std::string image;
  std::string dout = "dither";
  int dn = 256;
  double dqa = 1.5, dqr = 1.5;
  SolverFlags dsf;
  auto* dither = app.add_subcommand("dither", "stipple a PGM image");
  dither->add_option("--image", image, "input PGM (P2 or P5)")->required();
  dither->add_option("--n", dn, "number of points")->required();
  dither->add_option("--qa", dqa, "attraction exponent");
  dither->add_option("--qr", dqr, "repulsion exponent");
  dsf.attach(dither);
  dither->add_option("--out", dout, "output prefix");

  // energy
  std::string epoints, eomega, eout;
  double eqa = 1.0, eqr = 1.0;
  SolverFlags esf;
  QuadFlags eqf;
  auto* energy = app.add_subcommand("energy", "evaluate V, W, E, Esym, Ehat");
  energy->add_option("--points", epoints, "points CSV or inline 1D list")->required();
  energy->add_option("--omega", eomega, "datum")->required();
  energy->add_option("--qa", eqa, "attraction exponent");
  energy->add_option("--qr", eqr, "repulsion exponent");
  esf.attach(energy);
  eqf.attach(energy);
  energy->add_option("--out", eout, "optional report prefix");

  // tile
  std::string tomega, trule = "center", tout = "tile";
  int tn = 16;
  uint64_t tseed = 0;
  auto* tile = app.add_subcommand("tile", "equal-mass tiling and its points");
  tile->add_option("--omega", tomega, "datum (grid)")->required();
  tile->add_option("--n", tn, "number of tiles")->required();
  tile->add_option("--rule", trule, "representative point rule: center, centroid")
      ->check(CLI::IsMember({"center", "centroid"}));
  tile->add_option("--seed", tseed, "seed for builtin data");
  tile->add_option("--out", tout, "output prefix");

  // tv
  std::string vpoints, vomega, vmethod = "pointdiff", vkernel = "triangular";
  double vh = -1.0;
  auto* tv = app.add_subcommand("tv", "discrete total variation");
  tv->add_option("--points", vpoints, "points CSV or inline 1D list");
  tv->add_option("--omega", vomega, "grid datum (for --method grid)");
  tv->add_option("--method", vmethod, "kernel, pointdiff, or grid")
      ->check(CLI::IsMember({"kernel", "pointdiff", "grid"}));
  tv->add_option("--h", vh, "kernel bandwidth");
  tv->add_option("--kernel", vkernel, "triangular or gaussian")
      ->check(CLI::IsMember({"triangular", "gaussian"}));

  // gridsolve
  std::string gomega, glambdas = "0", gout = "gridsolve";
  double gq = 1.0;
  SolverFlags gsf;
  auto* gridsolve = app.add_subcommand("gridsolve", "regularized grid minimizer");
  gridsolve->add_option("--omega", gomega, "grid datum")->required();
  gridsolve->add_option("--q", gq, "power exponent");
  gridsolve->add_option("--lambdas", glambdas, "comma-separated lambda sweep");
  gsf.attach(gridsolve);
  gridsolve->add_option("--out", gout, "output prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "mq: " << e.what() << "\n";
    return 1;
  }

  try {
    if (quantize->parsed()) return cmd_quantize(omega_spec, n, qa, qr, sf, qf, out);
    if (dither->parsed()) return cmd_dither(image, dn, dqa, dqr, dsf, dout);
    if (energy->parsed())
      return cmd_energy(epoints, eomega, eqa, eqr, esf, eqf, eout);
    if (tile->parsed()) return cmd_tile(tomega, tn, trule, tseed, tout);
    if (tv->parsed()) return cmd_tv(vpoints, vomega, vmethod, vh, vkernel);
    if (gridsolve->parsed())
      return cmd_gridsolve(gomega, gq, glambdas, gsf, gout);
  } catch (const std::exception& e) {
    die(e.what());
  }
  return 1;
}
