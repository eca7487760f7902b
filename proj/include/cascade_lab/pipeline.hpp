#pragma once

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cascade_lab/cascade/integrator.hpp"
#include "cascade_lab/cascade/profiles.hpp"
#include "cascade_lab/io/config_io.hpp"
#include "cascade_lab/io/field_io.hpp"
#include "cascade_lab/io/manifest.hpp"
#include "cascade_lab/io/report_io.hpp"
#include "cascade_lab/io/trajectory_io.hpp"
#include "cascade_lab/regularity/analyze.hpp"
#include "cascade_lab/spectral/wavelet_basis.hpp"

namespace cascade_lab::pipeline {

enum ExitCode : int { kOk = 0, kDomain = 1, kInput = 2 };

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  }
}

inline int run_validate(const std::string& config_path, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    const auto cfg = io::load_simulation_config(config_path);
    const auto report = cascade::validate_tensor(cfg.cascade.tensor);
    for (const auto& v : report.violations) {
      out << (v.kind == cascade::Violation::Kind::symmetry ? "symmetry" : "cancellation") << " " << v.key.str() << " "
          << v.message << "\n";
    }
    if (!report.valid()) {
      out << report.violations.size() << " violation(s)\n";
      return static_cast<int>(kDomain);
    }
    cascade::check_config(cfg.cascade);
    out << "valid: " << cfg.cascade.tensor.size() << " entries\n";
    return static_cast<int>(kOk);
  });
}

inline int run_simulate(const std::string& config_path, std::optional<double> t_end, const std::string& out_path,
                        std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    io::Stopwatch clock;
    const auto cfg = io::load_simulation_config(config_path);
    cascade::check_config(cfg.cascade);
    const double te = t_end.value_or(cfg.t_end);
    const auto x0 = io::initial_state(cfg);
    const auto tr = cascade::integrate(cfg.cascade, x0, te, cfg.integrator);

    io::RunManifest m;
    m.subcommand = "simulate";
    m.inputs = {config_path};
    m.outputs = {out_path, io::sidecar_path(out_path)};
    m.config_digest = io::digest_files({config_path});
    m.parameters = {{"t_end", te}};
    io::write_text(out_path, io::trajectory_csv(tr));
    io::write_text(io::sidecar_path(out_path), io::trajectory_sidecar(tr, m.digest()).dump(2) + "\n");
    m.wall_time = clock.seconds();
    io::write_text(out_path + ".manifest.json", m.to_json().dump(2) + "\n");
    out << "status " << cascade::to_string(tr.status) << ", " << tr.samples.size() << " samples";
    if (tr.blowup_time_estimate) out << ", blowup_time_estimate " << io::format_double(*tr.blowup_time_estimate);
    out << "\n";
    return static_cast<int>(kOk);
  });
}

/// Writes a concentrating sequence as a trajectory file, like run_simulate.
inline int run_concentrating(const cascade::ConcentratingProfile& profile, const std::string& out_path,
                             std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    io::Stopwatch clock;
    const auto tr = cascade::concentrating_sequence(profile);
    io::RunManifest m;
    m.subcommand = "concentrating";
    m.outputs = {out_path, io::sidecar_path(out_path)};
    m.parameters = {{"lambda", profile.lambda},   {"alpha", profile.alpha},         {"n_min", profile.shells.first},
                    {"n_max", profile.shells.last}, {"width", profile.width},       {"amplitude", profile.amplitude},
                    {"time_scale", profile.time_scale}, {"samples", profile.samples}};
    io::write_text(out_path, io::trajectory_csv(tr));
    io::write_text(io::sidecar_path(out_path), io::trajectory_sidecar(tr, m.digest()).dump(2) + "\n");
    m.wall_time = clock.seconds();
    io::write_text(out_path + ".manifest.json", m.to_json().dump(2) + "\n");
    out << tr.samples.size() << " samples on [0, " << io::format_double(tr.samples.back().time()) << "]\n";
    return static_cast<int>(kOk);
  });
}

/// t_k = T (1 - 2^{-k}) for k = 1..count-2, plus 0 and T.
inline std::vector<double> geometric_times(double t0, double T, int count) {
  if (count < 2) throw DomainError("geometric cadence needs at least 2 times");
  std::vector<double> t{t0};
  for (int k = 1; k <= count - 2; ++k) t.push_back(t0 + (T - t0) * (1.0 - std::exp2(-k)));
  t.push_back(T);
  return t;
}

/// "" -> none; "geometric:N"; or a comma-separated list.
inline std::vector<double> parse_times(const std::string& spec, const cascade::CascadeTrajectory& tr) {
  std::vector<double> t;
  if (spec.empty()) return t;
  if (spec.rfind("geometric:", 0) == 0) {
    const int count = std::atoi(spec.c_str() + 10);
    return geometric_times(tr.samples.front().time(), tr.samples.back().time(), count);
  }
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = spec.find(',', pos);
    const std::string cell = spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size()) throw InputError("bad time '" + cell + "'");
    t.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return t;
}

inline int run_synthesize(const std::string& trajectory_path, const std::string& basis_path, const std::string& times_spec,
                          const std::string& out_dir, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    io::Stopwatch clock;
    const auto tr = io::read_trajectory(trajectory_path);
    const auto spec = io::parse_basis_spec(io::read_json(basis_path), "'" + basis_path + "'");
    const auto times = parse_times(times_spec, tr);
    for (double t : times) (void)io::state_at(tr, t);  // span check before any output
    const auto basis = spectral::build_wavelet_basis(spec);
    std::filesystem::create_directories(out_dir);

    io::RunManifest m;
    m.subcommand = "synthesize";
    m.inputs = {trajectory_path, basis_path};
    m.config_digest = io::digest_files({trajectory_path, io::sidecar_path(trajectory_path), basis_path});
    m.parameters = {{"times", times}, {"basis_id", basis.id()}};
    double worst = 0.0;
    std::vector<std::pair<std::string, double>> files;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const auto x = io::state_at(tr, times[k]);
      const auto u = spectral::synthesize_field(x, basis);
      const auto back = spectral::project_state(u, basis, x.shells());
      double e = 0.0;
      for (std::size_t q = 0; q < x.values().size(); ++q) e = std::max(e, std::abs(back.values()[q] - x.values()[q]));
      worst = std::max(worst, e);
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%03zu", k);
      const std::string stem = (std::filesystem::path(out_dir) / name).string();
      files.emplace_back(stem, e);
      io::write_field(stem, u, {{"basis_id", basis.id()}, {"roundtrip_error", e}, {"manifest_digest", m.digest()}});
      m.outputs.push_back(stem + ".bin");
      m.outputs.push_back(stem + ".json");
    }
    m.parameters["roundtrip_max_error"] = worst;
    m.wall_time = clock.seconds();
    // The digest covers the parameter echo, which now includes the round-trip error; refresh the sidecars.
    for (const auto& [stem, e] : files) {
      auto side = io::read_json(stem + ".json");
      side["manifest_digest"] = m.digest();
      io::write_text(stem + ".json", side.dump(2) + "\n");
    }
    io::write_text((std::filesystem::path(out_dir) / "manifest.json").string(), m.to_json().dump(2) + "\n");
    out << times.size() << " snapshot(s), round-trip max error " << io::format_double(worst) << "\n";
    return static_cast<int>(kOk);
  });
}

inline std::vector<spectral::VectorField> load_snapshots(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw InputError("'" + dir + "' is not a directory");
  std::vector<std::string> sidecars;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto p = e.path();
    if (p.extension() == ".json" && p.filename() != "manifest.json") sidecars.push_back(p.string());
  }
  std::sort(sidecars.begin(), sidecars.end());
  std::vector<spectral::VectorField> snaps;
  for (const auto& s : sidecars) snaps.push_back(io::read_field(s));
  std::stable_sort(snaps.begin(), snaps.end(), [](const auto& a, const auto& b) { return a.time.value_or(0) < b.time.value_or(0); });
  return snaps;
}

inline int run_analyze(const std::string& snapshot_dir, const std::string& params_path, const std::string& out_path,
                       std::optional<int> workers, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    io::Stopwatch clock;
    auto cfg = io::parse_analysis_config(io::read_json(params_path), "'" + params_path + "'");
    if (workers) cfg.params.workers = *workers;
    const auto snaps = load_snapshots(snapshot_dir);
    if (snaps.size() < 3) throw DomainError("analysis needs at least 3 snapshots, found " + std::to_string(snaps.size()));
    const auto rep = regularity::analyze(snaps, cfg.params, cfg.j_min, cfg.j_max);

    io::RunManifest m;
    m.subcommand = "analyze";
    m.inputs = {snapshot_dir, params_path};
    std::vector<std::string> digest_inputs{params_path};
    for (const auto& e : std::filesystem::directory_iterator(snapshot_dir))
      if (e.path().filename() != "manifest.json") digest_inputs.push_back(e.path().string());
    std::sort(digest_inputs.begin() + 1, digest_inputs.end());
    m.config_digest = io::digest_files(digest_inputs);
    m.parameters = io::params_to_json(cfg.params);
    m.parameters["j_min"] = cfg.j_min;
    m.parameters["j_max"] = cfg.j_max;
    const std::string plot = out_path + ".plot.csv";
    m.outputs = {out_path, plot};
    io::write_text(out_path, io::report_to_json(rep, m.digest()).dump(2) + "\n");
    io::write_text(plot, "# manifest " + m.digest() + "\n" + io::report_plot_csv(rep));
    m.wall_time = clock.seconds();
    io::write_text(out_path + ".manifest.json", m.to_json().dump(2) + "\n");
    for (const auto& lv : rep.per_level) {
      out << "j=" << lv.j << " tiling=" << lv.tiling_count << " bad=" << lv.bad_count << " vitali=" << lv.vitali_count
          << " covering=" << lv.covering_count << "\n";
    }
    if (rep.fit) {
      out << "d_est " << io::format_double(rep.fit->d_est) << " residual " << io::format_double(rep.fit->residual)
          << " paper_bound " << io::format_double(rep.paper_bound) << "\n";
    } else {
      out << rep.fit_note << "; paper_bound " << io::format_double(rep.paper_bound) << "\n";
    }
    return static_cast<int>(kOk);
  });
}

}  // namespace cascade_lab::pipeline
