#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "daflow/config.hpp"
#include "daflow/errors.hpp"
#include "daflow/flow.hpp"
#include "daflow/inverse.hpp"
#include "daflow/poly.hpp"
#include "daflow/series.hpp"
#include "daflow/special.hpp"
#include "daflow/version.hpp"

namespace daflow {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form, independent of the global locale.
inline std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Options and their JSON forms (the manifest payload).

struct SibuyaOptions {
  unsigned j_max = 12;
  std::uint64_t prime = 2;
  std::vector<double> c_values;  // radius constants to report violation indices for
  std::string output_path;
};

struct HplotOptions {
  double neg_lo = -5.0;
  double neg_hi = -0.05;
  double pos_lo = 0.4;
  double pos_hi = 5.0;
  int samples = 200;  // per branch
  std::string output_path;
  EvalConfig config;
};

struct VerifyOptions {
  std::vector<double> r2_grid{-2.0, -1.0, -0.1, 0.1, 0.3};
  std::vector<double> x_grid{-1.0, -0.5, 0.5, 1.0, 2.0};
  double threshold = 1e-6;
  std::string output_path;
  EvalConfig config;
};

struct SampleOptions {
  int dimension = 2;
  int degree = 2;
  std::uint64_t seed = 0;
  int count = 10;
  double horizon = 1.0;
  double scale = 1.0;
  std::string output_path;
  EvalConfig config;
};

inline void to_json(Json& j, const EvalConfig& cfg) {
  j = Json{{"abs_tol", cfg.abs_tol},
           {"rel_tol", cfg.rel_tol},
           {"max_subdivisions", cfg.max_subdivisions},
           {"tail_cutoff_slack", cfg.tail_cutoff_slack},
           {"singularity_guard", cfg.singularity_guard}};
}

inline void from_json(const Json& j, EvalConfig& cfg) {
  j.at("abs_tol").get_to(cfg.abs_tol);
  j.at("rel_tol").get_to(cfg.rel_tol);
  j.at("max_subdivisions").get_to(cfg.max_subdivisions);
  j.at("tail_cutoff_slack").get_to(cfg.tail_cutoff_slack);
  j.at("singularity_guard").get_to(cfg.singularity_guard);
}

inline void to_json(Json& j, const SibuyaOptions& o) {
  j = Json{{"j_max", o.j_max},
           {"prime", o.prime},
           {"c_values", o.c_values},
           {"output_path", o.output_path}};
}

inline void from_json(const Json& j, SibuyaOptions& o) {
  j.at("j_max").get_to(o.j_max);
  j.at("prime").get_to(o.prime);
  j.at("c_values").get_to(o.c_values);
  j.at("output_path").get_to(o.output_path);
}

inline void to_json(Json& j, const HplotOptions& o) {
  j = Json{{"neg_lo", o.neg_lo}, {"neg_hi", o.neg_hi},
           {"pos_lo", o.pos_lo}, {"pos_hi", o.pos_hi},
           {"samples", o.samples}, {"output_path", o.output_path},
           {"config", o.config}};
}

inline void from_json(const Json& j, HplotOptions& o) {
  j.at("neg_lo").get_to(o.neg_lo);
  j.at("neg_hi").get_to(o.neg_hi);
  j.at("pos_lo").get_to(o.pos_lo);
  j.at("pos_hi").get_to(o.pos_hi);
  j.at("samples").get_to(o.samples);
  j.at("output_path").get_to(o.output_path);
  o.config = j.at("config").get<EvalConfig>();
}

inline void to_json(Json& j, const VerifyOptions& o) {
  j = Json{{"r2_grid", o.r2_grid},   {"x_grid", o.x_grid},
           {"threshold", o.threshold}, {"output_path", o.output_path},
           {"config", o.config}};
}

inline void from_json(const Json& j, VerifyOptions& o) {
  j.at("r2_grid").get_to(o.r2_grid);
  j.at("x_grid").get_to(o.x_grid);
  j.at("threshold").get_to(o.threshold);
  j.at("output_path").get_to(o.output_path);
  o.config = j.at("config").get<EvalConfig>();
}

inline void to_json(Json& j, const SampleOptions& o) {
  j = Json{{"dimension", o.dimension}, {"degree", o.degree},
           {"seed", o.seed},           {"count", o.count},
           {"horizon", o.horizon},     {"scale", o.scale},
           {"output_path", o.output_path}, {"config", o.config}};
}

inline void from_json(const Json& j, SampleOptions& o) {
  j.at("dimension").get_to(o.dimension);
  j.at("degree").get_to(o.degree);
  j.at("seed").get_to(o.seed);
  j.at("count").get_to(o.count);
  j.at("horizon").get_to(o.horizon);
  j.at("scale").get_to(o.scale);
  j.at("output_path").get_to(o.output_path);
  o.config = j.at("config").get<EvalConfig>();
}

// ---------------------------------------------------------------------------
// Shared output plumbing. Every command assembles its payloads in memory,
// then writes data, auxiliary summaries, and the manifest in one pass so a
// failed run never leaves a manifest pointing at stale data.

namespace detail {

inline std::filesystem::path with_suffix(const std::filesystem::path& base,
                                         const char* suffix) {
  std::filesystem::path p = base;
  p.replace_extension("");
  p += suffix;
  return p;
}

inline bool write_text_file(const std::filesystem::path& path, const std::string& content,
                            std::ostream& diag) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    diag << "error: cannot open " << path.string() << " for writing\n";
    return false;
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out.good()) {
    diag << "error: short write to " << path.string() << "\n";
    return false;
  }
  return true;
}

template <typename Options>
bool write_manifest(const char* subcommand, const Options& options,
                    const std::filesystem::path& output, std::ostream& diag) {
  Json manifest{{"tool", "daflow"},
                {"version", kVersion},
                {"subcommand", subcommand},
                {"options", options}};
  return write_text_file(with_suffix(output, ".manifest.json"), manifest.dump(2) + "\n",
                         diag);
}

inline const char* status_name(IntegrationStatus s) {
  switch (s) {
    case IntegrationStatus::reached_target: return "reached-target";
    case IntegrationStatus::blow_up: return "blow-up";
    case IntegrationStatus::step_failure: return "step-failure";
  }
  return "unknown";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// sibuya: exact valuation table along k = p^j, plus violation indices per C.

inline int cmd_sibuya(const SibuyaOptions& opts, std::ostream& diag) {
  if (opts.output_path.empty()) {
    diag << "sibuya: --output is required\n";
    return 2;
  }
  if (opts.j_max < 1 || opts.j_max > 24) {
    diag << "sibuya: --j-max must lie in [1, 24]\n";
    return 2;
  }
  if (!is_prime(opts.prime)) {
    diag << "sibuya: --prime must be prime\n";
    return 2;
  }
  for (double c : opts.c_values)
    if (!std::isfinite(c) || !(c > 0.0)) {
      diag << "sibuya: every --c must be positive and finite\n";
      return 2;
    }

  std::vector<SibuyaRow> rows;
  try {
    rows = sibuya_sperber_report(opts.j_max, opts.prime);
  } catch (const std::invalid_argument& e) {
    diag << "sibuya: " << e.what() << "\n";
    return 2;
  }

  std::string csv = "j,k,nu_p,bound_exponent,ln_abs_val_over_k\n";
  for (const SibuyaRow& r : rows) {
    csv += std::to_string(r.j);
    csv += ',';
    csv += std::to_string(r.k);
    csv += ',';
    csv += std::to_string(r.valuation);
    csv += ',';
    csv += std::to_string(r.bound_exponent);
    csv += ',';
    csv += format_double(r.log_norm_over_k);
    csv += '\n';
  }

  Json violations = Json::array();
  if (opts.prime == 2) {
    for (double c : opts.c_values) {
      Json entry{{"C", c}};
      try {
        entry["min_violating_j"] = min_violating_j(c);
      } catch (const convergence_error& e) {
        diag << "sibuya: " << e.what() << "\n";
        return 1;
      }
      violations.push_back(entry);
    }
  } else if (!opts.c_values.empty()) {
    diag << "sibuya: --c reporting is defined for the 2-adic table only\n";
    return 2;
  }
  Json summary{{"prime", opts.prime},
               {"j_max", opts.j_max},
               {"violations", violations}};

  const std::filesystem::path output(opts.output_path);
  if (!detail::write_text_file(output, csv, diag)) return 1;
  if (!detail::write_text_file(detail::with_suffix(output, ".summary.json"),
                               summary.dump(2) + "\n", diag))
    return 1;
  if (!detail::write_manifest("sibuya", opts, output, diag)) return 1;
  return 0;
}

// ---------------------------------------------------------------------------
// hplot: H sampled over one range per side of the excluded interval.

inline int cmd_hplot(const HplotOptions& opts, std::ostream& diag) {
  if (opts.output_path.empty()) {
    diag << "hplot: --output is required\n";
    return 2;
  }
  try {
    opts.config.validate();
  } catch (const std::invalid_argument& e) {
    diag << "hplot: " << e.what() << "\n";
    return 2;
  }
  if (opts.samples < 1) {
    diag << "hplot: --samples must be at least 1\n";
    return 2;
  }
  const double guard = opts.config.singularity_guard;
  if (!(opts.neg_lo <= opts.neg_hi) || !(opts.pos_lo <= opts.pos_hi)) {
    diag << "hplot: ranges must be ordered lo <= hi\n";
    return 2;
  }
  if (!(opts.neg_hi < -guard) || !(opts.pos_lo > kReciprocalE + guard)) {
    diag << "hplot: ranges must avoid the excluded interval [0, 1/e] and its guard\n";
    return 2;
  }

  std::string csv = "c,H\n";
  auto emit_branch = [&](double lo, double hi) {
    for (int i = 0; i < opts.samples; ++i) {
      const double frac =
          (opts.samples == 1) ? 0.0 : static_cast<double>(i) / (opts.samples - 1);
      const double c = lo + (hi - lo) * frac;
      const QuadratureResult r = eval_H(c, opts.config);
      csv += format_double(c);
      csv += ',';
      csv += format_double(r.value);
      csv += '\n';
    }
  };
  try {
    emit_branch(opts.neg_lo, opts.neg_hi);
    emit_branch(opts.pos_lo, opts.pos_hi);
  } catch (const std::exception& e) {
    diag << "hplot: evaluation failed: " << e.what() << "\n";
    return 1;
  }

  const std::filesystem::path output(opts.output_path);
  if (!detail::write_text_file(output, csv, diag)) return 1;
  if (!detail::write_manifest("hplot", opts, output, diag)) return 1;
  return 0;
}

// ---------------------------------------------------------------------------
// verify: flow-vs-inverse comparison over an (r2, x) grid.

inline int cmd_verify(const VerifyOptions& opts, std::ostream& diag) {
  if (opts.output_path.empty()) {
    diag << "verify: --output is required\n";
    return 2;
  }
  try {
    opts.config.validate();
  } catch (const std::invalid_argument& e) {
    diag << "verify: " << e.what() << "\n";
    return 2;
  }
  if (opts.r2_grid.empty() || opts.x_grid.empty()) {
    diag << "verify: grids must be nonempty\n";
    return 2;
  }
  for (double v : opts.r2_grid)
    if (!std::isfinite(v)) {
      diag << "verify: r2 grid contains a nonfinite value\n";
      return 2;
    }
  for (double v : opts.x_grid)
    if (!std::isfinite(v)) {
      diag << "verify: x grid contains a nonfinite value\n";
      return 2;
    }
  if (!std::isfinite(opts.threshold) || opts.threshold < 0.0) {
    diag << "verify: --threshold must be finite and >= 0\n";
    return 2;
  }

  const EvalConfig& cfg = opts.config;
  std::string csv = "r2,x,y1_flow,y1_closed,discrepancy,first_integral_drift,status\n";
  int failures = 0;
  for (double r2 : opts.r2_grid) {
    for (double x : opts.x_grid) {
      csv += format_double(r2);
      csv += ',';
      csv += format_double(x);
      csv += ',';
      std::string status;
      std::string numeric[4];
      const bool closed_form_ok = std::fabs(r2) > cfg.singularity_guard;
      if (closed_form_ok && !g_domain_contains(x, r2, cfg)) {
        status = "skipped";
      } else {
        try {
          const Trajectory traj = integrate(specific_system(), {0.0, r2}, x, cfg);
          if (traj.status == IntegrationStatus::blow_up) {
            status = "skipped";  // escape certifies the point sits outside D
          } else if (traj.status == IntegrationStatus::step_failure) {
            status = "error";
          } else {
            const double y1_flow = traj.state_at_end(x)[0];
            const double drift = first_integral_drift(traj, 0, 1);
            const double y1_closed =
                closed_form_ok ? eval_G_root(x, r2, cfg) : eval_G_ode(x, r2, cfg);
            const double disc = std::fabs(y1_flow - y1_closed);
            numeric[0] = format_double(y1_flow);
            numeric[1] = format_double(y1_closed);
            numeric[2] = format_double(disc);
            numeric[3] = format_double(drift);
            status = (disc <= opts.threshold) ? "ok" : "fail";
          }
        } catch (const domain_error&) {
          status = "skipped";
        } catch (const std::exception&) {
          status = "error";
        }
      }
      if (status == "fail" || status == "error") ++failures;
      csv += numeric[0];
      csv += ',';
      csv += numeric[1];
      csv += ',';
      csv += numeric[2];
      csv += ',';
      csv += numeric[3];
      csv += ',';
      csv += status;
      csv += '\n';
    }
  }

  const std::filesystem::path output(opts.output_path);
  if (!detail::write_text_file(output, csv, diag)) return 1;
  if (!detail::write_manifest("verify", opts, output, diag)) return 1;
  if (failures > 0) {
    diag << "verify: " << failures << " grid point(s) failed\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sample: random quadratic (or higher) systems probed for their existence
// interval around 0; one JSON line per system.

inline int cmd_sample(const SampleOptions& opts, std::ostream& diag) {
  if (opts.output_path.empty()) {
    diag << "sample: --output is required\n";
    return 2;
  }
  try {
    opts.config.validate();
  } catch (const std::invalid_argument& e) {
    diag << "sample: " << e.what() << "\n";
    return 2;
  }
  if (opts.dimension < 1 || opts.degree < 0 || opts.count < 0) {
    diag << "sample: need --dimension >= 1, --degree >= 0, --count >= 0\n";
    return 2;
  }
  if (!(opts.horizon > 0.0) || !std::isfinite(opts.horizon)) {
    diag << "sample: --horizon must be positive and finite\n";
    return 2;
  }
  if (!(opts.scale >= 0.0) || !std::isfinite(opts.scale)) {
    diag << "sample: --scale must be finite and >= 0\n";
    return 2;
  }
  if (opts.dimension < 2 || opts.degree < 2)
    diag << "sample: note: dimension >= 2 and degree >= 2 are needed before sampled "
            "systems can contain the quadratic inverse structure\n";

  std::string jsonl;
  for (int idx = 0; idx < opts.count; ++idx) {
    const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(idx);
    const PolySystem system =
        sample_system(opts.dimension, opts.degree, RngSeed{seed}, opts.scale);
    const std::vector<double> origin(static_cast<std::size_t>(opts.dimension), 0.0);
    const IntervalProbe probe =
        probe_interval(system, origin, opts.horizon, opts.config);

    Json coefficients = Json::array();
    for (int k = 0; k < system.dimension(); ++k)
      for (const auto& [alpha, value] : system.terms(k))
        coefficients.push_back(
            Json{{"equation", k}, {"exponents", alpha}, {"value", value}});
    Json line{{"index", idx},
              {"seed", seed},
              {"dimension", opts.dimension},
              {"degree", opts.degree},
              {"scale", opts.scale},
              {"coefficients", coefficients},
              {"interval_estimate",
               Json::array({probe.interval_estimate.first, probe.interval_estimate.second})},
              {"forward_status", detail::status_name(probe.forward.status)},
              {"backward_status", detail::status_name(probe.backward.status)}};
    jsonl += line.dump();
    jsonl += '\n';
  }

  const std::filesystem::path output(opts.output_path);
  if (!detail::write_text_file(output, jsonl, diag)) return 1;
  if (!detail::write_manifest("sample", opts, output, diag)) return 1;
  return 0;
}

// ---------------------------------------------------------------------------
// rerun: replay a recorded manifest; outputs are byte-identical because every
// input (flags, config, seeds) lives in the manifest.

inline int cmd_rerun(const std::string& manifest_file, std::ostream& diag) {
  std::ifstream in(manifest_file, std::ios::binary);
  if (!in) {
    diag << "rerun: cannot open manifest " << manifest_file << "\n";
    return 1;
  }
  Json manifest;
  try {
    manifest = Json::parse(in);
  } catch (const std::exception& e) {
    diag << "rerun: malformed manifest: " << e.what() << "\n";
    return 2;
  }
  try {
    const std::string sub = manifest.at("subcommand").get<std::string>();
    const Json& options = manifest.at("options");
    if (sub == "sibuya") return cmd_sibuya(options.get<SibuyaOptions>(), diag);
    if (sub == "hplot") return cmd_hplot(options.get<HplotOptions>(), diag);
    if (sub == "verify") return cmd_verify(options.get<VerifyOptions>(), diag);
    if (sub == "sample") return cmd_sample(options.get<SampleOptions>(), diag);
    diag << "rerun: unknown subcommand '" << sub << "'\n";
    return 2;
  } catch (const std::exception& e) {
    diag << "rerun: manifest is missing required fields: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace daflow
