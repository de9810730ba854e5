#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "daflow/daflow.hpp"

namespace {

// Shared numeric flags; every subcommand that evaluates anything accepts the
// same set, seeded from DAFLOW_CONFIG when that points at a JSON file.
void add_config_flags(CLI::App* cmd, daflow::EvalConfig& cfg) {
  cmd->add_option("--abs-tol", cfg.abs_tol, "absolute tolerance");
  cmd->add_option("--rel-tol", cfg.rel_tol, "relative tolerance");
  cmd->add_option("--max-subdivisions", cfg.max_subdivisions,
                  "iteration budget for quadrature and integration");
  cmd->add_option("--tail-slack", cfg.tail_cutoff_slack,
                  "extra length added to improper-integral cutoffs");
  cmd->add_option("--guard", cfg.singularity_guard,
                  "minimum admissible distance from singular boundaries");
}

// Returns false only when the variable is set but unreadable or malformed.
bool load_config_from_env(daflow::EvalConfig& cfg) {
  const char* path = std::getenv("DAFLOW_CONFIG");
  if (path == nullptr || *path == '\0') return true;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "daflow: DAFLOW_CONFIG points at unreadable file " << path << "\n";
    return false;
  }
  try {
    cfg = daflow::Json::parse(in).get<daflow::EvalConfig>();
  } catch (const std::exception& e) {
    std::cerr << "daflow: DAFLOW_CONFIG file is not a valid config: " << e.what() << "\n";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical and exact-arithmetic toolkit for the inverse-flow construction"};
  app.require_subcommand(1);

  daflow::EvalConfig base_config;
  if (!load_config_from_env(base_config)) return 2;

  daflow::SibuyaOptions sibuya;
  daflow::HplotOptions hplot;
  daflow::VerifyOptions verify;
  daflow::SampleOptions sample;
  hplot.config = base_config;
  verify.config = base_config;
  sample.config = base_config;
  std::string manifest_path;

  CLI::App* cmd_sib = app.add_subcommand(
      "sibuya", "exact p-adic valuation table along k = p^j, with bound column");
  cmd_sib->add_option("--j-max,--jmax", sibuya.j_max, "largest exponent j (1..24)");
  cmd_sib->add_option("--prime,--p", sibuya.prime, "prime p (default 2)");
  cmd_sib->add_option("--c,--C", sibuya.c_values,
                      "radius constant(s) C; reports the first j violating "
                      "the growth bound (2-adic only)");
  cmd_sib->add_option("--output", sibuya.output_path, "CSV output path")->required();

  CLI::App* cmd_hp = app.add_subcommand("hplot", "sample H over both real branches");
  cmd_hp->add_option("--neg-lo", hplot.neg_lo, "left end of the negative branch");
  cmd_hp->add_option("--neg-hi", hplot.neg_hi, "right end of the negative branch");
  cmd_hp->add_option("--pos-lo", hplot.pos_lo, "left end of the positive branch");
  cmd_hp->add_option("--pos-hi", hplot.pos_hi, "right end of the positive branch");
  cmd_hp->add_option("--samples", hplot.samples, "points per branch");
  cmd_hp->add_option("--output", hplot.output_path, "CSV output path")->required();
  add_config_flags(cmd_hp, hplot.config);

  CLI::App* cmd_ver = app.add_subcommand(
      "verify", "compare the quadratic flow against the closed-form inverse on a grid");
  cmd_ver->add_option("--r2", verify.r2_grid, "initial-condition grid for y2(0)");
  cmd_ver->add_option("--x", verify.x_grid, "evaluation times");
  cmd_ver->add_option("--threshold", verify.threshold,
                      "largest admissible flow-vs-inverse discrepancy");
  cmd_ver->add_option("--output", verify.output_path, "CSV output path")->required();
  add_config_flags(cmd_ver, verify.config);

  CLI::App* cmd_samp = app.add_subcommand(
      "sample", "draw random polynomial systems and probe their existence intervals");
  cmd_samp->add_option("--dimension,--m", sample.dimension, "state dimension m");
  cmd_samp->add_option("--degree,--d", sample.degree, "total degree bound d");
  cmd_samp->add_option("--seed", sample.seed, "base RNG seed");
  cmd_samp->add_option("--count", sample.count, "number of systems");
  cmd_samp->add_option("--horizon", sample.horizon, "probe horizon on each side of 0");
  cmd_samp->add_option("--scale", sample.scale, "coefficient magnitude bound");
  cmd_samp->add_option("--output", sample.output_path, "JSONL output path")->required();
  add_config_flags(cmd_samp, sample.config);

  CLI::App* cmd_rr = app.add_subcommand("rerun", "replay a recorded run manifest");
  cmd_rr->add_option("manifest", manifest_path, "path to a .manifest.json file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_sib->parsed()) return daflow::cmd_sibuya(sibuya, std::cerr);
    if (cmd_hp->parsed()) return daflow::cmd_hplot(hplot, std::cerr);
    if (cmd_ver->parsed()) return daflow::cmd_verify(verify, std::cerr);
    if (cmd_samp->parsed()) return daflow::cmd_sample(sample, std::cerr);
    if (cmd_rr->parsed()) return daflow::cmd_rerun(manifest_path, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "daflow: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "daflow: no subcommand given\n";
  return 2;
}
