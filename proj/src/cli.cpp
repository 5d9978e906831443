#include "qconvex/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "qconvex/conditions.hpp"
#include "qconvex/convexify.hpp"
#include "qconvex/io.hpp"
#include "qconvex/losses.hpp"
#include "qconvex/oracle.hpp"

namespace qconvex {
namespace {

namespace fs = std::filesystem;

constexpr const char* kAxisNote =
    "Axis convention: row index = x (increasing downward), column index = y.\n"
    "Formats: CSV ('H,W' header, then H rows of W values, 17 significant digits, lossless);\n"
    "PGM P2/P5 with maxval <= 255 (read as value/maxval, written as round(255*clamp(u,0,1)), lossy).";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Options {
  std::string input;
  std::string output;
  std::string report;
  std::string history;
  std::string format;
  std::string input_kind = "mask";
  std::string loss = "2nd";
  std::string shape = "star";
  std::string method = "cgpm-2nd";
  std::string outdir;
  int order = 2;
  std::optional<double> tolerance;
  std::optional<double> delta;
  std::optional<std::size_t> t_max;
  double eps = 1e-12;
  std::uint64_t seed = 0;
  std::size_t size = 8;
  std::size_t shape_size = 128;
  double sharpness = 1.0;
  std::vector<double> gammas{0.25, 0.5, 0.75};
  bool compat_no_chain = false;
  LossConfig loss_cfg;
  ConditionConfig cond_cfg;
  CgpmConfig cgpm_cfg;
};

std::optional<FieldFormat> chosen_format(const Options& o) {
  if (o.format.empty()) return std::nullopt;
  return parse_format(o.format);
}

void add_loss_flags(CLI::App* cmd, Options& o, const char* delta_help) {
  LossConfig& cfg = o.loss_cfg;
  cmd->add_option("--radius", cfg.radius, "Window radius r in pixels")->capture_default_str();
  cmd->add_option("--eps-sigmoid", cfg.eps_sigmoid, "Soft indicator temperature")->capture_default_str();
  cmd->add_option("--delta", o.delta, delta_help);
  cmd->add_option("--eps-grad", cfg.eps_g, "Gradient magnitude smoothing")->capture_default_str();
  cmd->add_option("--border", cfg.border, "Frame width excluded from the sums")->capture_default_str();
}

void add_cgpm_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--eta", o.cgpm_cfg.eta, "Step size")->capture_default_str();
  cmd->add_option("--lambda", o.cgpm_cfg.lambda, "Convexity weight")->capture_default_str();
  cmd->add_option("--logit-clamp", o.cgpm_cfg.logit_clamp, "Logit clamp")->capture_default_str();
  cmd->add_flag("--compat-no-chain", o.compat_no_chain,
                "Feed grad_v L straight into the logit update (no sigmoid chain rule)");
}

CgpmConfig finish_cgpm(Options& o, LossKind kind) {
  CgpmConfig cfg = o.cgpm_cfg;
  cfg.loss = o.loss_cfg;
  cfg.loss_kind = kind;
  cfg.chain_rule = !o.compat_no_chain;
  cfg.t_max = o.t_max.value_or(100);
  return cfg;
}

std::string level_summary(const ScalarField& u, std::span<const double> gammas, double tol) {
  std::ostringstream s;
  const auto levels = brute_force_per_level(u, gammas, tol);
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    s << "level gamma=" << fmt(gammas[k]) << " brute_force_count=" << levels[k].count;
    try {
      const HullDeficit d = hull_deficit(u, gammas[k]);
      s << " set_area=" << d.set_area << " hull_area=" << d.hull_area
        << " hull_deficit=" << fmt(d.deficit);
    } catch (const EmptySetError&) {
      s << " set_area=0 hull_deficit=empty";
    }
    s << "\n";
  }
  return s.str();
}

int cmd_check(Options& o, std::ostream& out) {
  if (o.order < 0 || o.order > 2) throw CLI::ValidationError("--order", "must be 0, 1 or 2");
  ConditionConfig cfg = o.cond_cfg;
  cfg.radius = o.loss_cfg.radius;
  cfg.border = o.loss_cfg.border;
  cfg.eps_g = o.loss_cfg.eps_g;
  cfg.delta = o.loss_cfg.delta;
  cfg.tolerance = o.tolerance.value_or(o.order == 0 ? kExactTolerance : kGeometryTolerance);

  const ScalarField u = read_field(o.input, chosen_format(o));
  const ViolationReport r = o.order == 0   ? check_zero_order(u, cfg)
                            : o.order == 1 ? check_first_order(u, cfg)
                                           : check_second_order(u, cfg);
  std::ostringstream rep;
  rep << "input: " << o.input << "\n"
      << "size: " << u.height() << "x" << u.width() << "\n"
      << "order: " << o.order << "\n"
      << "radius: " << fmt(cfg.radius) << "\n"
      << "delta: " << fmt(cfg.delta) << "\n"
      << "border: " << cfg.border << "\n"
      << "tolerance: " << fmt(cfg.tolerance) << "\n"
      << "count: " << r.count << "\n"
      << "max_violation: " << fmt(r.max_violation) << "\n"
      << level_summary(u, o.gammas, kExactTolerance)
      << "verdict: " << (r.holds() ? "holds" : "violated") << "\n";
  out << rep.str();
  if (!o.report.empty()) write_text(o.report, rep.str());
  if (!o.output.empty()) write_field(o.output, r.magnitude, chosen_format(o));
  return r.holds() ? kExitOk : kExitViolated;
}

int cmd_loss(Options& o, std::ostream& out) {
  const LossKind kind = parse_loss_kind(o.loss);
  const ScalarField u = read_field(o.input, chosen_format(o));
  const LossResult l = loss(kind, u, o.loss_cfg);
  const ScalarField g = loss_gradient(kind, u, o.loss_cfg);
  double gmax = 0.0;
  for (double v : g.values()) gmax = std::max(gmax, std::abs(v));
  out << "loss: " << to_string(kind) << "\n"
      << "value: " << fmt(l.value) << "\n"
      << "max_abs_gradient: " << fmt(gmax) << "\n";
  if (!o.output.empty()) write_field(o.output, g, chosen_format(o));
  return kExitOk;
}

int cmd_gradcheck(Options& o, std::ostream& out) {
  if (o.size < 6) throw CLI::ValidationError("--size", "must be at least 6");
  const LossKind kind = parse_loss_kind(o.loss);
  const ScalarField u = random_field(o.seed, o.size, o.size);
  const GradientCheck gc = gradient_check(kind, u, o.loss_cfg);
  constexpr double kLimit = 1e-5;
  out << "loss: " << to_string(kind) << "\n"
      << "seed: " << o.seed << "\n"
      << "size: " << o.size << "\n"
      << "checked: " << gc.checked << "\n"
      << "excluded_near_kink: " << gc.excluded << "\n"
      << "max_rel_error: " << fmt(gc.max_rel_error) << "\n"
      << "verdict: " << (gc.max_rel_error <= kLimit ? "pass" : "fail") << "\n";
  return gc.max_rel_error <= kLimit ? kExitOk : kExitViolated;
}

int cmd_convexify0(Options& o, std::ostream& out) {
  const ScalarField u = read_field(o.input, chosen_format(o));
  if (!u.is_mask()) throw IoError(o.input + ": values must lie in [0,1]");
  const std::size_t t_max = o.t_max.value_or(100000);
  const ConvexifyResult r = midpoint_convexify(u, o.loss_cfg.radius, t_max, o.eps);
  out << "sweeps: " << r.trace.iterations << "\n"
      << "final_linf_step: " << fmt(r.trace.final_linf_step) << "\n";
  if (!o.output.empty()) write_field(o.output, r.field, chosen_format(o));
  return kExitOk;
}

std::string history_csv(const ConvexifyTrace& trace) {
  std::string s = "iteration,objective\n";
  for (std::size_t k = 0; k < trace.objective_history.size(); ++k)
    s += std::to_string(k + 1) + "," + fmt(trace.objective_history[k]) + "\n";
  return s;
}

int cmd_cgpm(Options& o, std::ostream& out) {
  const LossKind kind = parse_loss_kind(o.loss);
  const ScalarField in = read_field(o.input, chosen_format(o));
  ScalarField logits;
  if (o.input_kind == "logits") {
    logits = in;
  } else if (o.input_kind == "mask") {
    if (!in.is_mask()) throw IoError(o.input + ": mask values must lie in [0,1]");
    logits = mask_to_logits(in);
  } else {
    throw CLI::ValidationError("--input-kind", "must be mask or logits");
  }
  const CgpmConfig cfg = finish_cgpm(o, kind);
  const ConvexifyResult r = cgpm(logits, cfg);
  out << "loss: " << to_string(kind) << "\n"
      << "iterations: " << r.trace.iterations << "\n"
      << "final_objective: "
      << (r.trace.objective_history.empty() ? "n/a" : fmt(r.trace.objective_history.back())) << "\n"
      << "final_linf_step: " << fmt(r.trace.final_linf_step) << "\n";
  if (!o.output.empty()) write_field(o.output, r.field, chosen_format(o));
  if (!o.history.empty()) write_text(o.history, history_csv(r.trace));
  return kExitOk;
}

std::string metrics_line(const char* stage, const ScalarField& u) {
  const BinaryMask set = threshold(u, 0.5);
  std::string s = std::string(stage) + ",0.5,";
  if (set.count() == 0) return s + "empty,0,0,0\n";
  const HullDeficit d = hull_deficit(set);
  return s + fmt(d.deficit) + "," + std::to_string(d.hull_area) + "," +
         std::to_string(d.set_area) + "," + std::to_string(count_components(set)) + "\n";
}

int cmd_demo(Options& o, std::ostream& out) {
  const ShapeKind kind = parse_shape_kind(o.shape);
  const fs::path dir = o.outdir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + o.outdir + "'");

  const ShapeSpec spec = default_shape(kind, o.shape_size, o.shape_size, o.sharpness);
  const ScalarField before = make_shape(spec, o.shape_size, o.shape_size);

  ConvexifyResult r;
  if (o.method == "convexify0") {
    r = midpoint_convexify(before, o.loss_cfg.radius, o.t_max.value_or(100000), o.eps);
  } else if (o.method == "cgpm-1st" || o.method == "cgpm-2nd") {
    const LossKind lk = o.method == "cgpm-1st" ? LossKind::FirstOrder : LossKind::SecondOrder;
    r = cgpm(mask_to_logits(before), finish_cgpm(o, lk));
  } else {
    throw CLI::ValidationError("--method", "must be convexify0, cgpm-1st or cgpm-2nd");
  }

  const FieldFormat ff = o.format.empty() ? FieldFormat::Pgm : parse_format(o.format);
  const std::string ext = ff == FieldFormat::Pgm ? ".pgm" : ".csv";
  write_field(dir / ("before" + ext), before, ff);
  write_field(dir / ("after" + ext), r.field, ff);
  write_text(dir / "objective.csv", history_csv(r.trace));

  const double overlap = dice(threshold(before, 0.5), threshold(r.field, 0.5));
  std::string metrics = "stage,gamma,hull_deficit,hull_area,set_area,components\n";
  metrics += metrics_line("before", before);
  metrics += metrics_line("after", r.field);
  write_text(dir / "metrics.csv", metrics);

  out << "shape: " << to_string(kind) << "\n"
      << "method: " << o.method << "\n"
      << "iterations: " << r.trace.iterations << "\n"
      << "dice_at_0.5: " << fmt(overlap) << "\n"
      << metrics;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{std::string("qconvex: quasi-concavity checks, convexity losses and convexification.\n") +
               kAxisNote};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qconvex 0.1.0");

  auto* check = app.add_subcommand("check", "Check a quasi-concavity condition (exit 0 holds, 1 violated)");
  check->add_option("--input", o.input, "Input mask")->required();
  check->add_option("--output", o.output, "Violation magnitude field");
  check->add_option("--report", o.report, "Also write the text report here");
  check->add_option("--order", o.order, "Condition order 0, 1 or 2")->capture_default_str();
  check->add_option("--tolerance", o.tolerance,
                    "Violation tolerance (default 1e-9 for order 0, 1e-3 otherwise)");
  check->add_option("--gamma-list", o.gammas, "Levels for the per-level summary")
      ->delimiter(',')
      ->capture_default_str();
  add_loss_flags(check, o, "Second-order margin (default 0)");
  check->add_option("--format", o.format, "pgm or csv (default: from extension)");

  auto* lossc = app.add_subcommand("loss", "Evaluate a convexity loss and its gradient");
  lossc->add_option("--input", o.input, "Input mask")->required();
  lossc->add_option("--output", o.output, "Gradient field");
  lossc->add_option("--loss", o.loss, "1st or 2nd")->capture_default_str();
  lossc->add_option("--format", o.format, "pgm or csv");

  auto* grad = app.add_subcommand("gradcheck", "Compare analytic gradients with central differences");
  grad->add_option("--seed", o.seed, "Random field seed")->capture_default_str();
  grad->add_option("--size", o.size, "Field side length (>= 6)")->capture_default_str();
  grad->add_option("--loss", o.loss, "1st or 2nd")->capture_default_str();

  auto* conv0 = app.add_subcommand("convexify0", "Local midpoint convexification");
  conv0->add_option("--input", o.input, "Input mask")->required();
  conv0->add_option("--output", o.output, "Convexified mask");
  conv0->add_option("--t-max", o.t_max, "Sweep cap (default 100000)");
  conv0->add_option("--eps", o.eps, "Stop when a sweep changes less than this")->capture_default_str();
  conv0->add_option("--format", o.format, "pgm or csv");

  auto* cg = app.add_subcommand("cgpm", "Unrolled proximal convexification in logit space");
  cg->add_option("--input", o.input, "Input mask or logits")->required();
  cg->add_option("--input-kind", o.input_kind, "mask or logits")->capture_default_str();
  cg->add_option("--output", o.output, "Convexified mask");
  cg->add_option("--history", o.history, "Objective history CSV");
  cg->add_option("--loss", o.loss, "1st or 2nd")->capture_default_str();
  cg->add_option("--t-max", o.t_max, "Iterations (default 100)");
  add_cgpm_flags(cg, o);
  cg->add_option("--format", o.format, "pgm or csv");

  auto* demo = app.add_subcommand("demo", "Convexify a synthetic shape and write before/after outputs");
  demo->add_option("--shape", o.shape,
                   "disk, ellipse, star, cross, l_shape, crescent or two_disks")->capture_default_str();
  demo->add_option("--method", o.method, "convexify0, cgpm-1st or cgpm-2nd")->capture_default_str();
  demo->add_option("--outdir", o.outdir, "Output directory")->required();
  demo->add_option("--size", o.shape_size, "Grid side length")->capture_default_str();
  demo->add_option("--sharpness", o.sharpness, "Sigmoid steepness of the shape")->capture_default_str();
  demo->add_option("--t-max", o.t_max, "Iteration cap (default 100 for cgpm, 100000 for convexify0)");
  demo->add_option("--eps", o.eps, "convexify0 stopping threshold")->capture_default_str();
  add_cgpm_flags(demo, o);
  demo->add_option("--format", o.format, "pgm (default) or csv");

  for (auto* cmd : {lossc, grad, conv0, cg, demo})
    add_loss_flags(cmd, o, "Second-order margin (default 1e-3)");
  for (auto* cmd : {lossc, grad, conv0, cg, demo, check}) cmd->footer(kAxisNote);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  o.loss_cfg.delta = o.delta.value_or(check->parsed() ? 0.0 : LossConfig{}.delta);

  try {
    if (check->parsed()) return cmd_check(o, out);
    if (lossc->parsed()) return cmd_loss(o, out);
    if (grad->parsed()) return cmd_gradcheck(o, out);
    if (conv0->parsed()) return cmd_convexify0(o, out);
    if (cg->parsed()) return cmd_cgpm(o, out);
    if (demo->parsed()) return cmd_demo(o, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const EmptySetError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qconvex
