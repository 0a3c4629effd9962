// Command-line driver for the orthogonal-extension toolkit.

#include "oe/selfcheck.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

using namespace oe;

std::vector<NamedMethod> parse_methods(const std::string& methods_csv,
                                       const std::string& t_csv) {
  std::vector<int> ts;
  {
    std::stringstream ss(t_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) ts.push_back(std::stoi(tok));
    }
  }
  if (ts.empty()) ts = {1, 5, 10};
  std::vector<NamedMethod> out;
  std::stringstream ss(methods_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "ls")
      out.push_back({"ls", {EstimatorKind::LS, 0}});
    else if (tok == "twicing")
      out.push_back({"twicing", {EstimatorKind::Twicing, 0}});
    else if (tok == "at")
      out.push_back({"at", {EstimatorKind::AT, 0}});
    else if (tok == "family")
      for (int t : ts)
        out.push_back({"family_t" + std::to_string(t), {EstimatorKind::Family, t}});
    else if (!tok.empty())
      throw ConfigError("unknown method '" + tok + "' (use ls|twicing|at|family)");
  }
  if (out.empty()) throw ConfigError("no estimator methods selected");
  return out;
}

std::vector<double> parse_levels(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

int cmd_bias_variance(const BiasVarianceConfig& cfg) {
  const auto rows = run_bias_variance(cfg);
  std::cout << "estimator,level,bias,rmse,variance,trials,stderr_bias\n";
  for (const auto& r : rows)
    std::cout << r.estimator << ',' << detail::fmt_g17(r.level) << ',' << detail::fmt_g17(r.bias)
              << ',' << detail::fmt_g17(r.rmse) << ',' << detail::fmt_g17(r.variance) << ','
              << r.trials << ',' << detail::fmt_g17(r.stderr_bias) << '\n';
  if (!cfg.out_csv.empty()) std::cerr << "wrote " << cfg.out_csv << "\n";
  return 0;
}

int cmd_phantom(const PhantomConfig& cfg) {
  const PhantomResult res = run_phantom_recon(cfg);
  std::cout << "mean relative perturbation ||B_l - A_l|| / ||A_l||: "
            << res.perturbation_per_l.mean() << "\n";
  std::cout << "subunit error, homolog: " << res.homolog_subunit_error << "\n";
  for (const auto& m : res.methods)
    std::cout << "subunit error, " << m.name << ": " << m.subunit_error << "\n";
  if (!cfg.out_dir.empty()) std::cerr << "wrote " << cfg.out_dir << "/\n";
  return 0;
}

int cmd_expand(const std::string& in, double c, double r, int sym_order, int threads,
               const std::string& out) {
  const VolumeGrid vol = read_volume(in);
  const BasisSpec basis = truncation(c, r);
  ExpandDiagnostics diag;
  CoefficientSet coef = expand(vol, basis, &diag, threads);
  if (sym_order > 1) coef = symmetry_mask(coef, sym_order);
  write_coefficient_set(out, coef);
  std::cerr << "expanded " << in << " (L = " << basis.L
            << ", max parity residual = " << diag.parity_residual.maxCoeff() << ") -> " << out
            << "\n";
  return 0;
}

int cmd_autocorr(const std::string& in_coef, const std::string& in_cov, double c, double r,
                 const std::string& out) {
  AutocorrelationSet acorr;
  if (!in_coef.empty()) {
    acorr = rank_truncate(autocorr_from_coeffs(read_coefficient_set(in_coef)));
  } else if (!in_cov.empty()) {
    const BasisSpec basis = truncation(c, r);
    acorr = rank_truncate(autocorr_from_covariance(read_covariance_slice(in_cov), basis));
  } else {
    throw ConfigError("autocorr: provide --in (coefficients) or --covslice");
  }
  write_autocorrelation_set(out, acorr);
  std::cerr << "wrote " << out << "\n";
  return 0;
}

int cmd_estimate(const std::string& homolog_path, const std::string& acorr_path,
                 const std::string& method, int t, const std::string& out) {
  const CoefficientSet homolog = read_coefficient_set(homolog_path);
  const AutocorrelationSet acorr = read_autocorrelation_set(acorr_path);
  EstimatorMethod m{EstimatorKind::LS, 0};
  if (method == "ls")
    m = {EstimatorKind::LS, 0};
  else if (method == "twicing")
    m = {EstimatorKind::Twicing, 0};
  else if (method == "at")
    m = {EstimatorKind::AT, 0};
  else if (method == "family")
    m = {EstimatorKind::Family, t};
  else
    throw ConfigError("estimate: unknown method '" + method + "'");
  write_coefficient_set(out, estimate_coefficients(homolog, acorr, m));
  std::cerr << "wrote " << out << "\n";
  return 0;
}

int cmd_synthesize(const std::string& in, int n, double voxel_size, int threads,
                   const std::string& out) {
  const CoefficientSet coef = read_coefficient_set(in);
  double imag_resid = 0;
  const VolumeGrid vol = synthesize(coef, n, voxel_size, &imag_resid, threads);
  write_volume(out, vol);
  std::cerr << "wrote " << out << " (imaginary residual " << imag_resid << ")\n";
  return 0;
}

int cmd_fcr(const std::string& a, const std::string& b, double shell_width, int threads,
            const std::string& out) {
  const VolumeGrid v1 = read_volume(a);
  const VolumeGrid v2 = read_volume(b);
  const double w = shell_width > 0 ? shell_width : 1.0 / v1.n;
  const FcrCurve curve = fcr(v1, v2, w, threads);
  std::ostringstream os;
  os << "shell_k,fcr\n";
  for (Index i = 0; i < curve.shell_k.size(); ++i)
    os << detail::fmt_g17(curve.shell_k(i)) << ',' << detail::fmt_g17(curve.value(i)) << '\n';
  std::cout << os.str();
  if (!out.empty()) {
    auto f = detail::open_out(out);
    f << os.str();
  }
  for (int s : curve.skipped_shells) std::cerr << "skipped empty shell " << s << "\n";
  return 0;
}

int cmd_selftest(int threads, bool full, std::uint64_t seed) {
  CheckScale sc;
  sc.threads = threads;
  sc.seed = seed;
  sc.scratch_dir = "selftest_scratch";
  if (!full) sc.mc_trials = 30000;  // reduced; tolerances scale with measured SE
  const auto results = run_acceptance_checks(sc, std::cout);
  int failures = 0;
  for (const auto& r : results)
    if (!r.pass) ++failures;
  std::cout << (failures == 0 ? "selftest: all checks passed\n"
                              : "selftest: " + std::to_string(failures) + " check(s) FAILED\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orthogonal extension toolkit: homology estimation from autocorrelation data"};
  app.require_subcommand(1);

  // bias-variance
  BiasVarianceConfig bv;
  std::string bv_levels = "0.001,0.003,0.01,0.03,0.1,0.3";
  std::string bv_methods = "ls,twicing,at,family";
  std::string bv_ts = "1,5,10";
  std::string bv_field = "real";
  auto* sb = app.add_subcommand("bias-variance", "Haar-prior Monte Carlo bias/RMSE study");
  sb->add_option("--dim", bv.dim, "matrix dimension D");
  sb->add_option("--trials", bv.trials, "Monte Carlo trials per level");
  sb->add_option("--levels", bv_levels, "comma-separated relative perturbation levels in (0,1)");
  sb->add_option("--seed", bv.seed, "RNG seed");
  sb->add_option("--method", bv_methods, "comma-separated: ls,twicing,at,family");
  sb->add_option("--t", bv_ts, "comma-separated family orders");
  sb->add_option("--field", bv_field, "real|complex");
  sb->add_option("--condition", bv.condition, "singular-value spread of the fixed factor");
  sb->add_option("--threads", bv.threads, "worker threads (0 = all)");
  sb->add_option("--out", bv.out_csv, "output CSV path");

  // phantom
  PhantomConfig ph;
  std::string ph_methods = "ls,twicing,at";
  std::string ph_ts;
  auto* sp = app.add_subcommand("phantom", "phantom homology reconstruction experiment");
  sp->add_option("--preset", ph.preset, "phantom preset (mickey)");
  sp->add_option("--phantom-file", ph.phantom_file, "phantom parameter file (overrides preset)");
  sp->add_option("--n", ph.n, "grid side");
  sp->add_option("--c", ph.c, "bandlimit (cycles/voxel)");
  sp->add_option("--R", ph.R, "support radius (voxels)");
  sp->add_option("--voxel-size", ph.voxel_size, "voxel size");
  sp->add_option("--sym-order", ph.sym_order, "cyclic symmetry order");
  sp->add_option("--method", ph_methods, "comma-separated estimators");
  sp->add_option("--t", ph_ts, "comma-separated family orders");
  sp->add_option("--mask-scale", ph.mask_scale, "subunit mask dilation");
  sp->add_option("--shell-width", ph.shell_width, "FCR shell width (0 = 1/n)");
  sp->add_option("--threads", ph.threads, "worker threads (0 = all)");
  sp->add_option("--out", ph.out_dir, "output directory");

  // expand
  std::string ex_in, ex_out;
  double ex_c = 0.5, ex_r = 14.0;
  int ex_sym = 1, ex_threads = 0;
  auto* se = app.add_subcommand("expand", "expand a volume into basis coefficients");
  se->add_option("--in", ex_in, "input .vol")->required();
  se->add_option("--c", ex_c, "bandlimit");
  se->add_option("--R", ex_r, "support radius");
  se->add_option("--sym-order", ex_sym, "cyclic symmetry order");
  se->add_option("--threads", ex_threads, "worker threads (0 = all)");
  se->add_option("--out", ex_out, "output .coef")->required();

  // autocorr
  std::string ac_in, ac_cov, ac_out;
  double ac_c = 0.5, ac_r = 14.0;
  auto* sa = app.add_subcommand("autocorr",
                                "autocorrelation matrices from coefficients or a covariance slice");
  sa->add_option("--in", ac_in, "input .coef");
  sa->add_option("--covslice", ac_cov, "input .covslice");
  sa->add_option("--c", ac_c, "bandlimit (covslice path)");
  sa->add_option("--R", ac_r, "support radius (covslice path)");
  sa->add_option("--out", ac_out, "output .acorr")->required();

  // estimate
  std::string es_homolog, es_acorr, es_method = "at", es_out;
  int es_t = 10;
  auto* ses = app.add_subcommand("estimate", "estimate coefficients from homolog + autocorrelation");
  ses->add_option("--homolog", es_homolog, "homolog .coef")->required();
  ses->add_option("--acorr", es_acorr, "autocorrelation .acorr")->required();
  ses->add_option("--method", es_method, "ls|twicing|at|family");
  ses->add_option("--t", es_t, "family order");
  ses->add_option("--out", es_out, "output .coef")->required();

  // synthesize
  std::string sy_in, sy_out;
  int sy_n = 32, sy_threads = 0;
  double sy_voxel = 1.0;
  auto* ssy = app.add_subcommand("synthesize", "render coefficients onto a voxel grid");
  ssy->add_option("--in", sy_in, "input .coef")->required();
  ssy->add_option("--n", sy_n, "grid side");
  ssy->add_option("--voxel-size", sy_voxel, "voxel size");
  ssy->add_option("--threads", sy_threads, "worker threads (0 = all)");
  ssy->add_option("--out", sy_out, "output .vol")->required();

  // fcr
  std::string fc_a, fc_b, fc_out;
  double fc_w = 0.0;
  int fc_threads = 0;
  auto* sf = app.add_subcommand("fcr", "Fourier cross resolution of two volumes");
  sf->add_option("--a", fc_a, "first .vol")->required();
  sf->add_option("--b", fc_b, "second .vol")->required();
  sf->add_option("--shell-width", fc_w, "shell width in cycles/voxel (0 = 1/n)");
  sf->add_option("--threads", fc_threads, "worker threads (0 = all)");
  sf->add_option("--out", fc_out, "optional output CSV");

  // selftest
  int st_threads = 0;
  bool st_full = false;
  std::uint64_t st_seed = 0;
  auto* st = app.add_subcommand("selftest", "run the acceptance checks (reduced trial counts)");
  st->add_option("--threads", st_threads, "worker threads (0 = all)");
  st->add_option("--seed", st_seed, "offset all Monte Carlo streams (verdicts are seed-stable)");
  st->add_flag("--full", st_full, "full acceptance-scale trial counts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sb->parsed()) {
      bv.levels = parse_levels(bv_levels);
      bv.methods = parse_methods(bv_methods, bv_ts);
      if (bv_field == "real")
        bv.field = Field::Real;
      else if (bv_field == "complex")
        bv.field = Field::Complex;
      else
        throw ConfigError("--field must be real or complex");
      return cmd_bias_variance(bv);
    }
    if (sp->parsed()) {
      ph.methods = parse_methods(ph_methods, ph_ts.empty() ? "10" : ph_ts);
      return cmd_phantom(ph);
    }
    if (se->parsed()) return cmd_expand(ex_in, ex_c, ex_r, ex_sym, ex_threads, ex_out);
    if (sa->parsed()) return cmd_autocorr(ac_in, ac_cov, ac_c, ac_r, ac_out);
    if (ses->parsed()) return cmd_estimate(es_homolog, es_acorr, es_method, es_t, es_out);
    if (ssy->parsed()) return cmd_synthesize(sy_in, sy_n, sy_voxel, sy_threads, sy_out);
    if (sf->parsed()) return cmd_fcr(fc_a, fc_b, fc_w, fc_threads, fc_out);
    if (st->parsed()) return cmd_selftest(st_threads, st_full, st_seed);
  } catch (const oe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
