#pragma once
// Reproducible experiment drivers: the Haar-prior Monte Carlo used for the
// bias/variance study, and the phantom homology reconstruction.
//
// Monte Carlo model: the unknown is A = F V with a fixed full-rank factor F
// and V Haar on the orthogonal/unitary group, the homolog is B = A - E with
// E fixed, and every estimator sees (B, C = F F*). Trials are decomposed
// into fixed chunks with per-trial seeds and merged pairwise, so results do
// not depend on the thread count.

#include "oe/archive.hpp"
#include "oe/estimators.hpp"
#include "oe/orthogonal_extension.hpp"
#include "oe/parallel.hpp"
#include "oe/volume.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace oe {

struct NamedMethod {
  std::string name;
  EstimatorMethod method;
};

inline std::vector<NamedMethod> default_bias_variance_methods() {
  return {{"ls", {EstimatorKind::LS, 0}},
          {"twicing", {EstimatorKind::Twicing, 0}},
          {"at", {EstimatorKind::AT, 0}},
          {"family_t1", {EstimatorKind::Family, 1}},
          {"family_t5", {EstimatorKind::Family, 5}},
          {"family_t10", {EstimatorKind::Family, 10}}};
}

// F = Q1 diag(s) Q2* with the given singular values.
template <class S>
Mat<S> factor_with_singvals(const RealVec& svals, std::uint64_t seed) {
  const Index d = svals.size();
  const Mat<S> q1 = haar_orthogonal<S>(d, derive_seed(seed, 0xA1));
  const Mat<S> q2 = haar_orthogonal<S>(d, derive_seed(seed, 0xA2));
  return q1 * svals.template cast<S>().asDiagonal() * q2.adjoint();
}

// Geometric singular value spread condition..1.
template <class S>
Mat<S> spread_factor(Index dim, double condition, std::uint64_t seed) {
  RealVec s(dim);
  for (Index i = 0; i < dim; ++i)
    s(i) = dim > 1 ? std::pow(condition, double(dim - 1 - i) / double(dim - 1)) : 1.0;
  return factor_with_singvals<S>(s, seed);
}

// Fixed perturbation with a seeded Gaussian direction and prescribed
// relative size ||E|| / ||A|| (note ||A|| = ||F|| for every Haar draw).
template <class S>
Mat<S> fixed_perturbation(const Mat<S>& f, double level, std::uint64_t seed) {
  NormalSampler g(derive_seed(seed, 0xE0));
  Mat<S> e = gaussian_matrix<S>(f.rows(), f.cols(), g);
  return e * S(level * f.norm() / e.norm());
}

template <class S>
struct McStats {
  std::vector<Mat<S>> sum_delta;  // per method: sum over trials of (Ahat - A)
  std::vector<double> sum_sq;     // per method: sum of ||Ahat - A||_F^2
  long trials = 0;

  Mat<S> mean_delta(size_t i) const { return sum_delta[i] / double(trials); }
  double bias_norm(size_t i) const { return mean_delta(i).norm(); }
  double mse(size_t i) const { return sum_sq[i] / double(trials); }
  double rmse(size_t i) const { return std::sqrt(mse(i)); }
  double variance(size_t i) const {
    const double b = bias_norm(i);
    return mse(i) - b * b;
  }
  double stderr_bias(size_t i) const { return std::sqrt(variance(i) / double(trials)); }
};

// Run `trials` Haar draws for a fixed (F, E) pair and a list of estimators.
template <class S>
McStats<S> run_haar_mc(const Mat<S>& f, const Mat<S>& e,
                       const std::vector<EstimatorMethod>& methods, long trials,
                       std::uint64_t seed, int threads) {
  const Index d = f.rows();
  const Mat<S> c = f * f.adjoint();
  const Mat<S> fp = psd_factor(c, d);
  const auto cs = correction_spectrum(c);

  std::vector<RealVec> gains(methods.size());
  for (size_t i = 0; i < methods.size(); ++i) {
    switch (methods[i].kind) {
      case EstimatorKind::AT: gains[i] = cs.W; break;
      case EstimatorKind::Family:
        gains[i] = detail::geometric_partial_sum(cs.T, methods[i].t);
        break;
      default: gains[i] = RealVec();
    }
  }

  auto chunk_fn = [&](std::size_t begin, std::size_t end) {
    McStats<S> acc;
    acc.sum_delta.assign(methods.size(), Mat<S>::Zero(d, d));
    acc.sum_sq.assign(methods.size(), 0.0);
    for (std::size_t t = begin; t < end; ++t) {
      const Mat<S> v = haar_orthogonal<S>(d, derive_seed(seed, t));
      const Mat<S> a = f * v;
      const Mat<S> b = a - e;
      const Mat<S> m = b.adjoint() * fp;
      const auto sv = svd(m);
      const Mat<S> als = fp * (sv.V * sv.U.adjoint());
      const Mat<S> resid = als - b;
      for (size_t i = 0; i < methods.size(); ++i) {
        Mat<S> ahat;
        switch (methods[i].kind) {
          case EstimatorKind::LS: ahat = als; break;
          case EstimatorKind::Twicing: ahat = 2.0 * als - b; break;
          default:
            ahat = b + cs.U * (gains[i].template cast<S>().asDiagonal() * (cs.U.adjoint() * resid));
        }
        const Mat<S> delta = ahat - a;
        acc.sum_delta[i] += delta;
        acc.sum_sq[i] += delta.squaredNorm();
      }
      ++acc.trials;
    }
    return acc;
  };
  auto partials = map_chunks<McStats<S>>(std::size_t(trials), 512, threads, chunk_fn);
  return pairwise_combine(std::move(partials), [&](McStats<S>& x, McStats<S>& y) {
    McStats<S> z;
    z.sum_delta.resize(methods.size());
    z.sum_sq.resize(methods.size());
    for (size_t i = 0; i < methods.size(); ++i) {
      z.sum_delta[i] = x.sum_delta[i] + y.sum_delta[i];
      z.sum_sq[i] = x.sum_sq[i] + y.sum_sq[i];
    }
    z.trials = x.trials + y.trials;
    return z;
  });
}

struct BiasVarianceConfig {
  int dim = 10;
  long trials = 10000;
  std::vector<double> levels = {0.001, 0.003, 0.01, 0.03, 0.1, 0.3};
  std::uint64_t seed = 1;
  Field field = Field::Real;
  std::vector<NamedMethod> methods = default_bias_variance_methods();
  double condition = 10.0;
  int threads = 0;
  std::string out_csv;  // empty = no file
};

struct BiasVarianceRow {
  std::string estimator;
  double level = 0;
  double bias = 0;
  double rmse = 0;
  double variance = 0;
  long trials = 0;
  double stderr_bias = 0;
};

namespace detail {

template <class S>
std::vector<BiasVarianceRow> bias_variance_rows(const BiasVarianceConfig& cfg) {
  if (cfg.dim < 1 || cfg.trials < 1) throw ConfigError("bias-variance: counts must be >= 1");
  for (double lv : cfg.levels)
    if (!(lv > 0.0 && lv < 1.0))
      throw ConfigError("bias-variance: perturbation levels must lie in (0, 1)");
  const Mat<S> f = spread_factor<S>(cfg.dim, cfg.condition, cfg.seed);
  std::vector<EstimatorMethod> methods;
  for (const auto& nm : cfg.methods) methods.push_back(nm.method);

  std::vector<std::vector<BiasVarianceRow>> per_level(cfg.levels.size());
  for (size_t li = 0; li < cfg.levels.size(); ++li) {
    const Mat<S> e = fixed_perturbation(f, cfg.levels[li], derive_seed(cfg.seed, 0xB0 + li));
    const auto stats =
        run_haar_mc<S>(f, e, methods, cfg.trials, derive_seed(cfg.seed, 0xC0 + li), cfg.threads);
    for (size_t i = 0; i < methods.size(); ++i) {
      BiasVarianceRow row;
      row.estimator = cfg.methods[i].name;
      row.level = cfg.levels[li];
      row.bias = stats.bias_norm(i);
      row.rmse = stats.rmse(i);
      row.variance = stats.variance(i);
      row.trials = stats.trials;
      row.stderr_bias = stats.stderr_bias(i);
      per_level[li].push_back(row);
    }
  }
  // estimator-major order
  std::vector<BiasVarianceRow> rows;
  for (size_t i = 0; i < cfg.methods.size(); ++i)
    for (size_t li = 0; li < cfg.levels.size(); ++li) rows.push_back(per_level[li][i]);
  return rows;
}

}  // namespace detail

inline std::vector<BiasVarianceRow> run_bias_variance(const BiasVarianceConfig& cfg) {
  const auto rows = cfg.field == Field::Real ? detail::bias_variance_rows<Real>(cfg)
                                             : detail::bias_variance_rows<Complex>(cfg);
  if (!cfg.out_csv.empty()) {
    std::vector<std::vector<double>> cells;
    std::vector<std::string> labels;
    for (const auto& r : rows) {
      labels.push_back(r.estimator);
      cells.push_back({r.level, r.bias, r.rmse, r.variance, double(r.trials), r.stderr_bias});
    }
    write_csv(cfg.out_csv, "estimator,level,bias,rmse,variance,trials,stderr_bias", cells,
              &labels);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Phantom homology experiment: build a truth volume (preset plus unknown
// subunit) and a homolog (preset without it), form the clean degree-wise
// autocorrelations from the truth coefficients, reconstruct with each
// estimator, and score against the basis-projected truth. Clean Gram
// matrices stand in for the infinite clean-image limit; image formation is
// out of scope here.

struct PhantomConfig {
  std::string preset = "mickey";
  std::string phantom_file;  // optional: overrides the preset
  int n = 32;
  double c = 0.5;
  double R = 14.0;
  double voxel_size = 1.0;
  int sym_order = 1;
  std::vector<NamedMethod> methods = {{"ls", {EstimatorKind::LS, 0}},
                                      {"twicing", {EstimatorKind::Twicing, 0}},
                                      {"at", {EstimatorKind::AT, 0}}};
  double mask_scale = 1.5;
  double shell_width = 0.0;  // 0 -> 1/n
  int threads = 0;
  std::string out_dir;  // empty = no files
};

struct PhantomMethodResult {
  std::string name;
  double subunit_error = 0;   // masked relative error vs projected truth
  FcrCurve fcr_subunit;       // FCR of the mask-weighted volumes
  FcrCurve fcr_full;          // FCR of the full volumes
};

struct PhantomResult {
  std::vector<PhantomMethodResult> methods;
  double homolog_subunit_error = 0;
  FcrCurve homolog_fcr_subunit;
  FcrCurve homolog_fcr_full;
  RealVec perturbation_per_l;  // ||B_l - A_l|| / ||A_l||
  RealVec parity_residual;
};

struct PhantomDefinition {
  EllipsoidPhantom truth;
  EllipsoidPhantom homolog;
  EllipsoidPhantom mask;
};

inline PhantomDefinition read_phantom_file(const std::string& path) {
  auto is = detail::open_in(path);
  detail::TokenReader tr(is);
  tr.expect("oe.phantom");
  if (tr.integer() != 1) throw IoError("phantom file: unsupported version");
  auto read_list = [&](const char* key) {
    tr.expect(key);
    const long count = tr.integer();
    EllipsoidPhantom list;
    for (long i = 0; i < count; ++i) {
      Ellipsoid e;
      for (int j = 0; j < 3; ++j) e.center(j) = tr.number();
      for (int j = 0; j < 3; ++j) e.semi_axes(j) = tr.number();
      for (int r = 0; r < 3; ++r)
        for (int cc = 0; cc < 3; ++cc) e.rotation(r, cc) = tr.number();
      e.density = tr.number();
      list.push_back(e);
    }
    return list;
  };
  PhantomDefinition def;
  def.truth = read_list("truth");
  def.homolog = read_list("homolog");
  def.mask = read_list("mask");
  tr.expect("end");
  return def;
}

inline PhantomResult run_phantom_recon(const PhantomConfig& cfg) {
  PhantomDefinition def;
  if (!cfg.phantom_file.empty()) {
    def = read_phantom_file(cfg.phantom_file);
  } else if (cfg.preset == "mickey") {
    def.truth = phantom_mickey_truth();
    def.homolog = phantom_mickey_homolog();
    def.mask = phantom_mickey_nose_mask(cfg.mask_scale);
  } else {
    throw ConfigError("phantom: unknown preset '" + cfg.preset + "'");
  }

  const BasisSpec basis = truncation(cfg.c, cfg.R);
  if (basis.L < 2) throw ConfigError("phantom: basis too small (L < 2); increase c or R");
  const double shell_width = cfg.shell_width > 0.0 ? cfg.shell_width : 1.0 / cfg.n;

  const VolumeGrid truth_vol = render_phantom(def.truth, cfg.n, cfg.voxel_size);
  const VolumeGrid homolog_vol = render_phantom(def.homolog, cfg.n, cfg.voxel_size);
  const VolumeGrid mask_vol = render_phantom(def.mask, cfg.n, cfg.voxel_size);

  ExpandDiagnostics diag;
  CoefficientSet truth_coef = expand(truth_vol, basis, &diag, cfg.threads);
  CoefficientSet homolog_coef = expand(homolog_vol, basis, nullptr, cfg.threads);
  if (cfg.sym_order > 1) {
    truth_coef = symmetry_mask(truth_coef, cfg.sym_order);
    homolog_coef = symmetry_mask(homolog_coef, cfg.sym_order);
  }

  PhantomResult result;
  result.parity_residual = diag.parity_residual;
  result.perturbation_per_l = RealVec::Zero(basis.L + 1);
  for (int l = 0; l <= basis.L; ++l) {
    const double denom = std::max(truth_coef.coeff[size_t(l)].norm(), 1e-300);
    result.perturbation_per_l(l) =
        (homolog_coef.coeff[size_t(l)] - truth_coef.coeff[size_t(l)]).norm() / denom;
  }

  const AutocorrelationSet acorr = rank_truncate(autocorr_from_coeffs(truth_coef));

  const VolumeGrid truth_proj = synthesize(truth_coef, cfg.n, cfg.voxel_size, nullptr, cfg.threads);
  const VolumeGrid homolog_proj =
      synthesize(homolog_coef, cfg.n, cfg.voxel_size, nullptr, cfg.threads);
  auto masked = [&](const VolumeGrid& v) {
    VolumeGrid out = v;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] *= mask_vol.data[i];
    return out;
  };
  const VolumeGrid truth_masked = masked(truth_proj);
  result.homolog_subunit_error = masked_relative_error(homolog_proj, truth_proj, mask_vol);
  result.homolog_fcr_subunit = fcr(masked(homolog_proj), truth_masked, shell_width, cfg.threads);
  result.homolog_fcr_full = fcr(homolog_proj, truth_proj, shell_width, cfg.threads);

  std::vector<CoefficientSet> est_coefs;
  std::vector<VolumeGrid> recons;
  for (const auto& nm : cfg.methods) {
    const CoefficientSet est = estimate_coefficients(homolog_coef, acorr, nm.method);
    const VolumeGrid recon = synthesize(est, cfg.n, cfg.voxel_size, nullptr, cfg.threads);
    PhantomMethodResult mr;
    mr.name = nm.name;
    mr.subunit_error = masked_relative_error(recon, truth_proj, mask_vol);
    mr.fcr_subunit = fcr(masked(recon), truth_masked, shell_width, cfg.threads);
    mr.fcr_full = fcr(recon, truth_proj, shell_width, cfg.threads);
    result.methods.push_back(mr);
    est_coefs.push_back(est);
    recons.push_back(recon);
  }

  if (!cfg.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const std::string d = cfg.out_dir + "/";
    write_volume(d + "truth.vol", truth_vol);
    write_volume(d + "truth_proj.vol", truth_proj);
    write_volume(d + "homolog.vol", homolog_vol);
    write_volume(d + "homolog_proj.vol", homolog_proj);
    write_volume(d + "mask.vol", mask_vol);
    write_coefficient_set(d + "truth.coef", truth_coef);
    write_coefficient_set(d + "homolog.coef", homolog_coef);
    write_autocorrelation_set(d + "clean.acorr", acorr);
    auto fcr_csv = [&](const std::string& name, const FcrCurve& c) {
      std::vector<std::vector<double>> cells;
      for (Index i = 0; i < c.shell_k.size(); ++i) cells.push_back({c.shell_k(i), c.value(i)});
      write_csv(d + "fcr_" + name + ".csv", "shell_k,fcr", cells);
    };
    fcr_csv("homolog", result.homolog_fcr_subunit);
    fcr_csv("full_homolog", result.homolog_fcr_full);
    for (size_t i = 0; i < cfg.methods.size(); ++i) {
      write_coefficient_set(d + "est_" + cfg.methods[i].name + ".coef", est_coefs[i]);
      write_volume(d + "recon_" + cfg.methods[i].name + ".vol", recons[i]);
      fcr_csv(cfg.methods[i].name, result.methods[i].fcr_subunit);
      fcr_csv("full_" + cfg.methods[i].name, result.methods[i].fcr_full);
    }
    auto os = detail::open_out(d + "report.txt");
    os << "phantom homology experiment\n";
    const std::string label = cfg.phantom_file.empty()
                                  ? cfg.preset
                                  : std::filesystem::path(cfg.phantom_file).filename().string();
    os << "preset " << label << " n " << cfg.n
       << " c " << detail::fmt_g17(cfg.c) << " R " << detail::fmt_g17(cfg.R) << " L " << basis.L
       << "\n";
    os << "subunit_error homolog " << detail::fmt_g17(result.homolog_subunit_error) << "\n";
    for (const auto& mr : result.methods)
      os << "subunit_error " << mr.name << " " << detail::fmt_g17(mr.subunit_error) << "\n";
    os << "mean_perturbation ";
    os << detail::fmt_g17(result.perturbation_per_l.mean()) << "\n";
  }
  return result;
}

}  // namespace oe
