#pragma once
// Self-describing text archives for coefficient sets, autocorrelation sets
// and covariance slices, plus the raw volume format and CSV helpers.
//
// All floating-point values are written with 17 significant digits, which
// round-trips IEEE doubles exactly, so write -> read is the identity and
// repeated writes are byte-identical. Volumes are raw little-endian float32,
// z-slowest, with a small text sidecar for the grid shape.

#include "oe/autocorr.hpp"
#include "oe/volume.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace oe {

namespace detail {

inline std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void write_vector_line(std::ostream& os, const char* key, const RealVec& v) {
  os << key;
  for (Index i = 0; i < v.size(); ++i) os << ' ' << fmt_g17(v(i));
  os << '\n';
}

inline void write_matrix(std::ostream& os, const RealMat& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << fmt_g17(m(i, j));
    }
    os << '\n';
  }
}

class TokenReader {
 public:
  explicit TokenReader(std::istream& is) : is_(is) {}

  std::string word() {
    std::string w;
    if (!(is_ >> w)) throw IoError("archive: unexpected end of file");
    return w;
  }
  void expect(const std::string& key) {
    const std::string w = word();
    if (w != key) throw IoError("archive: expected '" + key + "', found '" + w + "'");
  }
  double number() {
    double x = 0;
    if (!(is_ >> x)) throw IoError("archive: malformed number");
    return x;
  }
  long integer() {
    long v = 0;
    if (!(is_ >> v)) throw IoError("archive: malformed integer");
    return v;
  }
  RealMat matrix(Index rows, Index cols) {
    RealMat m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = number();
    return m;
  }
  RealVec vector(Index size) {
    RealVec v(size);
    for (Index i = 0; i < size; ++i) v(i) = number();
    return v;
  }

 private:
  std::istream& is_;
};

inline void write_basis(std::ostream& os, const BasisSpec& b) {
  os << "basis.c " << fmt_g17(b.c) << "\n";
  os << "basis.R " << fmt_g17(b.R) << "\n";
  os << "basis.L " << b.L << "\n";
  os << "basis.S";
  for (int s : b.S) os << ' ' << s;
  os << '\n';
  for (int l = 0; l <= b.L; ++l) {
    os << "basis.roots." << l;
    for (double r : b.roots[size_t(l)]) os << ' ' << fmt_g17(r);
    os << '\n';
  }
}

inline BasisSpec read_basis(TokenReader& tr) {
  BasisSpec b;
  tr.expect("basis.c");
  b.c = tr.number();
  tr.expect("basis.R");
  b.R = tr.number();
  tr.expect("basis.L");
  b.L = int(tr.integer());
  tr.expect("basis.S");
  b.S.resize(size_t(b.L) + 1);
  for (int l = 0; l <= b.L; ++l) b.S[size_t(l)] = int(tr.integer());
  b.roots.resize(size_t(b.L) + 1);
  for (int l = 0; l <= b.L; ++l) {
    tr.expect("basis.roots." + std::to_string(l));
    b.roots[size_t(l)].resize(size_t(b.S[size_t(l)]) + 1);
    for (double& r : b.roots[size_t(l)]) r = tr.number();
  }
  return b;
}

inline std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw IoError("cannot open for writing: " + path);
  return os;
}

inline std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
  if (!is) throw IoError("cannot open for reading: " + path);
  return is;
}

}  // namespace detail

inline void write_coefficient_set(const std::string& path, const CoefficientSet& a) {
  validate_coefficient_set(a);
  auto os = detail::open_out(path);
  os << "oe.coef 1\n";
  os << "sym_order " << a.sym_order << "\n";
  detail::write_basis(os, a.basis);
  for (int l = 0; l <= a.basis.L; ++l) {
    const RealMat& m = a.coeff[size_t(l)];
    os << "block.l " << l << " rows " << m.rows() << " cols " << m.cols() << "\n";
    detail::write_matrix(os, m);
  }
  os << "end\n";
}

inline CoefficientSet read_coefficient_set(const std::string& path) {
  auto is = detail::open_in(path);
  detail::TokenReader tr(is);
  tr.expect("oe.coef");
  if (tr.integer() != 1) throw IoError("coef archive: unsupported version");
  CoefficientSet a;
  tr.expect("sym_order");
  a.sym_order = int(tr.integer());
  a.basis = detail::read_basis(tr);
  a.coeff.resize(size_t(a.basis.L) + 1);
  for (int l = 0; l <= a.basis.L; ++l) {
    tr.expect("block.l");
    if (tr.integer() != l) throw IoError("coef archive: block order mismatch");
    tr.expect("rows");
    const Index rows = tr.integer();
    tr.expect("cols");
    const Index cols = tr.integer();
    a.coeff[size_t(l)] = tr.matrix(rows, cols);
  }
  tr.expect("end");
  validate_coefficient_set(a);
  return a;
}

inline void write_autocorrelation_set(const std::string& path, const AutocorrelationSet& c) {
  validate_autocorrelation_set(c);
  auto os = detail::open_out(path);
  os << "oe.acorr 1\n";
  detail::write_basis(os, c.basis);
  for (int l = 0; l <= c.basis.L; ++l) {
    const RealMat& m = c.C[size_t(l)];
    os << "block.l " << l << " rank_cap " << c.rank_cap[size_t(l)] << " rows " << m.rows()
       << " cols " << m.cols() << "\n";
    detail::write_matrix(os, m);
  }
  os << "end\n";
}

inline AutocorrelationSet read_autocorrelation_set(const std::string& path) {
  auto is = detail::open_in(path);
  detail::TokenReader tr(is);
  tr.expect("oe.acorr");
  if (tr.integer() != 1) throw IoError("acorr archive: unsupported version");
  AutocorrelationSet c;
  c.basis = detail::read_basis(tr);
  c.C.resize(size_t(c.basis.L) + 1);
  c.rank_cap.resize(size_t(c.basis.L) + 1);
  for (int l = 0; l <= c.basis.L; ++l) {
    tr.expect("block.l");
    if (tr.integer() != l) throw IoError("acorr archive: block order mismatch");
    tr.expect("rank_cap");
    c.rank_cap[size_t(l)] = int(tr.integer());
    tr.expect("rows");
    const Index rows = tr.integer();
    tr.expect("cols");
    const Index cols = tr.integer();
    c.C[size_t(l)] = tr.matrix(rows, cols);
  }
  tr.expect("end");
  validate_autocorrelation_set(c);
  return c;
}

inline void write_covariance_slice(const std::string& path, const CovarianceSlice& s) {
  validate_covariance_slice(s);
  auto os = detail::open_out(path);
  os << "oe.covslice 1\n";
  os << "k.count " << s.k_nodes.size() << "\n";
  detail::write_vector_line(os, "k.nodes", s.k_nodes);
  detail::write_vector_line(os, "k.weights", s.k_weights);
  os << "psi.count " << s.psi_nodes.size() << "\n";
  detail::write_vector_line(os, "psi.nodes", s.psi_nodes);
  detail::write_vector_line(os, "psi.weights", s.psi_weights);
  for (Index p = 0; p < s.psi_nodes.size(); ++p) {
    os << "values.psi " << p << "\n";
    detail::write_matrix(os, s.values[size_t(p)]);
  }
  os << "end\n";
}

inline CovarianceSlice read_covariance_slice(const std::string& path) {
  auto is = detail::open_in(path);
  detail::TokenReader tr(is);
  tr.expect("oe.covslice");
  if (tr.integer() != 1) throw IoError("covslice: unsupported version");
  CovarianceSlice s;
  tr.expect("k.count");
  const Index nk = tr.integer();
  tr.expect("k.nodes");
  s.k_nodes = tr.vector(nk);
  tr.expect("k.weights");
  s.k_weights = tr.vector(nk);
  tr.expect("psi.count");
  const Index np = tr.integer();
  tr.expect("psi.nodes");
  s.psi_nodes = tr.vector(np);
  tr.expect("psi.weights");
  s.psi_weights = tr.vector(np);
  s.values.resize(size_t(np));
  for (Index p = 0; p < np; ++p) {
    tr.expect("values.psi");
    if (tr.integer() != p) throw IoError("covslice: value block order mismatch");
    s.values[size_t(p)] = tr.matrix(nk, nk);
  }
  tr.expect("end");
  validate_covariance_slice(s);
  return s;
}

// <name>.vol: raw float32 little-endian, z-slowest; <name>.vol.meta: text.
inline void write_volume(const std::string& path, const VolumeGrid& v) {
  validate_grid(v);
  {
    auto os = detail::open_out(path, /*binary=*/true);
    std::vector<float> buf(v.data.size());
    for (size_t i = 0; i < v.data.size(); ++i) buf[i] = float(v.data[i]);
    os.write(reinterpret_cast<const char*>(buf.data()),
             std::streamsize(buf.size() * sizeof(float)));
  }
  auto meta = detail::open_out(path + ".meta");
  meta << "oe.vol 1\n";
  meta << "n " << v.n << "\n";
  meta << "voxel_size " << detail::fmt_g17(v.voxel_size) << "\n";
}

inline VolumeGrid read_volume(const std::string& path) {
  VolumeGrid v;
  {
    auto meta = detail::open_in(path + ".meta");
    detail::TokenReader tr(meta);
    tr.expect("oe.vol");
    if (tr.integer() != 1) throw IoError("volume: unsupported version");
    tr.expect("n");
    v.n = int(tr.integer());
    tr.expect("voxel_size");
    v.voxel_size = tr.number();
  }
  auto is = detail::open_in(path, /*binary=*/true);
  const size_t count = size_t(v.n) * size_t(v.n) * size_t(v.n);
  std::vector<float> buf(count);
  is.read(reinterpret_cast<char*>(buf.data()), std::streamsize(count * sizeof(float)));
  if (size_t(is.gcount()) != count * sizeof(float))
    throw IoError("volume: file shorter than the grid in its sidecar");
  v.data.resize(count);
  for (size_t i = 0; i < count; ++i) v.data[i] = double(buf[i]);
  validate_grid(v);
  return v;
}

inline void write_csv(const std::string& path, const std::string& header,
                      const std::vector<std::vector<double>>& rows,
                      const std::vector<std::string>* row_labels = nullptr) {
  auto os = detail::open_out(path);
  os << header << "\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    if (row_labels != nullptr) os << (*row_labels)[i] << ',';
    for (size_t j = 0; j < rows[i].size(); ++j) {
      if (j) os << ',';
      os << detail::fmt_g17(rows[i][j]);
    }
    os << '\n';
  }
}

}  // namespace oe
