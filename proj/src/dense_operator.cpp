#include "gapprox/dense_operator.hpp"

#include <algorithm>
#include <cmath>

#include "gapprox/linalg.hpp"

namespace gapprox {

namespace {

bool nearly_hermitian(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12;
}

void check_same_lattice(const DenseOperator& A, const DenseOperator& B) {
  if (A.lattice != B.lattice) throw LatticeMismatch("operators belong to different lattices");
}

}  // namespace

std::vector<std::int64_t> sub_offsets(const Lattice& lattice, const SiteSet& subset,
                                      const SiteSet& within) {
  // stride of each site of `within` in its Kronecker order
  std::vector<std::int64_t> stride(within.size());
  std::int64_t s = 1;
  for (int i = static_cast<int>(within.size()) - 1; i >= 0; --i) {
    stride[i] = s;
    s *= lattice.local_dim(within[i]);
  }
  std::vector<std::int64_t> sub_stride;
  sub_stride.reserve(subset.size());
  for (int x : subset) {
    auto it = std::lower_bound(within.begin(), within.end(), x);
    if (it == within.end() || *it != x)
      throw SupportNotContained("site not contained in covering support");
    sub_stride.push_back(stride[it - within.begin()]);
  }
  const std::int64_t dim = lattice.hilbert_dim(subset);
  std::vector<std::int64_t> off(dim, 0);
  std::vector<int> digit(subset.size(), 0);
  for (std::int64_t i = 0; i < dim; ++i) {
    std::int64_t o = 0;
    for (std::size_t k = 0; k < subset.size(); ++k) o += digit[k] * sub_stride[k];
    off[i] = o;
    for (int k = static_cast<int>(subset.size()) - 1; k >= 0; --k) {
      if (++digit[k] < lattice.local_dim(subset[k])) break;
      digit[k] = 0;
    }
  }
  return off;
}

DenseOperator make_operator(const Lattice& lattice, SiteSet support, Eigen::MatrixXcd mat) {
  if (!std::is_sorted(support.begin(), support.end()) ||
      std::adjacent_find(support.begin(), support.end()) != support.end())
    throw SupportNotContained("support must be strictly ascending");
  if (!support.empty() && (support.front() < 0 || support.back() >= lattice.num_sites()))
    throw SupportNotContained("support site outside lattice");
  const std::int64_t d = lattice.hilbert_dim(support);
  if (mat.rows() != d || mat.cols() != d)
    throw SupportNotContained("matrix dimension does not match support");
  DenseOperator op;
  op.support = std::move(support);
  op.hermitian = nearly_hermitian(mat);
  op.mat = std::move(mat);
  op.lattice = &lattice;
  return op;
}

DenseOperator identity_op(const Lattice& lattice, SiteSet support) {
  const std::int64_t d = lattice.hilbert_dim(support);
  return make_operator(lattice, std::move(support), Eigen::MatrixXcd::Identity(d, d));
}

DenseOperator zero_op(const Lattice& lattice, SiteSet support) {
  const std::int64_t d = lattice.hilbert_dim(support);
  return make_operator(lattice, std::move(support), Eigen::MatrixXcd::Zero(d, d));
}

DenseOperator embed(const DenseOperator& A, const SiteSet& target) {
  if (!is_subset(A.support, target))
    throw SupportNotContained("embed: support not contained in target");
  if (A.support == target) return A;
  const Lattice& lat = *A.lattice;
  const SiteSet rest = set_difference(target, A.support);
  const auto offS = sub_offsets(lat, A.support, target);
  const auto offR = sub_offsets(lat, rest, target);
  const std::int64_t dS = static_cast<std::int64_t>(offS.size());
  const std::int64_t dT = lat.hilbert_dim(target);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dT, dT);
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(offR.size()); ++k)
    for (std::int64_t j = 0; j < dS; ++j)
      for (std::int64_t i = 0; i < dS; ++i)
        out(offS[i] + offR[k], offS[j] + offR[k]) = A.mat(i, j);
  DenseOperator r;
  r.support = target;
  r.mat = std::move(out);
  r.lattice = A.lattice;
  r.hermitian = A.hermitian;
  return r;
}

DenseOperator embed_full(const DenseOperator& A) { return embed(A, A.lattice->all_sites()); }

DenseOperator partial_trace(const DenseOperator& A, const SiteSet& keep) {
  const Lattice& lat = *A.lattice;
  const SiteSet kept = set_intersection(A.support, keep);
  const SiteSet traced = set_difference(A.support, kept);
  if (traced.empty()) return A;
  const auto offK = sub_offsets(lat, kept, A.support);
  const auto offT = sub_offsets(lat, traced, A.support);
  const std::int64_t dK = static_cast<std::int64_t>(offK.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dK, dK);
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(offT.size()); ++k)
    for (std::int64_t j = 0; j < dK; ++j)
      for (std::int64_t i = 0; i < dK; ++i)
        out(i, j) += A.mat(offK[i] + offT[k], offK[j] + offT[k]);
  DenseOperator r;
  r.support = kept;
  r.mat = std::move(out);
  r.lattice = A.lattice;
  r.hermitian = A.hermitian;
  return r;
}

DenseOperator localize(const DenseOperator& A, const SiteSet& Y) {
  const SiteSet traced = set_difference(A.support, Y);
  if (traced.empty()) return A;
  DenseOperator r = partial_trace(A, Y);
  r.mat /= static_cast<double>(A.lattice->hilbert_dim(traced));
  return r;
}

double op_norm(const DenseOperator& A) {
  if (A.dim() == 0) return 0.0;
  if (A.hermitian) {
    Eigen::VectorXd w = eigvals_hermitian(A.mat);
    return std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
  }
  return spectral_norm(A.mat);
}

DenseOperator commutator(const DenseOperator& A, const DenseOperator& B) {
  check_same_lattice(A, B);
  const SiteSet u = set_union(A.support, B.support);
  const DenseOperator Au = embed(A, u);
  const DenseOperator Bu = embed(B, u);
  DenseOperator r;
  r.support = u;
  r.mat = Au.mat * Bu.mat - Bu.mat * Au.mat;
  r.lattice = A.lattice;
  r.hermitian = false;
  return r;
}

DenseOperator add(const DenseOperator& A, const DenseOperator& B) {
  check_same_lattice(A, B);
  const SiteSet u = set_union(A.support, B.support);
  DenseOperator r = embed(A, u);
  r.mat += embed(B, u).mat;
  r.hermitian = A.hermitian && B.hermitian;
  return r;
}

DenseOperator sub(const DenseOperator& A, const DenseOperator& B) {
  check_same_lattice(A, B);
  const SiteSet u = set_union(A.support, B.support);
  DenseOperator r = embed(A, u);
  r.mat -= embed(B, u).mat;
  r.hermitian = A.hermitian && B.hermitian;
  return r;
}

DenseOperator mul(const DenseOperator& A, const DenseOperator& B) {
  check_same_lattice(A, B);
  const SiteSet u = set_union(A.support, B.support);
  DenseOperator r;
  r.support = u;
  r.mat = embed(A, u).mat * embed(B, u).mat;
  r.lattice = A.lattice;
  r.hermitian = nearly_hermitian(r.mat);
  return r;
}

DenseOperator scale(const DenseOperator& A, std::complex<double> c) {
  DenseOperator r = A;
  r.mat *= c;
  r.hermitian = A.hermitian && std::abs(c.imag()) == 0;
  return r;
}

DenseOperator shift_identity(const DenseOperator& A, double c) {
  DenseOperator r = A;
  r.mat += c * Eigen::MatrixXcd::Identity(A.dim(), A.dim());
  return r;
}

Eigen::Matrix2cd pauli(char p) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m;
  switch (p) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -1i, 1i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw Error(std::string("unknown Pauli label '") + p + "'");
  }
  return m;
}

DenseOperator pauli_string(const Lattice& lattice, const std::vector<int>& sites,
                           const std::string& chars, double coeff) {
  if (sites.size() != chars.size()) throw Error("pauli_string: sites/chars length mismatch");
  // sort into canonical order
  std::vector<std::size_t> order(sites.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sites[a] < sites[b]; });
  SiteSet supp;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Constant(1, 1, coeff);
  for (std::size_t k : order) {
    if (lattice.local_dim(sites[k]) != 2)
      throw Error("pauli_string requires qubit sites");
    supp.push_back(sites[k]);
    Eigen::Matrix2cd p = pauli(chars[k]);
    // kron(m, p): earlier (ascending) sites are the more significant factors
    Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) next.block(i * 2, j * 2, 2, 2) = m(i, j) * p;
    m = std::move(next);
  }
  return make_operator(lattice, supp, m);
}

}  // namespace gapprox
