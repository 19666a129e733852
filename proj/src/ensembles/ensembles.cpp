#include "randgame/ensembles.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace randgame::ensembles {

namespace {

void require_dims(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw std::invalid_argument("ensemble dimensions must be >= 1");
}

}  // namespace

void EnsembleSpec::validate() const {
  if (kind == EnsembleKind::Bernoulli && !(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("Bernoulli probability must lie in [0, 1]");
  }
}

std::string EnsembleSpec::tag() const {
  switch (kind) {
    case EnsembleKind::GaussianIID: return "gaussian";
    case EnsembleKind::HaarOrthogonal: return "haar";
    case EnsembleKind::Rademacher: return "rademacher";
    case EnsembleKind::Bernoulli: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "bernoulli(%.17g)", p);
      return buf;
    }
  }
  return "unknown";
}

EnsembleSpec EnsembleSpec::parse(std::string_view text) {
  if (text == "gaussian") return gaussian();
  if (text == "haar") return haar();
  if (text == "rademacher") return rademacher();
  constexpr std::string_view prefix = "bernoulli(";
  if (text.starts_with(prefix) && text.ends_with(")")) {
    const std::string_view inner = text.substr(prefix.size(), text.size() - prefix.size() - 1);
    double p = 0.0;
    auto [ptr, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), p);
    if (ec != std::errc{} || ptr != inner.data() + inner.size()) {
      throw std::invalid_argument("bad Bernoulli parameter in '" + std::string(text) + "'");
    }
    EnsembleSpec spec = bernoulli(p);
    spec.validate();
    return spec;
  }
  throw std::invalid_argument("unknown ensemble '" + std::string(text) + "'");
}

Matrix sample_gaussian(std::size_t n, std::size_t m, RandomSeed seed) {
  require_dims(n, m);
  Matrix out(n, m);
  StreamRng rng(seed);
  for (double& v : out.data()) v = rng.gaussian();
  return out;
}

Matrix sample_haar_orthogonal(std::size_t n, RandomSeed seed) {
  require_dims(n, n);
  const Matrix g = sample_gaussian(n, n, seed);
  const Eigen::MatrixXd a = g.eigen();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return Matrix::from_eigen(q);
}

Matrix sample_discrete(std::size_t n, std::size_t m, const EnsembleSpec& spec, RandomSeed seed) {
  require_dims(n, m);
  spec.validate();
  Matrix out(n, m);
  StreamRng rng(seed);
  switch (spec.kind) {
    case EnsembleKind::Rademacher:
      for (double& v : out.data()) v = (rng.next_u64() >> 63) != 0 ? 1.0 : -1.0;
      break;
    case EnsembleKind::Bernoulli:
      for (double& v : out.data()) v = rng.bernoulli(spec.p) ? 1.0 : 0.0;
      break;
    default:
      throw std::invalid_argument("sample_discrete: ensemble must be Rademacher or Bernoulli");
  }
  return out;
}

std::vector<double> sample_gaussian_vector(std::size_t n, RandomSeed seed) {
  require_dims(n, 1);
  std::vector<double> out(n);
  StreamRng rng(seed);
  for (double& v : out) v = rng.gaussian();
  return out;
}

Matrix sample(const EnsembleSpec& spec, std::size_t n, std::size_t m, RandomSeed seed) {
  switch (spec.kind) {
    case EnsembleKind::GaussianIID: return sample_gaussian(n, m, seed);
    case EnsembleKind::HaarOrthogonal:
      if (n != m) throw std::invalid_argument("Haar orthogonal ensemble requires n == m");
      return sample_haar_orthogonal(n, seed);
    case EnsembleKind::Rademacher:
    case EnsembleKind::Bernoulli: return sample_discrete(n, m, spec, seed);
  }
  throw std::invalid_argument("unknown ensemble kind");
}

}  // namespace randgame::ensembles
