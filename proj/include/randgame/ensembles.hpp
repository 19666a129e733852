#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "randgame/matrix.hpp"
#include "randgame/rng.hpp"

namespace randgame::ensembles {

enum class EnsembleKind { GaussianIID, HaarOrthogonal, Rademacher, Bernoulli };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::GaussianIID;
  double p = 0.5;  // only used by Bernoulli

  static EnsembleSpec gaussian() { return {EnsembleKind::GaussianIID, 0.5}; }
  static EnsembleSpec haar() { return {EnsembleKind::HaarOrthogonal, 0.5}; }
  static EnsembleSpec rademacher() { return {EnsembleKind::Rademacher, 0.5}; }
  static EnsembleSpec bernoulli(double p) { return {EnsembleKind::Bernoulli, p}; }

  // Throws std::invalid_argument when p is outside [0, 1].
  void validate() const;

  // Short tag used in CSV output: gaussian, haar, rademacher, bernoulli(0.3).
  std::string tag() const;
  // Inverse of tag(). Throws std::invalid_argument on unknown names.
  static EnsembleSpec parse(std::string_view text);

  friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;
};

Matrix sample_gaussian(std::size_t n, std::size_t m, RandomSeed seed);

// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with column j of
// Q multiplied by sign(R_jj).
Matrix sample_haar_orthogonal(std::size_t n, RandomSeed seed);

// Rademacher or Bernoulli(p) entries. Other kinds throw std::invalid_argument.
Matrix sample_discrete(std::size_t n, std::size_t m, const EnsembleSpec& spec, RandomSeed seed);

std::vector<double> sample_gaussian_vector(std::size_t n, RandomSeed seed);

// Dispatches on spec.kind. HaarOrthogonal requires n == m.
Matrix sample(const EnsembleSpec& spec, std::size_t n, std::size_t m, RandomSeed seed);

}  // namespace randgame::ensembles
