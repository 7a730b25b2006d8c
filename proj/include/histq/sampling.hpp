#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "histq/tensor_algebra.hpp"

namespace histq {

/// Seeded random source.  Every stochastic routine in the library draws from
/// an explicitly seeded Rng so that runs are reproducible.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return unif_(gen_); }
    double gaussian() { return normal_(gen_); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return std::uniform_int_distribution<int>(lo, hi)(gen_);
    }
    Complex cgauss() { return Complex(normal_(gen_), normal_(gen_)) / std::sqrt(2.0); }

  private:
    std::mt19937_64 gen_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Matrix with i.i.d. standard complex Gaussian entries.
ComplexMatrix ginibre(int rows, int cols, Rng& rng);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fixing).
ComplexMatrix haar_unitary(int n, Rng& rng);

ComplexVector random_unit_vector(int n, Rng& rng);

/// Random rank-r orthogonal projector; columns of a Haar unitary.
ComplexMatrix random_projector(int n, int rank, Rng& rng);

/// Rank drawn uniformly from 1..n-1.
ComplexMatrix random_projector(int n, Rng& rng);

/// Two exactly orthogonal projectors with ranks r1, r2 >= 1, r1 + r2 <= n.
std::pair<ComplexMatrix, ComplexMatrix> random_orthogonal_pair(int n, Rng& rng);

ComplexMatrix random_density(int n, Rng& rng);

ComplexMatrix random_hermitian(int n, Rng& rng);

/// Seeded projector source over a fixed history dimension, used by the
/// axiom and constraint checkers.
class ProjectorSampler {
  public:
    ProjectorSampler(int dim, std::uint64_t seed) : dim_(dim), seed_(seed), rng_(seed) {}

    int dim() const { return dim_; }
    std::uint64_t seed() const { return seed_; }

    ComplexMatrix projector() { return random_projector(dim_, rng_); }
    std::pair<ComplexMatrix, ComplexMatrix> orthogonal_pair() {
        return random_orthogonal_pair(dim_, rng_);
    }
    ComplexVector unit_vector() { return random_unit_vector(dim_, rng_); }
    Rng& rng() { return rng_; }

  private:
    int dim_;
    std::uint64_t seed_;
    Rng rng_;
};

}  // namespace histq
