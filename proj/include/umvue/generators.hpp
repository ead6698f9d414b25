#pragma once

#include <cstddef>
#include <vector>

#include "umvue/model.hpp"

namespace umvue {

enum class Example1 { p1, p2 };

/// The two 2x4 exact matrices with samples "1".."4" and parameters "1","2".
StatModel example1(Example1 which);

/// n Bernoulli trials observed at a finite grid of success probabilities.
struct BernoulliSpec {
  std::size_t n = 1;
  std::vector<Rational> theta_grid;
};

/// Beta-Bernoulli trials: p ~ Beta(c + theta, c - theta), then n trials.
struct BetaBernoulliSpec {
  std::size_t n = 1;
  Rational c = 1;
  std::vector<Rational> theta_grid;
};

struct GeneratedModel {
  StatModel model;
  Statistic total;  // T(x) = number of successes
};

/// Samples are {0,1}^n in lexicographic order, labelled by their bit strings.
/// Throws std::invalid_argument on an invalid spec.
GeneratedModel bernoulli(const BernoulliSpec& spec);
GeneratedModel beta_bernoulli(const BetaBernoulliSpec& spec);

/// Rising factorial a(a+1)...(a+k-1); (a)_0 = 1.
Rational pochhammer(const Rational& a, std::size_t k);

struct Example3Claims {
  std::size_t representative_rank = 0;  // rank of one likelihood per value of T
  bool representatives_full_rank = false;

  struct PerTheta {
    Rational theta;
    Rational mean;                   // E(T/n) from the pmf
    Rational mean_closed_form;       // (c + theta) / (2c)
    Rational var_mean;               // Var(T/n) from the pmf
    Rational var_latent;             // Var(p) = ab / ((a+b)^2 (a+b+1))
    Rational binomial_var;           // m(1-m)/n with m the mean
    Rational overdispersion_closed_form;  // ((n-1)/n) (c^2 - theta^2) / (4c^2 (2c+1))
    bool mean_matches = false;
    bool excess_over_latent_matches = false;    // Var(T/n) - Var(p) == closed form
    bool excess_over_binomial_matches = false;  // Var(T/n) - m(1-m)/n == closed form
    bool below_uniform_bound = false;           // closed form < 1 / (4(2c+1))
  };
  std::vector<PerTheta> per_theta;

  bool means_match() const;
  bool excess_over_latent_matches() const;
  bool excess_over_binomial_matches() const;
};

/// Needs at least n+1 grid points (otherwise std::invalid_argument).
Example3Claims verify_example3_claims(const BetaBernoulliSpec& spec);

}  // namespace umvue
