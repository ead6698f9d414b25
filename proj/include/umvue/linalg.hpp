#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "umvue/matrix.hpp"

namespace umvue {

// Dense linear algebra generic over the two arithmetic modes.
//
// Exact mode is bit-exact: rank uses fraction-free (Bareiss) elimination on an
// integer-scaled copy, the remaining routines use rational Gauss-Jordan.
// Approx mode treats |v| <= tolerance * scale as zero, where scale is the
// largest absolute entry of the matrix (or vector family) under consideration.
// Pivot choice and tie-breaking are deterministic in both modes.

class NoCircuit : public std::invalid_argument {
 public:
  NoCircuit() : std::invalid_argument("no circuit: vector family is linearly independent") {}
};

class SingularMatrix : public std::domain_error {
 public:
  SingularMatrix() : std::domain_error("matrix is singular") {}
};

/// Dimension of the column space. Zero for 0xn and nx0 matrices.
std::size_t rank(const Matrix& m);

/// Reduced row echelon form; the pivot column of each nonzero row is written to `pivots`.
Matrix reduced_row_echelon(const Matrix& m, std::vector<std::size_t>* pivots = nullptr);

/// Basis of {h : m h = 0} read off the reduced echelon form: one vector per free
/// column, left to right, with a unit entry at that column.
std::vector<Vector> null_space_basis(const Matrix& m);

/// Greedy left-to-right basis: index j is kept iff column j is outside the span
/// of the previously kept columns.
std::vector<std::size_t> extract_basis(const Matrix& columns);
std::vector<std::size_t> extract_basis(const std::vector<Vector>& vectors, Arithmetic arith);

std::size_t span_dimension(const std::vector<Vector>& vectors, Arithmetic arith);
bool is_independent(const std::vector<Vector>& vectors, Arithmetic arith);
bool same_span(const std::vector<Vector>& a, const std::vector<Vector>& b, Arithmetic arith);

/// Indices of a minimal dependent subfamily, found by deleting (in index order)
/// every element whose removal keeps the family dependent. Throws NoCircuit on
/// an independent family.
std::vector<std::size_t> find_circuit(const std::vector<Vector>& vectors, Arithmetic arith);

/// Some solution of a x = b (free variables set to zero), or nullopt if inconsistent.
std::optional<Vector> solve(const Matrix& a, const Vector& b);

/// Inverse of a square nonsingular matrix; throws SingularMatrix.
Matrix inverse(const Matrix& a);

}  // namespace umvue
