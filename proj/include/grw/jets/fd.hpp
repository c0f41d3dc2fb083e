#pragma once

#include <functional>
#include <span>

#include "grw/jets/jet.hpp"

namespace grw::jets {

using ScalarField = std::function<double(std::span<const double>)>;

/// Central-difference estimate of the mixed partial d^idx f at `point`,
/// built as a tensor product of one-dimensional stencils with step h on
/// every differentiated axis. Truncation error is O(h^2) per axis.
///
/// Per-axis stencils (offsets in units of h):
///   order 1: [-1, +1] / 2h
///   order 2: [+1, -2, +1] / h^2
///   order 3: [-1/2, +1, -1, +1/2] at offsets -2, -1, +1, +2, divided by h^3
///
/// Throws DomainError if f fails (or returns a non-finite value) anywhere on
/// the stencil.
double fd_derivative(const ScalarField& f, std::span<const double> point, const MultiIndex& idx, double h);

}  // namespace grw::jets
