#pragma once

#include <span>
#include <vector>

#include "copa/core.hpp"

namespace copa {

// a dominates b: no worse on every objective and strictly better on at least
// one, under each objective's direction.
bool dominates(std::span<const double> a, std::span<const double> b, const std::vector<ObjectiveSpec>& specs);

// Indices (ascending) of the models no other model dominates. Never empty for
// a valid population; exact duplicates of a front point are all kept.
std::vector<std::size_t> pareto_front(const Population& population);

// Membership mask aligned with the population rows.
std::vector<bool> pareto_mask(const Population& population);

}  // namespace copa
