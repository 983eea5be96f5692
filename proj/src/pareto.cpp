#include "copa/pareto.hpp"

#include <algorithm>
#include <numeric>

namespace copa {

bool dominates(std::span<const double> a, std::span<const double> b, const std::vector<ObjectiveSpec>& specs) {
    if (a.size() != b.size() || a.size() != specs.size()) {
        throw Error(ErrorCode::usage, "length_mismatch", "dominance check needs vectors matching the objective list");
    }
    bool strictly = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto d = specs[k].direction;
        if (strictly_better(b[k], a[k], d)) return false;
        if (strictly_better(a[k], b[k], d)) strictly = true;
    }
    return strictly;
}

std::vector<bool> pareto_mask(const Population& population) {
    const auto n = population.size();
    const auto& specs = population.objectives();

    // Visiting candidates in order of the first objective lets most dominated
    // rows be rejected by an early front member.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto d0 = specs.front().direction;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return strictly_better(population.row(a)[0], population.row(b)[0], d0);
    });

    std::vector<bool> mask(n, true);
    for (std::size_t i = 0; i < n; ++i) {
        const auto candidate = population.row(order[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (dominates(population.row(order[j]), candidate, specs)) {
                mask[order[i]] = false;
                break;
            }
        }
    }
    return mask;
}

std::vector<std::size_t> pareto_front(const Population& population) {
    const auto mask = pareto_mask(population);
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) front.push_back(i);
    return front;
}

}  // namespace copa
