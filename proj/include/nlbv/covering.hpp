#pragma once

// Disjoint subfamily selection: from finitely many closed intervals pick
// pairwise disjoint ones whose union carries at least 1/(2+eps) of the measure
// of the whole union.

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlbv/types.hpp"

namespace nlbv {

/// Measure of a finite union of closed intervals (the intervals may overlap).
using UnionMeasure = std::function<double(std::span<const Interval>)>;

double lebesgue_union_measure(std::span<const Interval> intervals);
/// Mass of the standard Cantor measure on [0,1] carried by the union.
double cantor_union_measure(std::span<const Interval> intervals);

/// Pairwise disjoint components covering the union, sorted ascending.
std::vector<Interval> merge_intervals(std::span<const Interval> intervals);

struct CoveringResult {
    std::vector<std::size_t> selected;  ///< ascending indices into the input
    double selected_measure = 0.0;
    double total_measure = 0.0;
    std::string method;  ///< greedy, alternating or exhaustive

    [[nodiscard]] double fraction() const noexcept
    {
        return total_measure > 0.0 ? selected_measure / total_measure : 1.0;
    }
};

class CoveringFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Closed intervals that share a point count as intersecting.
bool pairwise_disjoint(std::span<const Interval> intervals, std::span<const std::size_t> indices);

/// Tries greedy-by-length, then the alternating minimal subcover, then (for at
/// most 20 intervals) exhaustive search. Throws CoveringFailure if none reaches
/// the bound, which requires a non-additive measure.
CoveringResult covering_select(std::span<const Interval> intervals, double epsilon,
                               const UnionMeasure& measure = lebesgue_union_measure);

}  // namespace nlbv
