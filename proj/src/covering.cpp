#include "nlbv/covering.hpp"

#include <algorithm>
#include <numeric>

#include "nlbv/bvmodel.hpp"

namespace nlbv {

std::vector<Interval> merge_intervals(std::span<const Interval> intervals)
{
    std::vector<Interval> v;
    for (const Interval& I : intervals)
        if (!I.empty()) v.push_back(I);
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const Interval& I : v) {
        if (!out.empty() && I.lo <= out.back().hi)
            out.back().hi = std::max(out.back().hi, I.hi);
        else
            out.push_back(I);
    }
    return out;
}

double lebesgue_union_measure(std::span<const Interval> intervals)
{
    double s = 0.0;
    for (const Interval& I : merge_intervals(intervals)) s += I.length();
    return s;
}

double cantor_union_measure(std::span<const Interval> intervals)
{
    double s = 0.0;
    for (const Interval& I : merge_intervals(intervals)) {
        const double lo = std::clamp(I.lo, 0.0, 1.0), hi = std::clamp(I.hi, 0.0, 1.0);
        s += cantor_eval(hi) - cantor_eval(lo);
    }
    return s;
}

bool pairwise_disjoint(std::span<const Interval> intervals, std::span<const std::size_t> indices)
{
    std::vector<Interval> v;
    for (std::size_t i : indices) v.push_back(intervals[i]);
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t k = 1; k < v.size(); ++k)
        if (v[k].lo <= v[k - 1].hi) return false;
    return true;
}

namespace {

double measure_of(std::span<const Interval> all, const std::vector<std::size_t>& idx, const UnionMeasure& measure)
{
    std::vector<Interval> v;
    v.reserve(idx.size());
    for (std::size_t i : idx) v.push_back(all[i]);
    return measure(v);
}

std::vector<std::size_t> greedy(std::span<const Interval> all)
{
    std::vector<std::size_t> order(all.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return all[a].length() > all[b].length(); });
    std::vector<std::size_t> chosen;
    for (std::size_t i : order) {
        const bool clear = std::none_of(chosen.begin(), chosen.end(), [&](std::size_t k) {
            return overlaps(all[i], all[k]);
        });
        if (clear) chosen.push_back(i);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

/// Minimal subcover chain I_1, I_2, ... of the union: I_k and I_{k+2} are
/// disjoint, so the odd and the even members each form a disjoint family and
/// together cover the union.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> alternating(std::span<const Interval> all)
{
    std::vector<std::size_t> order(all.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return all[a].lo < all[b].lo || (all[a].lo == all[b].lo && all[a].hi > all[b].hi);
    });

    std::vector<std::size_t> chain;
    std::size_t k = 0;
    while (k < order.size()) {
        // Start of a new connected component.
        std::size_t best = order[k];
        double reach = all[best].hi;
        chain.push_back(best);
        ++k;
        for (;;) {
            std::size_t cand = all.size();
            double cand_reach = reach;
            while (k < order.size() && all[order[k]].lo <= reach) {
                if (all[order[k]].hi > cand_reach) {
                    cand_reach = all[order[k]].hi;
                    cand = order[k];
                }
                ++k;
            }
            if (cand == all.size()) break;
            chain.push_back(cand);
            reach = cand_reach;
        }
    }

    std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < chain.size(); ++i) (i % 2 == 0 ? out.first : out.second).push_back(chain[i]);
    std::sort(out.first.begin(), out.first.end());
    std::sort(out.second.begin(), out.second.end());
    return out;
}

struct Exhaustive {
    std::span<const Interval> all;
    const UnionMeasure& measure;
    std::vector<std::size_t> current;
    std::vector<std::size_t> best;
    double best_measure = -1.0;

    void search(std::size_t i)
    {
        if (i == all.size()) {
            const double m = measure_of(all, current, measure);
            if (m > best_measure) {
                best_measure = m;
                best = current;
            }
            return;
        }
        const bool clear = std::none_of(current.begin(), current.end(), [&](std::size_t k) {
            return overlaps(all[i], all[k]);
        });
        if (clear) {
            current.push_back(i);
            search(i + 1);
            current.pop_back();
        }
        search(i + 1);
    }
};

}  // namespace

CoveringResult covering_select(std::span<const Interval> intervals, double epsilon, const UnionMeasure& measure)
{
    require(epsilon > 0.0 && epsilon < 1.0, "covering_select: epsilon must lie in (0,1)");
    for (const Interval& I : intervals)
        require(std::isfinite(I.lo) && std::isfinite(I.hi) && I.lo <= I.hi, "covering_select: malformed interval");

    CoveringResult out;
    std::vector<Interval> all_vec(intervals.begin(), intervals.end());
    out.total_measure = measure(all_vec);
    const double bound = out.total_measure / (2.0 + epsilon);

    auto accept = [&](std::vector<std::size_t> idx, const char* method) {
        const double m = measure_of(intervals, idx, measure);
        if (m < bound) return false;
        out.selected = std::move(idx);
        out.selected_measure = m;
        out.method = method;
        return true;
    };

    if (accept(greedy(intervals), "greedy")) return out;
    auto [odd, even] = alternating(intervals);
    const double m_odd = measure_of(intervals, odd, measure);
    const double m_even = measure_of(intervals, even, measure);
    if (accept(m_odd >= m_even ? odd : even, "alternating")) return out;
    if (intervals.size() <= 20) {
        Exhaustive ex{intervals, measure, {}, {}, -1.0};
        ex.search(0);
        if (accept(ex.best, "exhaustive")) return out;
    }
    throw CoveringFailure("covering_select: no disjoint subfamily reaches 1/(2+eps) of the union measure");
}

}  // namespace nlbv
