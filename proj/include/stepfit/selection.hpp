#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>

namespace stepfit {

namespace detail {

template <typename It, typename Less>
void insertion_sort(It first, It last, Less less) {
    for (It i = first + 1; i < last; ++i)
        for (It j = i; j > first && less(*j, *(j - 1)); --j)
            std::iter_swap(j, j - 1);
}

// Median of a short range by sorting it in place.
template <typename It, typename Less>
It small_median(It first, It last, Less less) {
    insertion_sort(first, last, less);
    return first + (last - first) / 2;
}

}  // namespace detail

// Rearranges [first, last) so position k (0-based) holds the k-th smallest
// element under `less`, everything before compares <= it and everything after
// >= it. Same contract as std::nth_element but with a worst-case linear bound:
// median-of-medians pivots (groups of 5) and a three-way partition so runs of
// equal keys cannot degrade the recursion.
template <typename It, typename Less>
void nth_smallest(It first, It last, std::size_t k, Less less) {
    using std::iter_swap;
    for (;;) {
        std::size_t n = static_cast<std::size_t>(last - first);
        if (n <= 16) {
            detail::insertion_sort(first, last, less);
            return;
        }

        // Collect each 5-group's median at the front. Destination slots only
        // ever reuse space of groups already consumed, so medians are intact.
        std::size_t groups = 0;
        It g = first;
        while (g < last) {
            It gend = (last - g >= 5) ? g + 5 : last;
            It med = detail::small_median(g, gend, less);
            iter_swap(first + static_cast<std::ptrdiff_t>(groups), med);
            ++groups;
            g = gend;
        }
        nth_smallest(first, first + static_cast<std::ptrdiff_t>(groups), groups / 2, less);
        auto pivot = *(first + static_cast<std::ptrdiff_t>(groups / 2));

        // Three-way partition around the pivot value: [first,lt) < p,
        // [lt,gt) == p, [gt,last) > p.
        It lt = first, mid = first, gt = last;
        while (mid < gt) {
            if (less(*mid, pivot))
                iter_swap(lt++, mid++);
            else if (less(pivot, *mid))
                iter_swap(mid, --gt);
            else
                ++mid;
        }

        std::size_t below = static_cast<std::size_t>(lt - first);
        std::size_t upto = static_cast<std::size_t>(gt - first);
        if (k < below) {
            last = lt;
        } else if (k < upto) {
            return;  // k lands inside the pivot-equal block
        } else {
            first = gt;
            k -= upto;
        }
    }
}

template <typename It>
void nth_smallest(It first, It last, std::size_t k) {
    nth_smallest(first, last, k, std::less<>{});
}

}  // namespace stepfit
