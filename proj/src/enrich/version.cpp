#include "devrisk/enrich/version.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace devrisk::enrich {

namespace {

std::vector<std::string_view> split_segments(std::string_view v) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= v.size(); ++i) {
        if (i == v.size() || v[i] == '.' || v[i] == '-' || v[i] == '_') {
            out.push_back(v.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::strong_ordering compare_segment(std::string_view a, std::string_view b) {
    if (all_digits(a) && all_digits(b)) {
        a.remove_prefix(std::min(a.find_first_not_of('0'), a.size()));
        b.remove_prefix(std::min(b.find_first_not_of('0'), b.size()));
        if (a.size() != b.size()) return a.size() <=> b.size();
    }
    return a.compare(b) <=> 0;
}

}  // namespace

std::strong_ordering compare_versions(std::string_view a, std::string_view b) {
    auto sa = split_segments(a);
    auto sb = split_segments(b);
    const std::size_t n = std::max(sa.size(), sb.size());
    for (std::size_t i = 0; i < n; ++i) {
        std::string_view x = i < sa.size() ? sa[i] : "0";
        std::string_view y = i < sb.size() ? sb[i] : "0";
        if (auto c = compare_segment(x, y); c != 0) return c;
    }
    return std::strong_ordering::equal;
}

bool version_in_range(std::string_view v, std::string_view lo, std::string_view hi) {
    if (!lo.empty() && compare_versions(v, lo) < 0) return false;
    if (!hi.empty() && compare_versions(v, hi) > 0) return false;
    return true;
}

}  // namespace devrisk::enrich
