#pragma once

#include <compare>
#include <string_view>

namespace devrisk::enrich {

/// Dotted version comparison.
///
/// Segments are split on '.', '-' and '_'. Two all-digit segments compare
/// numerically (leading zeros ignored); any other pair compares
/// lexicographically. Missing trailing segments count as "0", so "1.4" and
/// "1.4.0" are equal.
std::strong_ordering compare_versions(std::string_view a, std::string_view b);

/// lo <= v <= hi under compare_versions; an empty bound is open.
bool version_in_range(std::string_view v, std::string_view lo, std::string_view hi);

}  // namespace devrisk::enrich
