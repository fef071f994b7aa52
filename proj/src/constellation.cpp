#include "enmod/constellation.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "enmod/errors.hpp"

namespace enmod {

namespace {

void check_levels(const std::vector<double>& levels) {
    detail::require(!levels.empty(), "constellation needs at least one level");
    detail::require(std::isfinite(levels.front()) && levels.front() >= 0.0,
                    "power levels must be nonnegative");
    for (std::size_t k = 1; k < levels.size(); ++k)
        detail::require(std::isfinite(levels[k]) && levels[k] > levels[k - 1],
                        "power levels must be strictly increasing");
}

}  // namespace

Constellation::Constellation(std::vector<double> levels, std::vector<double> boundaries,
                             double sigma2_design)
    : levels_(std::move(levels)), boundaries_(std::move(boundaries)),
      sigma2_design_(sigma2_design), has_regions_(true) {
    check_levels(levels_);
    detail::require(sigma2_design_ >= 0.0 && std::isfinite(sigma2_design_),
                    "design noise power must be finite and nonnegative");
    detail::require(boundaries_.size() + 1 == levels_.size(), "need exactly L-1 boundaries");
    for (std::size_t k = 0; k < boundaries_.size(); ++k) {
        detail::require(std::isfinite(boundaries_[k]) && boundaries_[k] > 0.0,
                        "boundaries must be positive and finite");
        if (k > 0) detail::require(boundaries_[k] > boundaries_[k - 1], "boundaries must increase");
    }
    for (std::size_t k = 0; k < levels_.size(); ++k) {
        const double r = center(k);
        detail::require(r > lower_edge(k) && r < upper_edge(k),
                        "each r(p_k) must lie strictly inside its own region");
    }
}

Constellation Constellation::levels_only(std::vector<double> levels, double sigma2_design) {
    Constellation c;
    check_levels(levels);
    c.levels_ = std::move(levels);
    c.sigma2_design_ = sigma2_design;
    return c;
}

double Constellation::lower_edge(std::size_t k) const {
    detail::require(has_regions_, "constellation has no decoding regions");
    return k == 0 ? 0.0 : boundaries_.at(k - 1);
}

double Constellation::upper_edge(std::size_t k) const {
    detail::require(has_regions_, "constellation has no decoding regions");
    return k + 1 == levels_.size() ? std::numeric_limits<double>::infinity() : boundaries_.at(k);
}

double Constellation::left_margin(std::size_t k) const {
    return k == 0 ? std::numeric_limits<double>::infinity() : center(k) - lower_edge(k);
}

double Constellation::right_margin(std::size_t k) const { return upper_edge(k) - center(k); }

double Constellation::mean_power() const {
    return std::accumulate(levels_.begin(), levels_.end(), 0.0) / static_cast<double>(levels_.size());
}

}  // namespace enmod
