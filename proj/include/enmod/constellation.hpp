#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace enmod {

/// Transmit power levels with their energy-statistic decoding regions.
///
/// Region k is (c_{k-1}, c_k] with c_0 = 0 and c_L = +inf. A constellation
/// may be built without boundaries (levels-only); such constellations are
/// decoded by a likelihood receiver rather than by regions.
class Constellation {
public:
    Constellation() = default;
    /// Levels must be nonnegative and strictly increasing. Boundaries, when
    /// given, must be L-1 strictly increasing values with every r(p_k) inside
    /// its own region.
    Constellation(std::vector<double> levels, std::vector<double> boundaries, double sigma2_design);
    static Constellation levels_only(std::vector<double> levels, double sigma2_design = 0.0);

    std::size_t size() const noexcept { return levels_.size(); }
    bool has_regions() const noexcept { return has_regions_; }

    std::span<const double> levels() const noexcept { return levels_; }
    std::span<const double> boundaries() const noexcept { return boundaries_; }
    double level(std::size_t k) const { return levels_.at(k); }
    double sigma2_design() const noexcept { return sigma2_design_; }

    /// r(p_k) = p_k + sigma2_design.
    double center(std::size_t k) const { return levels_.at(k) + sigma2_design_; }
    /// Lower region edge c_{k-1} (0 for the first region).
    double lower_edge(std::size_t k) const;
    /// Upper region edge c_k (+inf for the last region).
    double upper_edge(std::size_t k) const;
    /// d_{L,k} = r(p_k) - c_{k-1}; +inf for k = 0.
    double left_margin(std::size_t k) const;
    /// d_{R,k} = c_k - r(p_k); +inf for the last region.
    double right_margin(std::size_t k) const;

    double mean_power() const;

private:
    std::vector<double> levels_;
    std::vector<double> boundaries_;
    double sigma2_design_ = 0.0;
    bool has_regions_ = false;
};

}  // namespace enmod
