#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "util.hpp"

namespace ndchaos {

// Continuous piecewise-linear self-map of an interval, held with exact
// rational vertices. Doubles drive orbit arithmetic; the rational layer
// backs the load-time inclusion checks and image hulls.
class PwlMap {
public:
    static PwlMap from_vertices(std::vector<std::pair<Frac, Frac>> vertices) {
        if (vertices.size() < 2) throw ParameterError("PwlMap: need at least two vertices");
        PwlMap m;
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (i > 0 && !(vertices[i - 1].first < vertices[i].first))
                throw ParameterError("PwlMap: vertex x-coordinates must be strictly increasing");
            m.vx_.push_back(vertices[i].first);
            m.vy_.push_back(vertices[i].second);
            m.dx_.push_back(vertices[i].first.to_double());
            m.dy_.push_back(vertices[i].second.to_double());
        }
        for (std::size_t i = 0; i + 1 < m.dx_.size(); ++i)
            m.slope_.push_back((m.dy_[i + 1] - m.dy_[i]) / (m.dx_[i + 1] - m.dx_[i]));
        return m;
    }

    double domain_lo() const { return dx_.front(); }
    double domain_hi() const { return dx_.back(); }
    std::size_t segments() const { return slope_.size(); }

    double eval(double x) const {
        x = std::clamp(x, dx_.front(), dx_.back());
        std::size_t k = segment_of(x);
        return dy_[k] + (x - dx_[k]) * slope_[k];
    }

    Frac eval_exact(const Frac& x) const {
        if (x < vx_.front() || x > vx_.back())
            throw ParameterError("PwlMap: exact evaluation outside domain");
        std::size_t k = 0;
        while (k + 2 < vx_.size() && !(x < vx_[k + 1])) ++k;
        const Frac run = vx_[k + 1] - vx_[k];
        return vy_[k] + (x - vx_[k]) * (vy_[k + 1] - vy_[k]) / run;
    }

    // Exact hull [min, max] of the image of [lo, hi].
    std::pair<Frac, Frac> exact_image_hull(const Frac& lo, const Frac& hi) const {
        if (!(lo <= hi)) throw ParameterError("PwlMap: empty interval");
        Frac ymin = eval_exact(lo), ymax = ymin;
        auto absorb = [&](const Frac& y) {
            if (y < ymin) ymin = y;
            if (ymax < y) ymax = y;
        };
        absorb(eval_exact(hi));
        for (std::size_t i = 0; i < vx_.size(); ++i)
            if (lo <= vx_[i] && vx_[i] <= hi) absorb(vy_[i]);
        return {ymin, ymax};
    }

    std::pair<double, double> image_hull(double lo, double hi) const {
        double ymin = eval(lo), ymax = ymin;
        auto absorb = [&](double y) {
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        };
        absorb(eval(hi));
        for (std::size_t i = 0; i < dx_.size(); ++i)
            if (lo <= dx_[i] && dx_[i] <= hi) absorb(dy_[i]);
        return {ymin, ymax};
    }

    // All x-intervals mapped into [ylo, yhi], outward-padded, sorted, merged.
    std::vector<std::pair<double, double>> preimage(double ylo, double yhi, double pad) const {
        std::vector<std::pair<double, double>> out;
        for (std::size_t k = 0; k < slope_.size(); ++k) {
            const double x0 = dx_[k], x1 = dx_[k + 1];
            const double y0 = dy_[k];
            double a, b;
            if (slope_[k] == 0.0) {
                if (y0 < ylo || y0 > yhi) continue;
                a = x0;
                b = x1;
            } else {
                double ta = x0 + (ylo - y0) / slope_[k];
                double tb = x0 + (yhi - y0) / slope_[k];
                if (ta > tb) std::swap(ta, tb);
                a = std::max(ta, x0);
                b = std::min(tb, x1);
                if (a > b) continue;
            }
            out.emplace_back(std::max(a - pad, dx_.front()), std::min(b + pad, dx_.back()));
        }
        std::sort(out.begin(), out.end());
        std::vector<std::pair<double, double>> merged;
        for (const auto& iv : out) {
            if (!merged.empty() && iv.first <= merged.back().second)
                merged.back().second = std::max(merged.back().second, iv.second);
            else
                merged.push_back(iv);
        }
        return merged;
    }

private:
    std::size_t segment_of(double x) const {
        auto it = std::upper_bound(dx_.begin(), dx_.end(), x);
        std::size_t k = static_cast<std::size_t>(it - dx_.begin());
        if (k == 0) return 0;
        if (k >= dx_.size()) return dx_.size() - 2;
        return k - 1;
    }

    std::vector<Frac> vx_, vy_;
    std::vector<double> dx_, dy_;
    std::vector<double> slope_;
};

// A time-indexed family of piecewise-linear maps; step n applies map_at(n).
struct PwlFamily {
    std::function<PwlMap(std::uint64_t)> map_at;
};

}  // namespace ndchaos
