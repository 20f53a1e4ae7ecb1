#include "rquant/synthetic.hpp"

#include <cmath>

#include "rquant/errors.hpp"

namespace rquant {

namespace {

TrafficSample flow_sample(Rng& rng, double angle, double speed, double speed_jitter,
                          double heading_jitter, double lane_width,
                          double half_length, double offset_along,
                          double offset_perp) {
    const Eigen::Vector2d dir(std::cos(angle), std::sin(angle));
    const Eigen::Vector2d perp(-dir[1], dir[0]);
    const double along = rng.uniform(-half_length, half_length) + offset_along;
    const double across = offset_perp + lane_width * rng.normal();
    TrafficSample s;
    s.z = along * dir + across * perp;
    const double v = speed * (1.0 + speed_jitter * rng.normal());
    const double heading = angle + heading_jitter * rng.normal();
    s.v = v * Eigen::Vector2d(std::cos(heading), std::sin(heading));
    return s;
}

// Isotropic velocity perturbation that decays with distance from the conflict
// point at the origin. Every direction of the local covariance grows toward
// the crossing, which is what makes the quantized centers Loewner-comparable.
void maneuver_noise(Rng& rng, TrafficSample& s, double amp, double radius) {
    const double a =
        amp * std::exp(-s.z.squaredNorm() / (2.0 * radius * radius));
    s.v += a * Eigen::Vector2d(rng.normal(), rng.normal());
}

} // namespace

Scenario scenario_from_name(const std::string& name) {
    if (name == "parallel") {
        return Scenario::parallel_flows;
    }
    if (name == "crossing") {
        return Scenario::single_crossing;
    }
    if (name == "multi") {
        return Scenario::multi_crossing;
    }
    throw UsageError("unknown scenario '" + name +
                     "' (choose parallel, crossing or multi)");
}

std::string scenario_name(Scenario s) {
    switch (s) {
    case Scenario::parallel_flows: return "parallel";
    case Scenario::single_crossing: return "crossing";
    case Scenario::multi_crossing: return "multi";
    }
    throw UsageError("unknown scenario");
}

std::vector<TrafficSample> synthetic_scenario(Scenario s, std::size_t count,
                                              Rng& rng) {
    if (count < 10) {
        throw UsageError("synthetic scenarios need at least 10 samples");
    }
    std::vector<TrafficSample> out;
    out.reserve(count);
    switch (s) {
    case Scenario::parallel_flows: {
        // Three eastbound lanes 8 units apart (farther than any useful kernel
        // radius) with increasing speed and disorder, so the local velocity
        // dispersion grows lane by lane.
        const double lane_y[3] = {-8.0, 0.0, 8.0};
        const double speed[3] = {8.0, 10.0, 12.0};
        const double sj[3] = {0.01, 0.03, 0.08};
        const double hj[3] = {0.01, 0.03, 0.08};
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t lane = rng.uniform_index(3);
            out.push_back(flow_sample(rng, 0.0, speed[lane], sj[lane], hj[lane],
                                      0.4, 24.0, 0.0, lane_y[lane]));
        }
        return out;
    }
    case Scenario::single_crossing: {
        // Eastbound, northbound and a thinner diagonal flow, all through the
        // origin: the local velocity mixture gets richer toward the crossing.
        // The maneuvering burst keeps the core covariance above every partial
        // mixture in the Loewner order, not just in trace.
        for (std::size_t k = 0; k < count; ++k) {
            const double u = rng.uniform();
            if (u < 0.4) {
                out.push_back(
                    flow_sample(rng, 0.0, 10.0, 0.02, 0.02, 0.5, 24.0, 0.0, 0.0));
            } else if (u < 0.8) {
                out.push_back(flow_sample(rng, M_PI / 2.0, 8.0, 0.02, 0.02, 0.5,
                                          24.0, 0.0, 0.0));
            } else {
                out.push_back(flow_sample(rng, M_PI / 4.0, 6.0, 0.02, 0.02, 0.5,
                                          24.0, 0.0, 0.0));
            }
            maneuver_noise(rng, out.back(), 5.0, 4.0);
        }
        return out;
    }
    case Scenario::multi_crossing: {
        // Six one-way flows through the origin, headings spread over half a
        // turn so no two lanes share a line; a far cell then sees one flow,
        // never a balanced opposite pair with a large velocity chord.
        const double speed[6] = {11.0, 9.0, 10.0, 8.0, 12.0, 7.0};
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t f = rng.uniform_index(6);
            const double angle =
                (5.0 + 30.0 * static_cast<double>(f)) * M_PI / 180.0;
            out.push_back(flow_sample(rng, angle, speed[f], 0.02, 0.03, 0.6, 24.0,
                                      0.0, 0.0));
            maneuver_noise(rng, out.back(), 5.0, 6.0);
        }
        return out;
    }
    }
    throw UsageError("unknown scenario");
}

} // namespace rquant
