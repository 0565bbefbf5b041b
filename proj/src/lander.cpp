#include "padland/lander.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>

namespace padland {

std::string to_string(LandingPhase phase) {
    switch (phase) {
        case LandingPhase::Search: return "search";
        case LandingPhase::Align: return "align";
        case LandingPhase::Orient: return "orient";
        case LandingPhase::Descend: return "descend";
        case LandingPhase::Touchdown: return "touchdown";
        case LandingPhase::Done: return "done";
        case LandingPhase::Abort: return "abort";
    }
    return "?";
}

LandingPhase parse_landing_phase(const std::string& text) {
    for (auto p : {LandingPhase::Search, LandingPhase::Align, LandingPhase::Orient, LandingPhase::Descend,
                   LandingPhase::Touchdown, LandingPhase::Done, LandingPhase::Abort}) {
        if (to_string(p) == text) return p;
    }
    throw ContractError("unknown landing phase '" + text + "'");
}

bool transition_allowed(LandingPhase from, LandingPhase to) {
    using P = LandingPhase;
    if (from == to) return true;
    switch (from) {
        case P::Search: return to == P::Align;
        case P::Align: return to == P::Orient || to == P::Abort;
        case P::Orient: return to == P::Descend || to == P::Abort;
        case P::Descend: return to == P::Touchdown || to == P::Abort;
        case P::Touchdown: return to == P::Done;
        case P::Done: return false;
        case P::Abort: return to == P::Search;
    }
    return false;
}

LandingCommand clamp_command(LandingCommand cmd, const LanderParams& params) {
    if (cmd.motors_off) return LandingCommand{0, 0, 0, 0, true};
    auto clamp = [](double v, double lim) { return std::isfinite(v) ? std::clamp(v, -lim, lim) : 0.0; };
    cmd.vx = clamp(cmd.vx, params.max_vxy);
    cmd.vy = clamp(cmd.vy, params.max_vxy);
    cmd.vz = clamp(cmd.vz, params.max_vz);
    cmd.yaw_rate = clamp(cmd.yaw_rate, params.max_yaw_rate);
    return cmd;
}

namespace {

bool centred(const MarkerPose& pose, const LanderParams& p) {
    return std::hypot(pose.offset_px.x, pose.offset_px.y) < p.centre_band_px;
}

std::optional<double> fresh_orientation(const MarkerPose& pose) {
    if (pose.orientation_stale) return std::nullopt;
    return pose.orientation_deg;
}

void steer_xy(LandingCommand& cmd, const MarkerPose& pose, const LanderParams& p) {
    cmd.vx = -p.kp_xy * pose.offset_cm.x;
    cmd.vy = -p.kp_xy * pose.offset_cm.y;
}

void steer_yaw(LandingCommand& cmd, const MarkerPose& pose, const LanderParams& p) {
    if (const auto o = fresh_orientation(pose)) cmd.yaw_rate = -p.k_yaw * *o;
}

double altitude_hold(double lidar, double target, const LanderParams& p) { return -p.k_alt * (lidar - target); }

}  // namespace

StepResult step(const ControllerState& state, const std::optional<MarkerPose>& pose, double altitude_lidar,
                double elapsed_since_fix, const LanderParams& params) {
    using P = LandingPhase;
    StepResult out;
    out.state = state;
    auto& phase = out.state.phase;
    LandingCommand cmd;

    if (phase == P::Touchdown || phase == P::Done) {
        phase = P::Done;
        out.command = clamp_command({0, 0, 0, 0, true}, params);
        return out;
    }
    if (!(altitude_lidar > 0.0) || altitude_lidar > params.max_lidar_m) {
        out.sensor_fault = true;
        out.command = LandingCommand{};
        return out;
    }

    // Transitions first; the command below belongs to the resulting phase.
    if (phase == P::Search && pose) {
        phase = P::Align;
        out.state.centred_for_s = 0.0;
    }
    if (phase == P::Abort &&
        altitude_lidar >= params.abort_altitude_m - params.abort_altitude_band_m) {
        phase = P::Search;
    }
    if (phase == P::Descend && altitude_lidar <= params.touchdown_altitude_m) {
        phase = P::Touchdown;
        out.command = clamp_command({0, 0, 0, 0, true}, params);
        return out;
    }
    const bool tracking = phase == P::Align || phase == P::Orient || phase == P::Descend;
    if (tracking && !pose && elapsed_since_fix > params.abort_after_s) phase = P::Abort;

    switch (phase) {
        case P::Search:
            break;  // hold position and altitude
        case P::Abort:
            cmd.vz = std::max(altitude_hold(altitude_lidar, params.abort_altitude_m, params), 0.05);
            break;
        case P::Align:
        case P::Orient:
        case P::Descend: {
            if (!pose) {
                out.state.centred_for_s = 0.0;
                if (elapsed_since_fix > params.hold_after_s) break;  // hold
                if (phase == P::Orient) cmd.vz = altitude_hold(altitude_lidar, params.orient_altitude_m, params);
                if (phase == P::Descend) cmd.vz = -params.descend_rate;
                break;
            }
            steer_xy(cmd, *pose, params);
            if (phase == P::Align) {
                out.state.centred_for_s =
                    centred(*pose, params) ? out.state.centred_for_s + params.control_period_s : 0.0;
                if (out.state.centred_for_s >= params.centre_hold_s - 1e-9) phase = P::Orient;
                break;
            }
            steer_yaw(cmd, *pose, params);
            if (phase == P::Orient) {
                cmd.vz = altitude_hold(altitude_lidar, params.orient_altitude_m, params);
                const auto o = fresh_orientation(*pose);
                if (o && std::abs(*o) < params.yaw_band_deg && centred(*pose, params) &&
                    std::abs(altitude_lidar - params.orient_altitude_m) <= params.orient_altitude_band_m) {
                    phase = P::Descend;
                }
                break;
            }
            cmd.vz = -params.descend_rate;
            break;
        }
        case P::Touchdown:
        case P::Done:
            break;
    }
    out.command = clamp_command(cmd, params);
    return out;
}

DroneState integrate(const DroneState& s, const LandingCommand& cmd, const LanderParams& p) {
    DroneState n = s;
    const double dt = p.control_period_s;
    if (cmd.motors_off) {
        n.altitude = 0.0;
        n.vx = n.vy = n.vz = n.yaw_rate = 0.0;
        return n;
    }
    const double alpha = p.tau_s > 0 ? 1.0 - std::exp(-dt / p.tau_s) : 1.0;
    n.vx += alpha * (cmd.vx - s.vx);
    n.vy += alpha * (cmd.vy - s.vy);
    n.vz += alpha * (cmd.vz - s.vz);
    n.yaw_rate += alpha * (cmd.yaw_rate - s.yaw_rate);
    // The vehicle moves opposite to the commanded pad motion, rotated from
    // image axes into the pad frame: d' = -R(-yaw) v.
    const double a = s.yaw_deg * std::numbers::pi / 180.0;
    const double c = std::cos(a), sn = std::sin(a);
    n.x -= (c * n.vx + sn * n.vy) * dt;
    n.y -= (-sn * n.vx + c * n.vy) * dt;
    n.altitude = std::max(0.0, s.altitude + n.vz * dt);
    n.yaw_deg = wrap_degrees(s.yaw_deg + n.yaw_rate * dt);
    return n;
}

SimulationResult simulate(const DroneState& initial, const DetectorConfig& detector, const LanderParams& params,
                          std::uint64_t seed, const SimulationOptions& options) {
    if (!(initial.altitude >= 1.0 && initial.altitude <= 2.5)) {
        throw ContractError("simulate: initial altitude must be within [1.0, 2.5] m");
    }
    if (!(params.control_period_s > 0.0)) throw ContractError("simulate: control period must be positive");

    DetectionPipeline pipeline(detector);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> lidar_noise(0.0, params.lidar_sigma_m > 0 ? params.lidar_sigma_m : 1.0);
    std::deque<double> lidar_window;

    SimulationResult result;
    DroneState state = initial;
    ControllerState ctrl;
    std::optional<double> last_fix_t;
    std::optional<double> last_orientation;
    const double dt = params.control_period_s;
    const auto max_ticks = static_cast<std::int64_t>(std::ceil(params.timeout_s / dt));

    for (std::int64_t tick = 0; tick < max_ticks; ++tick) {
        const double t = static_cast<double>(tick) * dt;

        double raw = state.altitude;
        if (params.lidar_sigma_m > 0) raw += lidar_noise(rng);
        lidar_window.push_back(raw);
        while (static_cast<int>(lidar_window.size()) > std::max(1, params.lidar_median_window)) {
            lidar_window.pop_front();
        }
        std::vector<double> sorted(lidar_window.begin(), lidar_window.end());
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
        const double lidar = sorted[sorted.size() / 2];

        std::optional<MarkerPose> pose;
        double latency_ms = 0.0;
        if (state.altitude > 0.0) {
            ScenePose scene;
            scene.x = state.x;
            scene.y = state.y;
            scene.altitude = std::max(state.altitude, 0.01);
            scene.yaw_deg = state.yaw_deg;
            scene.illumination = options.illumination;
            scene.background = options.background;
            scene.noise_sigma = params.image_noise_sigma;
            scene.marker_present = !(options.marker_removed_at_s && t >= *options.marker_removed_at_s);
            const auto frame = render(detector.spec, detector.camera, scene, rng(), tick).frame;

            const auto started = std::chrono::steady_clock::now();
            auto detected = pipeline.process(frame, lidar);
            latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
            pose = std::move(detected.pose);
        }
        if (pose) {
            last_fix_t = t;
            if (pose->source == PoseSource::FullMarker && pose->orientation_deg) {
                last_orientation = pose->orientation_deg;
            } else if (!pose->orientation_deg && last_orientation) {
                pose->orientation_deg = last_orientation;
                pose->orientation_stale = true;
            }
        }
        const double since_fix = last_fix_t ? t - *last_fix_t : t;

        const auto stepped = step(ctrl, pose, lidar, since_fix, params);
        if (stepped.state.phase == LandingPhase::Abort) result.entered_abort = true;
        if (stepped.state.phase == LandingPhase::Touchdown) result.entered_touchdown = true;
        if (stepped.command.motors_off && !result.motors_off_true_altitude) {
            result.motors_off_true_altitude = state.altitude;
        }
        if (options.keep_log) {
            TickRecord rec;
            rec.tick = tick;
            rec.t = t;
            rec.phase = stepped.state.phase;
            rec.state = state;
            rec.lidar_m = lidar;
            rec.pose = pose;
            rec.command = stepped.command;
            rec.latency_ms = latency_ms;
            rec.overrun = latency_ms > dt * 1000.0;
            result.log.push_back(std::move(rec));
        }
        ctrl = stepped.state;
        state = integrate(state, stepped.command, params);
        result.ticks = tick + 1;
        result.elapsed_s = t + dt;
        if (ctrl.phase == LandingPhase::Done) {
            result.landed = true;
            break;
        }
    }
    result.final_state = state;
    result.final_phase = ctrl.phase;
    return result;
}

}  // namespace padland
