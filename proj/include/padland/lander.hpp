// Three-phase landing state machine and a closed-loop kinematic simulator.
//
// Phase graph:
//
//   Search -> Align -> Orient -> Descend -> Touchdown -> Done
//   Align/Orient/Descend --(marker lost > abort_after_s)--> Abort -> Search
//
// Horizontal setpoints are expressed in image axes and describe the pad's
// motion relative to the vehicle: the proportional law vx = -kp * offset_cm
// drives the marker image toward the principal point. The simulator moves the
// vehicle by the opposite vector, rotated into the pad frame.

#pragma once

#include "padland/marker.hpp"
#include "padland/pipeline.hpp"
#include "padland/synth.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace padland {

enum class LandingPhase { Search, Align, Orient, Descend, Touchdown, Done, Abort };

std::string to_string(LandingPhase phase);
LandingPhase parse_landing_phase(const std::string& text);

struct LandingCommand {
    double vx = 0.0, vy = 0.0;  // m/s
    double vz = 0.0;            // m/s, negative = down
    double yaw_rate = 0.0;      // deg/s
    bool motors_off = false;
};

struct DroneState {
    double x = 0.0, y = 0.0;  // metres, pad frame
    double altitude = 1.5;
    double yaw_deg = 0.0;     // apparent marker rotation in the image
    double vx = 0.0, vy = 0.0, vz = 0.0;  // achieved, command frame
    double yaw_rate = 0.0;
};

struct LanderParams {
    double control_period_s = 1.0 / 60.0;
    double kp_xy = 0.02;        // (m/s) per cm of offset
    double k_yaw = 0.5;         // (deg/s) per deg
    double k_alt = 0.8;         // (m/s) per m of altitude error
    double max_vxy = 0.5;
    double max_vz = 0.4;
    double max_yaw_rate = 30.0;
    double centre_band_px = 20.0;
    double centre_hold_s = 0.5;
    double yaw_band_deg = 5.0;
    double orient_altitude_m = 1.0;
    double orient_altitude_band_m = 0.1;
    double descend_rate = 0.2;
    double touchdown_altitude_m = 0.10;
    double hold_after_s = 1.0;
    double abort_after_s = 5.0;
    double abort_altitude_m = 1.5;
    double abort_altitude_band_m = 0.05;
    double max_lidar_m = 40.0;
    // Simulator
    double tau_s = 0.3;
    double lidar_sigma_m = 0.02;
    int lidar_median_window = 5;
    double timeout_s = 120.0;
    double image_noise_sigma = 0.0;
};

struct ControllerState {
    LandingPhase phase = LandingPhase::Search;
    double centred_for_s = 0.0;
};

struct StepResult {
    ControllerState state;
    LandingCommand command;
    bool sensor_fault = false;
};

/// Clamps setpoints to the command envelope; motors_off zeroes them.
LandingCommand clamp_command(LandingCommand cmd, const LanderParams& params);

/**
 * One control tick. @p pose is this tick's marker fix (if any); an orientation
 * flagged stale is used for centring but never for yaw control.
 */
StepResult step(const ControllerState& state, const std::optional<MarkerPose>& pose, double altitude_lidar,
                double elapsed_since_fix, const LanderParams& params);

/// Allowed transitions of the phase graph (self-loops included).
bool transition_allowed(LandingPhase from, LandingPhase to);

struct TickRecord {
    std::int64_t tick = 0;
    double t = 0.0;
    LandingPhase phase = LandingPhase::Search;  // after the step
    DroneState state;                           // before integration
    double lidar_m = 0.0;                       // filtered reading fed to step
    std::optional<MarkerPose> pose;
    LandingCommand command;
    double latency_ms = 0.0;
    bool overrun = false;
};

struct SimulationOptions {
    std::optional<double> marker_removed_at_s;  // fault injection
    Illumination illumination;
    Background background;
    bool keep_log = true;
};

struct SimulationResult {
    bool landed = false;  // reached Done
    DroneState final_state;
    LandingPhase final_phase = LandingPhase::Search;
    std::int64_t ticks = 0;
    double elapsed_s = 0.0;
    std::optional<double> motors_off_true_altitude;  // at the first motors_off tick
    bool entered_abort = false;
    bool entered_touchdown = false;
    std::vector<TickRecord> log;
};

/**
 * Closed loop: render -> detect (frame-lag thresholds) -> step -> integrate.
 * Velocities follow the setpoints with a first-order lag tau_s; the LiDAR is
 * the true altitude plus seeded Gaussian noise, median-filtered over the last
 * lidar_median_window readings before it reaches the controller.
 */
SimulationResult simulate(const DroneState& initial, const DetectorConfig& detector, const LanderParams& params,
                          std::uint64_t seed, const SimulationOptions& options = {});

/// Integrates one control period. Exposed for tests.
DroneState integrate(const DroneState& state, const LandingCommand& cmd, const LanderParams& params);

}  // namespace padland
