#include "padland/pipeline.hpp"

#include "padland/preprocess.hpp"

#include <chrono>
#include <numeric>

namespace padland {

double StageTimings::total_ms() const {
    return std::accumulate(stage_ms.begin(), stage_ms.end(), 0.0) + analysis_ms;
}

namespace {

class StageClock {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

BinarizeMode stream_mode(BinarizeMode mode) {
    return mode == BinarizeMode::Windowed ? BinarizeMode::Windowed : BinarizeMode::Interpolated;
}

}  // namespace

DetectionPipeline::DetectionPipeline(DetectorConfig config)
    : config_(std::move(config)), stream_(config_.pipeline.window, stream_mode(config_.pipeline.binarize)) {
    config_.camera.validate();
}

void DetectionPipeline::reset() {
    stream_.reset();
}

FrameResult DetectionPipeline::process(const Frame& frame, double altitude_m) {
    const auto& pc = config_.pipeline;
    FrameResult result;
    result.frame_index = frame.frame_index();
    result.altitude_m = altitude_m;
    auto& t = result.timings.stage_ms;
    StageClock clock;

    Frame grey = frame.kind() == PixelKind::RGB ? to_greyscale(frame) : frame;
    require_kind(grey, PixelKind::Grey, "DetectionPipeline::process");
    t[0] = clock.lap();
    const Frame blurred = gaussian_5x5(grey);
    t[1] = clock.lap();

    Frame binary;
    switch (pc.binarize) {
        case BinarizeMode::Interpolated:
        case BinarizeMode::Windowed:
            if (pc.frame_lag) {
                // The stream wants strictly increasing indices; keep our own counter
                // so still images and restarted sequences work too.
                Frame indexed = blurred;
                indexed.set_frame_index(next_index_++);
                binary = stream_.push(indexed).binary;
                binary.set_frame_index(frame.frame_index());
            } else {
                const auto grid = compute_grid(blurred, pc.window);
                binary = pc.binarize == BinarizeMode::Interpolated ? apply_interpolated(blurred, grid)
                                                                   : apply_windowed(blurred, grid);
            }
            break;
        case BinarizeMode::Local: binary = apply_local(blurred, pc.local_radius); break;
        case BinarizeMode::Global: binary = apply_global(blurred, pc.global_threshold); break;
    }
    t[2] = clock.lap();
    binary = erode_3x3(binary);
    t[3] = clock.lap();
    binary = median_5x5(binary);
    t[4] = clock.lap();
    binary = dilate_3x3(binary);
    t[5] = clock.lap();
    result.components = label_components(binary, pc.connectivity).components;
    t[6] = clock.lap();

    if (altitude_m > 0.05) {
        const auto expected = apparent_sizes(expected_sizes(config_.spec, config_.camera, altitude_m),
                                             config_.tolerances.edge_shrink_px);
        result.detections = classify_components(result.components, expected, config_.tolerances);
        result.assembly = assemble(result.detections, altitude_m, config_.spec, config_.assembly);
        if (result.assembly) result.pose = estimate_pose(*result.assembly, altitude_m, config_.camera);
    }
    result.timings.analysis_ms = clock.lap();
    return result;
}

Frame DetectionPipeline::binarize(const Frame& grey_in) {
    const auto& pc = config_.pipeline;
    const Frame grey = grey_in.kind() == PixelKind::RGB ? to_greyscale(grey_in) : grey_in;
    const Frame blurred = gaussian_5x5(grey);
    Frame binary;
    switch (pc.binarize) {
        case BinarizeMode::Interpolated: binary = apply_interpolated(blurred, compute_grid(blurred, pc.window)); break;
        case BinarizeMode::Windowed: binary = apply_windowed(blurred, compute_grid(blurred, pc.window)); break;
        case BinarizeMode::Local: binary = apply_local(blurred, pc.local_radius); break;
        case BinarizeMode::Global: binary = apply_global(blurred, pc.global_threshold); break;
    }
    return dilate_3x3(median_5x5(erode_3x3(binary)));
}

}  // namespace padland
