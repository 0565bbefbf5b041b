// Fixed-kernel context filters applied before and after binarization.
//
// Border policies: the greyscale Gaussian and the binary median replicate the
// nearest edge pixel; erosion and dilation treat everything outside the image
// as background, so foreground touching the border is eroded like any other.

#pragma once

#include "padland/frame.hpp"

namespace padland {

/// BT.601 luma, round(0.299 R + 0.587 G + 0.114 B). RGB in, Grey out.
Frame to_greyscale(const Frame& rgb);

/// 5x5 binomial blur ([1 4 6 4 1] outer product / 256), rounded half up.
Frame gaussian_5x5(const Frame& grey);

/// 255 iff the whole 3x3 neighbourhood is 255.
Frame erode_3x3(const Frame& binary);

/// Majority filter: 255 iff at least 13 of the 25 samples are 255.
Frame median_5x5(const Frame& binary);

/// 255 iff any pixel of the 3x3 neighbourhood is 255.
Frame dilate_3x3(const Frame& binary);

}  // namespace padland
