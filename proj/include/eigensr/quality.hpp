#pragma once

#include "eigensr/image.hpp"

namespace eigensr {

/// 10*log10(1/MSE) for intensities in [0,1]. Identical images yield
/// +infinity (serialized as "inf" in CSV output).
double psnr(const Image& a, const Image& b);

/// Mean SSIM with an 11x11 Gaussian window (sigma 1.5), C1=(0.01)^2,
/// C2=(0.03)^2, computed over windows fully inside the image.
double ssim(const Image& a, const Image& b);

}  // namespace eigensr
