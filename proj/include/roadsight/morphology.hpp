#pragma once

#include "roadsight/raster.hpp"

namespace roadsight {

/// Bit set iff every neighbor under `se` (out-of-bounds counts as unset) is set.
BitMask erode(const BitMask& m, const StructElem& se = {});

/// Bit set iff any in-bounds neighbor under `se` is set.
BitMask dilate(const BitMask& m, const StructElem& se = {});

/// dilate(erode(m)). Removes speckle; idempotent.
BitMask open(const BitMask& m, const StructElem& se = {});

/// erode(dilate(m)). Fills small gaps; idempotent.
BitMask close(const BitMask& m, const StructElem& se = {});

}  // namespace roadsight
