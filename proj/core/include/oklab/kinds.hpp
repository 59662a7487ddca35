#pragma once

namespace oklab {

// Flavor of Okounkov body: the body of a big divisor, the valuative body of
// an effective divisor, or the limiting body of a pseudoeffective divisor.
enum class BodyKind { Big, Val, Lim };

}  // namespace oklab
