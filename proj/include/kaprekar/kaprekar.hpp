#pragma once

// Convenience include for the whole library.

#include "base_digits.hpp"
#include "orbit_engine.hpp"
#include "three_digit_theory.hpp"
#include "two_digit_theory.hpp"
#include "verifier.hpp"
